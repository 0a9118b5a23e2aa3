"""Exact Laurent polynomials in v with rational coefficients.

The coefficient ring for the whole package.  A LaurentRat is a sparse map
from integer exponents of v to nonzero Fraction coefficients; all arithmetic
is exact and no floating point appears anywhere.  The bar involution is
v -> v^{-1}, realized as exponent negation.
"""

from fractions import Fraction
from functools import cache


class LaurentRat:
    """Sparse exact Laurent polynomial in v over Q."""

    __slots__ = ('terms',)

    def __init__(self, terms=None):
        # terms: mapping exponent -> coefficient; zeros are dropped.
        # Integer coefficients are kept as plain ints (they hash and
        # compare equal to the matching Fraction) to avoid Fraction
        # overhead in the arithmetic hot loops.
        t = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(c, int):
                    c = Fraction(c)
                    if c.denominator == 1:
                        c = c.numerator
                if c:
                    t[int(e)] = c
        self.terms = t

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero():
        return LaurentRat()

    @staticmethod
    def one():
        return LaurentRat({0: 1})

    @staticmethod
    def const(c):
        return LaurentRat({0: Fraction(c)})

    @staticmethod
    def v_power(e, c=1):
        return LaurentRat({e: Fraction(c)})

    # -- predicates and accessors -------------------------------------

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {0: Fraction(1)}

    def coeff(self, e):
        return self.terms.get(e, Fraction(0))

    def min_exp(self):
        if not self.terms:
            raise ValueError('zero polynomial has no exponents')
        return min(self.terms)

    def max_exp(self):
        if not self.terms:
            raise ValueError('zero polynomial has no exponents')
        return max(self.terms)

    def is_integral(self):
        """True iff every coefficient is an integer."""
        return all(c.denominator == 1 for c in self.terms.values())

    def is_nonneg_integral(self):
        """True iff every coefficient is a nonnegative integer (N[v,v^-1])."""
        return all(c.denominator == 1 and c >= 0 for c in self.terms.values())

    def in_v_z_v(self):
        """True iff the element lies in v*Z[v] (positive exponents, integer)."""
        return self.is_integral() and all(e >= 1 for e in self.terms)

    def positive_part(self):
        """The terms with strictly positive exponent."""
        return LaurentRat({e: c for e, c in self.terms.items() if e > 0})

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentRat.const(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        out = LaurentRat()
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentRat()
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentRat.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return LaurentRat.const(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            out = LaurentRat()
            if other:
                out.terms = {e: co * other for e, co in self.terms.items()}
            return out
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        out = LaurentRat()
        out.terms = t
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                raise ZeroDivisionError('division by zero scalar')
            return self * (1 / c)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            if len(self.terms) == 1:
                ((e, c),) = self.terms.items()
                return LaurentRat({e * n: Fraction(c) ** n})
            raise ValueError('negative powers only for monomials')
        out = LaurentRat.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentRat.const(other)
        if not isinstance(other, LaurentRat):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return '0'
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            if e == 0:
                bits.append(f'{c}')
            elif e == 1:
                bits.append(f'{c}*v' if c != 1 else 'v')
            else:
                bits.append(f'{c}*v^{e}' if c != 1 else f'v^{e}')
        return ' + '.join(bits).replace('+ -', '- ')

    # -- involution and evaluation ------------------------------------

    def bar(self):
        """The bar involution v -> v^{-1}: negate every exponent."""
        out = LaurentRat()
        out.terms = {-e: c for e, c in self.terms.items()}
        return out

    def specialize(self, v_value):
        """Exact evaluation at a nonzero rational value of v."""
        v_value = Fraction(v_value)
        if not v_value:
            raise ValueError('cannot specialize at v = 0')
        total = Fraction(0)
        for e, c in self.terms.items():
            total += c * v_value ** e
        return total

    # -- serialization -------------------------------------------------

    def to_json(self):
        """JSON form: [[exp, num-string, den-string], ...] sorted by exp."""
        return [[e, str(c.numerator), str(c.denominator)]
                for e, c in sorted(self.terms.items())]

    @staticmethod
    def from_json(data):
        return LaurentRat({int(e): Fraction(int(n), int(d)) for e, n, d in data})


def bar_coeff(c):
    """Exponent negation e -> -e applied termwise; involutive."""
    return c.bar()


def specialize(c, v_value):
    """Exact rational evaluation of a LaurentRat at v = v_value != 0."""
    return c.specialize(v_value)


@cache
def q_int(n):
    """The quantum integer [n] = v^{n-1} + v^{n-3} + ... + v^{1-n}."""
    if n < 0:
        raise ValueError('q_int requires n >= 0')
    return LaurentRat({e: 1 for e in range(1 - n, n, 2)})


@cache
def q_factorial(n):
    """The quantum factorial [n]! = [1][2]...[n]; [0]! = 1."""
    if n < 0:
        raise ValueError('q_factorial requires n >= 0')
    if n == 0:
        return LaurentRat.one()
    return q_factorial(n - 1) * q_int(n)


ZERO = LaurentRat.zero()
ONE = LaurentRat.one()
