"""Sparse matrices, unitriangular solving, and exact linear algebra.

Provides the SparseMatrix used by the canonical-basis solver, a generic
Gaussian elimination over any exact field-like coefficient type (Fraction,
quadratic extensions, rational functions), and a small rational-function
field over LaurentRat for eliminations that need division by polynomials.
"""

from fractions import Fraction

from .laurent import LaurentRat


class SparseMatrix:
    """Sparse matrix over LaurentRat with explicit ordered index lists."""

    def __init__(self, rows, cols, entries=None, unitriangular=False):
        self.rows = list(rows)
        self.cols = list(cols)
        self.entries = {}
        if entries:
            for (r, c), val in entries.items():
                if not val.is_zero():
                    self.entries[(r, c)] = val
        self.unitriangular = unitriangular
        if unitriangular:
            self._check_unitriangular()

    def _check_unitriangular(self):
        if self.rows != self.cols:
            raise ValueError('unitriangular matrix must be square')
        pos = {r: i for i, r in enumerate(self.rows)}
        for r in self.rows:
            d = self.entries.get((r, r), LaurentRat.zero())
            if not d.is_one():
                raise ValueError(f'non-unit diagonal at {r!r}')
        for (r, c) in self.entries:
            if pos[r] > pos[c] and not self.entries[(r, c)].is_zero():
                raise ValueError('entry below the diagonal in unitriangular matrix')

    def get(self, r, c):
        return self.entries.get((r, c), LaurentRat.zero())

    def set(self, r, c, val):
        if val.is_zero():
            self.entries.pop((r, c), None)
        else:
            self.entries[(r, c)] = val


def solve_unitriangular(M, rhs):
    """Solve M x = rhs by exact back substitution.

    M must be upper unitriangular with respect to its index order (unit
    diagonal, entries only at or above the diagonal).  rhs is a map
    row-index -> LaurentRat; the result has the same shape.
    """
    if not M.unitriangular:
        M._check_unitriangular()
    x = {}
    order = M.rows
    for i in range(len(order) - 1, -1, -1):
        r = order[i]
        acc = rhs.get(r, LaurentRat.zero())
        for j in range(i + 1, len(order)):
            c = order[j]
            m = M.get(r, c)
            if not m.is_zero() and c in x:
                acc = acc - m * x[c]
        if not acc.is_zero():
            x[r] = acc
    return x


# -- generic exact elimination ------------------------------------------


def _is_zero(x):
    if isinstance(x, LaurentRat):
        return x.is_zero()
    if hasattr(x, 'is_zero'):
        return x.is_zero()
    return x == 0


def row_reduce(rows):
    """In-place-free Gaussian elimination over an exact field.

    rows: list of lists of field elements supporting +, -, *, / and zero
    testing.  Returns (echelon_rows, pivot_column_indices).
    """
    rows = [list(r) for r in rows]
    pivots = []
    lead = 0
    ncols = len(rows[0]) if rows else 0
    out = []
    work = rows
    while work and lead < ncols:
        piv = None
        for i, r in enumerate(work):
            if not _is_zero(r[lead]):
                piv = i
                break
        if piv is None:
            lead += 1
            continue
        prow = work.pop(piv)
        inv = prow[lead]
        prow = [x / inv for x in prow]
        nxt = []
        for r in work:
            if _is_zero(r[lead]):
                nxt.append(r)
            else:
                f = r[lead]
                nxt.append([a - f * b for a, b in zip(r, prow)])
        out.append(prow)
        pivots.append(lead)
        work = nxt
        lead += 1
    return out, pivots


def rank(rows):
    """Rank of a matrix over an exact field."""
    return len(row_reduce(rows)[0])


def in_span(vectors, target):
    """True iff target lies in the span of vectors (exact field entries)."""
    if all(_is_zero(x) for x in target):
        return True
    if not vectors:
        return False
    r0 = rank(vectors)
    return rank(vectors + [target]) == r0


# -- dense rational polynomials (degree-indexed Fraction lists) ----------


def _ptrim(p):
    while p and not p[-1]:
        p.pop()
    return p


def padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                   for i in range(n)])


def pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def pdivmod(a, b):
    """Exact division with remainder of dense Fraction polynomials."""
    b = _ptrim(list(b))
    if not b:
        raise ZeroDivisionError('polynomial division by zero')
    a = _ptrim(list(a))
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b):
        f = a[-1] / lead
        d = len(a) - len(b)
        q[d] = f
        for i, y in enumerate(b):
            a[i + d] -= f * y
        _ptrim(a)
        if not a:
            break
    return _ptrim(q), a


def pgcd(a, b):
    """Monic gcd of dense Fraction polynomials."""
    a = _ptrim([Fraction(x) for x in a])
    b = _ptrim([Fraction(x) for x in b])
    while b:
        a, b = b, pdivmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _laurent_to_poly(x):
    """LaurentRat -> (dense poly, shift) with x = v^shift * poly."""
    if x.is_zero():
        return [], 0
    m = x.min_exp()
    deg = x.max_exp() - m
    p = [Fraction(0)] * (deg + 1)
    for e, c in x.terms.items():
        p[e - m] = c
    return p, m


def _poly_to_laurent(p, shift=0):
    return LaurentRat({i + shift: c for i, c in enumerate(p) if c})


class RatFunc:
    """Element of the fraction field of Q[v, v^-1], kept gcd-reduced."""

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = LaurentRat.const(num)
        if den is None:
            den = LaurentRat.one()
        elif isinstance(den, (int, Fraction)):
            den = LaurentRat.const(den)
        if den.is_zero():
            raise ZeroDivisionError('zero denominator')
        self.num, self.den = self._reduce(num, den)

    @staticmethod
    def _reduce(num, den):
        if num.is_zero():
            return LaurentRat.zero(), LaurentRat.one()
        pn, sn = _laurent_to_poly(num)
        pd, sd = _laurent_to_poly(den)
        g = pgcd(pn, pd)
        if len(g) > 1:
            pn = pdivmod(pn, g)[0]
            pd = pdivmod(pd, g)[0]
        # pull the whole v-shift into the numerator
        lead = pd[-1]
        pn = [x / lead for x in pn]
        pd = [x / lead for x in pd]
        return _poly_to_laurent(pn, sn - sd), _poly_to_laurent(pd, 0)

    def is_zero(self):
        return self.num.is_zero()

    def as_laurent(self):
        """Return the LaurentRat value; raises if the division is inexact."""
        if self.num.is_zero():
            return LaurentRat.zero()
        pn, sn = _laurent_to_poly(self.num)
        pd, sd = _laurent_to_poly(self.den)
        q, r = pdivmod(pn, pd)
        if r:
            raise ValueError('not a Laurent polynomial')
        return _poly_to_laurent(q, sn - sd)

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFunc.__new__(RatFunc)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError('division by zero rational function')
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, LaurentRat):
            return RatFunc(x)
        if isinstance(x, (int, Fraction)):
            return RatFunc(LaurentRat.const(x))
        raise TypeError(f'cannot coerce {x!r}')

    def __repr__(self):
        return f'({self.num!r})/({self.den!r})'
