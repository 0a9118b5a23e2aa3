"""Bar involution, slope order, and the canonical basis in windows.

The completed algebra carries a semilinear bar involution fixing the
torsion sector and sending each loop generator to an explicit series.
Within a truncation window the involution is exact, and the standard
successive-correction solver produces the unique bar-fixed elements
that are unitriangular over the PBW basis with off-diagonal
coefficients in v Z[v], ordered by Harder-Narasimhan type.
"""

from fractions import Fraction
from functools import cache
from math import gcd

from .laurent import LaurentRat, q_factorial
from .linalg import RatFunc
from .loopalg import (AlgElement, KClass, PBWMonomial, e_element,
                      hn_key, hn_segments, monomials_of_class, multiply,
                      pbw_sort_key, torsion_element, xi_element,
                      _from_words, _to_words, _word_mul, _word_truncate)
from .symfunc import SymFunc, multiply as sym_multiply, power_sum, schur


# ---------------------------------------------------------------------------
# slopes and Farey arithmetic


class Slope:
    """A normalized slope a/b with b >= 0; infinity is 1/0."""

    __slots__ = ('numerator', 'denominator')

    def __init__(self, numerator, denominator):
        if denominator == 0:
            if numerator == 0:
                raise ValueError('0/0 is not a slope')
            numerator = 1
        else:
            if denominator < 0:
                numerator, denominator = -numerator, -denominator
            g = gcd(abs(numerator), denominator)
            if g:
                numerator //= g
                denominator //= g
        self.numerator = numerator
        self.denominator = denominator

    def is_infinite(self):
        return self.denominator == 0

    def __eq__(self, other):
        if not isinstance(other, Slope):
            return NotImplemented
        return (self.numerator == other.numerator
                and self.denominator == other.denominator)

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __lt__(self, other):
        if self.is_infinite():
            return False
        if other.is_infinite():
            return True
        return (Fraction(self.numerator, self.denominator)
                < Fraction(other.numerator, other.denominator))

    def __repr__(self):
        return f'Slope({self.numerator}/{self.denominator})'


def slope_of(kclass):
    if kclass.rank == 0:
        if kclass.degree == 0:
            raise ValueError('the zero class has no slope')
        return Slope(1, 0)
    return Slope(kclass.degree, kclass.rank)


def farey_mediant(a, b):
    return Slope(a.numerator + b.numerator, a.denominator + b.denominator)


def farey_consecutive(a, b):
    """Adjacent in some Farey sequence: determinant -1."""
    return (a.numerator * b.denominator
            - a.denominator * b.numerator) == -1


def delta_mu(mu):
    """The primitive class of slope mu."""
    return KClass(mu.denominator, mu.numerator)


# ---------------------------------------------------------------------------
# HN types


def hn_type_of_monomial(m):
    """Segment classes of the split sheaf the monomial indexes: the
    torsion block first, then bundle blocks by decreasing twist."""
    return hn_segments(m)


def hn_compare(a, b):
    """Total order on HN types of one class: -1, 0, or 1; the greater
    type has the smaller slope (then the smaller size) at the first
    differing position."""
    if sum(a, KClass(0, 0)) != sum(b, KClass(0, 0)):
        raise ValueError('types of different classes are incomparable')
    ka, kb = hn_key(a), hn_key(b)
    if ka == kb:
        return 0
    return 1 if ka > kb else -1


# ---------------------------------------------------------------------------
# bar involution in a window


@cache
def _bar_tail(l):
    """The degree-l coefficient of the series xi(vs) / xi(v^-1 s) in
    power sums, where xi(s) = 1 + sum_k xi_k s^k.  These are the
    torsion tails of bar(E_t): the quotient shape makes the full
    family an exact involution, since conjugating v inverts the
    series."""
    inv = [SymFunc('p', {(): LaurentRat.one()})]
    for k in range(1, l + 1):
        acc = SymFunc('p', {})
        for j in range(1, k + 1):
            acc = acc + sym_multiply(
                power_sum((j,)).scale(LaurentRat.v_power(-j)),
                inv[k - j])
        inv.append(acc.scale(-1))
    out = inv[l]
    for a in range(1, l + 1):
        out = out + sym_multiply(
            power_sum((a,)).scale(LaurentRat.v_power(a)), inv[l - a])
    return out


@cache
def _bar_e(t, window, depth=None):
    """bar(E_t) truncated to the window: E_t plus lower-twist terms
    E_{t-l} times the degree-l torsion tail, down to the given depth."""
    if depth is None:
        depth = t - window
    out = e_element(t, window)
    for l in range(1, min(depth, t - window) + 1):
        out = out + multiply(e_element(t - l, window),
                             torsion_element(_bar_tail(l), window))
    return out


def _exact_scale_div(x, d):
    """Divide every coefficient by the Laurent polynomial d, requiring
    exactness."""
    dd = RatFunc(d)
    coeffs = {m: (RatFunc(c) / dd).as_laurent()
              for m, c in x.coeffs.items()}
    return AlgElement(x.kclass, x.window, coeffs)


@cache
def _bar_e_words(t, window, depth):
    coords, _ = _to_words(_bar_e(t, window, depth))
    return coords


@cache
def _bar_monomial(m, window):
    """bar of one PBW monomial, multiplicatively from the generator
    images.

    Deep series terms of an early factor can be straightened back into
    the window by later factors, so the product is computed in a
    buffered window: factor i keeps series depth t_i - window plus the
    total depth of the factors before it, which bounds every term that
    can survive the final truncation.  The chain runs in plain-word
    coordinates and divided-power factors are divided out only after
    truncating, where the division is exact.
    """
    factors = []
    for t, d in m.e_part:
        factors.extend([t] * d)
    prefixes, acc = [], 0
    for t in factors:
        prefixes.append(acc)
        acc += t - window
    wb = window - (prefixes[-1] if prefixes else 0)
    img = {((), ()): LaurentRat.one()}
    for t, pre in zip(factors, prefixes):
        img = _word_mul(img, _bar_e_words(t, wb, t - window + pre), wb)
    if m.torsion:
        tor, _ = _to_words(torsion_element(schur(m.torsion), wb))
        img = _word_mul(img, tor, wb)
    out = _from_words(_word_truncate(img, window), LaurentRat.one(),
                      m.kclass(), window)
    for t, d in m.e_part:
        if d > 1:
            out = _exact_scale_div(out, q_factorial(d))
    return out


def bar_window(x):
    """The semilinear bar involution of a windowed element."""
    if x.window is None:
        raise ValueError('bar needs a window')
    out = AlgElement.zero(x.kclass, x.window)
    for m, c in x.coeffs.items():
        out = out + _bar_monomial(m, x.window).scale(c.bar())
    return out


# ---------------------------------------------------------------------------
# canonical basis


def _is_v_positive_integral(c):
    """True when c lies in v Z[v]."""
    return all(e >= 1 and co.denominator == 1 for e, co in c.terms.items())


class CanonicalElement:
    """A bar-fixed window element, unitriangular over its leading PBW
    monomial with the other coefficients in v Z[v]."""

    __slots__ = ('index', 'element', 'window')

    def __init__(self, index, element, window):
        lead = element.coeffs.get(index)
        if lead is None or not lead.is_one():
            raise ValueError('leading coefficient must be one')
        for m, c in element.coeffs.items():
            if m != index and not _is_v_positive_integral(c):
                raise ValueError(f'coefficient of {m} outside vZ[v]: {c}')
        self.index = index
        self.element = element
        self.window = window

    def __eq__(self, other):
        if not isinstance(other, CanonicalElement):
            return NotImplemented
        return self.index == other.index and self.element == other.element

    def __hash__(self):
        return hash((self.index, self.element))

    def __repr__(self):
        return f'CanonicalElement({self.index!r})'

    def to_json(self):
        return {'leading_monomial': [list(self.index.e_part),
                                     list(self.index.torsion)],
                'terms': self.element.to_json()['terms']}


def _positive_part(c):
    return LaurentRat({e: co for e, co in c.terms.items() if e > 0})


def canonical_basis(kclass, window):
    """All canonical elements of the class in the window, in increasing
    HN order (partition-dominance and lexicographic tie-breaks)."""
    monos = sorted(monomials_of_class(kclass, window), key=pbw_sort_key)
    index_of = {m: i for i, m in enumerate(monos)}
    solved = []
    for i, m in enumerate(monos):
        b = AlgElement(kclass, window, {m: LaurentRat.one()})
        for _ in range(len(monos) + 1):
            d = bar_window(b) - b
            if d.is_zero():
                break
            n = max(d.coeffs, key=pbw_sort_key)
            j = index_of[n]
            if j >= i:
                raise ArithmeticError(
                    f'bar defect not lower-triangular at {kclass} '
                    f'window {window}: {n} vs {m}')
            gamma = d.coeffs[n]
            if not (gamma + gamma.bar()).is_zero():
                raise ArithmeticError(
                    f'defect coefficient not antisymmetric at {kclass} '
                    f'window {window}: {gamma}')
            b = b + solved[j].element.scale(_positive_part(gamma))
        else:
            raise ArithmeticError(
                f'canonical solver failed to converge for {kclass} '
                f'window {window} at {m}')
        solved.append(CanonicalElement(m, b, window))
    return solved


def transition_matrix(basis):
    """Rows of PBW coefficients of each canonical element, ordered by
    the solver order; unitriangular by construction."""
    monos = [ce.index for ce in basis]
    rows = []
    for ce in basis:
        rows.append([ce.element.coeffs.get(m, LaurentRat.zero())
                     for m in monos])
    return monos, rows


# ---------------------------------------------------------------------------
# closed forms


def closed_form_rank1_words(t, window):
    """Word coordinates of closed_form_rank1, with its denominator."""
    if window > t:
        raise ValueError('window above the twist')
    coords = {((t,), ()): LaurentRat.one()}
    for l in range(1, t - window + 1):
        coords[((t - l,), (l,))] = LaurentRat.v_power(l)
    return coords, LaurentRat.one()


def closed_form_rank1(t, window):
    """E_t plus the tail sum of v^l E_{t-l} xi_l down to the window."""
    coords, denom = closed_form_rank1_words(t, window)
    return _from_words(coords, denom, KClass(1, t), window)


def closed_form_rank2_words(t, kind, window):
    """Word coordinates of closed_form_rank2, with its denominator."""
    if kind not in ('equal', 'adjacent'):
        raise ValueError(f'unknown kind {kind!r}')
    if window > t:
        raise ValueError('window above the twist')
    deg = 2 * t if kind == 'equal' else 2 * t + 1
    f2 = q_factorial(2)
    coords = {}
    for t1 in range(window, t + 1):
        t2 = deg - 2 * t1
        if t2 < 0:
            continue
        # divided square: the word E_{t1} E_{t1} is [2]! E_{t1}^(2)
        key = ((t1, t1), (t2,) if t2 else ())
        coords[key] = (coords.get(key, LaurentRat.zero())
                       + LaurentRat.v_power(2 * t2))
    for t1 in range(window, t + 1):
        for t2 in range(t1 + 1, deg - t1 + 1):
            t3 = deg - t1 - t2
            key = ((t1, t2), (t3,) if t3 else ())
            coords[key] = (coords.get(key, LaurentRat.zero())
                           + LaurentRat.v_power(-1 + t2 - t1 + 2 * t3) * f2)
    return coords, f2


def closed_form_rank2(t, kind, window):
    """The two rank-two closed forms: leading term the divided square
    E_t^(2) (kind 'equal', degree 2t) or E_t E_{t+1} (kind 'adjacent',
    degree 2t+1), with tails v^(2 t2) E_{t1}^(2) xi_{t2} and
    v^(-1 + t2 - t1 + 2 t3) E_{t1} E_{t2} xi_{t3}."""
    coords, denom = closed_form_rank2_words(t, kind, window)
    deg = 2 * t if kind == 'equal' else 2 * t + 1
    return _from_words(coords, denom, KClass(2, deg), window)


# ---------------------------------------------------------------------------
# the Picard twist


def kappa_twist(x, k):
    """Shift every loop-generator twist by k; the torsion sector and
    coefficients are untouched and the window moves along."""
    coeffs = {}
    for m, c in x.coeffs.items():
        e = tuple((t + k, d) for t, d in m.e_part)
        coeffs[PBWMonomial(e, m.torsion)] = c
    window = None if x.window is None else x.window + k
    kc = KClass(x.kclass.rank, x.kclass.degree + k * x.kclass.rank)
    return AlgElement(kc, window, coeffs)
