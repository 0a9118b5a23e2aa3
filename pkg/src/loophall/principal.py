"""The annihilator ideal of the highest-weight vector and the graded
quotient modeling the principal subspace.

The quotient of the loop algebra by the left ideal generated by the
torsion sector, the nonnegative rank-one closed forms, and the
negative rank-two closed forms has weight spaces conjecturally
enumerated by strictly increasing negative twist sequences with gaps
of at least two.  Everything here is exact linear algebra inside
truncation windows; the conjecture comparison only reports.
"""

from .canonical import (canonical_basis, closed_form_rank1,
                        closed_form_rank1_words, closed_form_rank2,
                        closed_form_rank2_words)
from .laurent import LaurentRat
from .linalg import RatFunc
from .loopalg import (KClass, PBWMonomial, e_element, monomials_of_class,
                      normally_ordered_current_coeff, torsion_element,
                      _e_straighten, _merge_parts, _to_words, _x_past)
from .partitions import partitions
from .quiver import BudgetError
from .symfunc import schur, _schur_in_p

MAX_RANK = 2
MONOMIAL_CAP = 4000


def ideal_generators(window, max_degree):
    """Window truncations of the generators of the annihilator ideal:
    every Schur torsion element, the rank-one closed forms at
    nonnegative twist, and both rank-two closed forms at negative
    twist, up to the class-degree bound."""
    gens = []
    for l in range(1, max_degree + 1):
        for lam in partitions(l):
            gens.append(torsion_element(schur(lam), window))
    for t in range(max(0, window), max_degree + 1):
        gens.append(closed_form_rank1(t, window))
    for t in range(window, 0):
        gens.append(closed_form_rank2(t, 'equal', window))
        gens.append(closed_form_rank2(t, 'adjacent', window))
    return gens


def current_ideal_generators(l, r, window, max_degree):
    """Generators of the level-l current ideal: E_t for t >= r, all
    Schur torsion elements, and every coefficient of the l-th normally
    ordered current, within the window and degree bound."""
    if l < 1:
        raise ValueError('current power must be positive')
    gens = []
    for t in range(max(r, window), max_degree + 1):
        gens.append(e_element(t, window))
    for d in range(1, max_degree + 1):
        for lam in partitions(d):
            gens.append(torsion_element(schur(lam), window))
    for t in range(l * window, max_degree + 1):
        x = normally_ordered_current_coeff(l, t, window)
        if not x.is_zero():
            gens.append(x)
    return gens


# The span linear algebra runs in plain-word coordinates: a column is
# (non-decreasing twist tuple, power-sum partition).  This is an
# invertible relabelling of the PBW monomials of the class, but products
# never leave the word level, so no Schur conversions happen per term.


def _expand_twists(m):
    return tuple(t for t, d in m.e_part for _ in range(d))


def _pword_coords(x):
    """Plain-word coordinates of an element; the dropped common
    denominator only rescales rows, which never changes spans."""
    coords, _ = _to_words(x)
    return coords


def _left_mul_row(e1, nu, gcoords, window, index):
    """Sparse row of (word e1, xi_nu) times a generator in plain-word
    coordinates, truncated to the window."""
    acc = {}
    for (e2, mu), c in gcoords.items():
        for e2p, rho, c1 in _x_past(nu, e2):
            cc1 = c * c1
            for ef, c2 in _e_straighten(e1 + e2p):
                if ef and ef[0] < window:
                    continue
                key = (ef, _merge_parts(rho, mu))
                val = acc.get(key, LaurentRat.zero()) + cc1 * c2
                if val.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = val
    return {index[k]: RatFunc(v) for k, v in acc.items()}


def _sparse_reduce(rows, pivots=None):
    """Incremental Gaussian elimination on sparse rows (dicts mapping
    column index to RatFunc).  pivots maps pivot column to its
    normalized row; returns the updated pivot table."""
    if pivots is None:
        pivots = {}
    for row in rows:
        row = {c: x for c, x in row.items() if not x.is_zero()}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = row[c]
                pivots[c] = {cc: xx / inv for cc, xx in row.items()}
                break
            f = row.pop(c)
            for cc, xx in piv.items():
                if cc == c:
                    continue
                nv = row.get(cc, RatFunc(0)) - f * xx
                if nv.is_zero():
                    row.pop(cc, None)
                else:
                    row[cc] = nv
    return pivots


def _generator_family(kclass, window):
    """All ideal generators whose class fits inside kclass with a
    nonempty complementary window space, as (class, word coordinates)
    pairs.  Deep generator tails can straighten back into the window
    when left-multiplied, so each generator is built in a window
    buffered by the surplus of its own complementary class, which
    bounds how far a multiplier can raise the tail."""
    r, d = kclass.rank, kclass.degree

    def buffered(cc):
        return window - max(0, cc.degree - cc.rank * window)

    gens = []
    for l in range(1, d - r * window + 1):
        if monomials_of_class(KClass(r, d - l), window):
            # torsion generators sit rightmost in a product and have
            # no tail, so no buffer is needed
            for lam in partitions(l):
                coords = {((), mu): c
                          for mu, c in _schur_in_p(lam).items()}
                gens.append((KClass(0, l), coords))
    if r >= 1:
        for t in range(max(0, window), d - (r - 1) * window + 1):
            cc = KClass(r - 1, d - t)
            if monomials_of_class(cc, window):
                coords, _ = closed_form_rank1_words(t, buffered(cc))
                gens.append((KClass(1, t), coords))
    if r >= 2:
        for t in range(window, 0):
            if d - 2 * t >= 0:
                coords, _ = closed_form_rank2_words(
                    t, 'equal', buffered(KClass(0, d - 2 * t)))
                gens.append((KClass(2, 2 * t), coords))
            if d - 2 * t - 1 >= 0:
                coords, _ = closed_form_rank2_words(
                    t, 'adjacent', buffered(KClass(0, d - 2 * t - 1)))
                gens.append((KClass(2, 2 * t + 1), coords))
    return gens


def ideal_span_rows(kclass, window):
    """Echelon rows spanning the ideal's intersection with the window
    space of the class, over the PBW monomial coordinates."""
    monos = monomials_of_class(kclass, window)
    if kclass.rank > MAX_RANK or len(monos) > MONOMIAL_CAP:
        raise BudgetError(
            f'ideal span for {kclass} window {window} out of budget')
    index = {(_expand_twists(m), m.torsion): i for i, m in enumerate(monos)}
    pivots = {}
    for gclass, gcoords in _generator_family(kclass, window):
        cc = kclass - gclass
        for m in monomials_of_class(cc, window):
            row = _left_mul_row(_expand_twists(m), m.torsion,
                                gcoords, window, index)
            if row:
                _sparse_reduce([row], pivots)
    return monos, pivots


def quotient_dims(class_list, window):
    """Graded dimensions of the window quotient by the ideal span."""
    out = {}
    for kclass in class_list:
        monos, pivots = ideal_span_rows(kclass, window)
        out[kclass] = len(monos) - len(pivots)
    return out


def c_enumerate(n_shift, kclass):
    """Admissible twist sequences of the class: strictly increasing
    negatives with consecutive gaps >= 2, shifted down by 2 * n_shift."""
    n = kclass.rank
    if kclass.degree != 0 and n == 0:
        return []
    base = kclass.degree + 2 * n_shift * n
    out = []

    def rec(prefix, remaining, low, deg_left):
        if remaining == 0:
            if deg_left == 0:
                out.append(tuple(p - 2 * n_shift for p in prefix))
            return
        top = -1 - 2 * (remaining - 1)
        for l in range(low, top + 1):
            rest = deg_left - l
            # the remaining entries are at least l+2, l+4, ...
            if rest < sum(l + 2 * i for i in range(1, remaining)):
                continue
            rec(prefix + [l], remaining - 1, l + 2, rest)

    if n == 0:
        return [()] if base == 0 else []
    low0 = min(base, -1 - 2 * (n - 1))
    rec([], n, low0, base)
    return sorted(out)


def _sequence_monomial(seq):
    return PBWMonomial(tuple((t, 1) for t in seq), ())


def conjecture_report(class_list, window):
    """Per class: the quotient dimension, the admissible-sequence
    count, whether the canonical elements indexed by those sequences
    stay independent modulo the ideal, and a verdict.  The verdict is
    informational; it never gates anything."""
    report = []
    for kclass in class_list:
        monos, pivots = ideal_span_rows(kclass, window)
        index = {(_expand_twists(m), m.torsion): i
                 for i, m in enumerate(monos)}
        qdim = len(monos) - len(pivots)
        seqs = [s for s in c_enumerate(0, kclass)
                if all(t >= window for t in s)]
        independent = None
        if seqs:
            basis = {ce.index: ce.element
                     for ce in canonical_basis(kclass, window)}
            vecs = []
            for s in seqs:
                coords = _pword_coords(basis[_sequence_monomial(s)])
                vecs.append({index[k]: RatFunc(v)
                             for k, v in coords.items()})
            joint = _sparse_reduce(vecs, {c: dict(r)
                                          for c, r in pivots.items()})
            independent = len(joint) == len(pivots) + len(vecs)
        if qdim == len(seqs) and independent in (True, None):
            verdict = 'PASS'
        elif qdim > len(seqs):
            verdict = 'UNDECIDED'
        else:
            verdict = 'FAIL'
        report.append({'class': [kclass.rank, kclass.degree],
                       'window': window,
                       'quotient_dim': qdim,
                       'c0_count': len(seqs),
                       'independent': independent,
                       'verdict': verdict})
    return report
