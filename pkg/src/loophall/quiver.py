"""Nilpotent representations of the cyclic quiver over small finite fields.

Vertices are Z/nZ (0-indexed); the arrow at vertex i is x_i: V_i -> V_{i-1}.
Orbits of nilpotent representations are classified by multisegments via the
kernel-dimension invariants d_i^k.  On top of the classification: brute-force
Hall product and coproduct, the elements zeta_l, h_l, u_l, and exact span
membership for the E_i-ideal checks.

All counting values live in Q(sqrt(q)) so half-integer powers of q stay
exact at every q.
"""

from fractions import Fraction
from functools import cache
from itertools import product as iproduct

from .gfq import all_subspaces, gf, mat_inv, mat_mul, mat_rank, QSqrt
from .linalg import in_span
from .partitions import partitions


class BudgetError(ValueError):
    """Raised when an enumeration would exceed the configured budget."""


DEFAULT_BUDGETS = {2: 6, 3: 5, 4: 4, 5: 4, 7: 4, 8: 4, 9: 4, 11: 4, 13: 4}


def check_budget(q, dims, budget=None):
    limit = budget if budget is not None else DEFAULT_BUDGETS.get(q, 4)
    if sum(dims) > limit:
        raise BudgetError(f'total dimension {sum(dims)} exceeds budget {limit} at q={q}')


class Multisegment:
    """Orbit invariant: multiplicities m_{i,l} of segments (vertex, length)."""

    __slots__ = ('n', 'mult')

    def __init__(self, n, mult):
        self.n = n
        self.mult = tuple(sorted(((i % n, l), m) for (i, l), m in
                                 (mult.items() if isinstance(mult, dict) else mult)
                                 if m))

    def as_dict(self):
        return dict(self.mult)

    def dims(self):
        """Dimension vector: segment (i, l) covers i, i-1, ..., i-l+1 mod n."""
        d = [0] * self.n
        for (i, l), m in self.mult:
            for j in range(l):
                d[(i - j) % self.n] += m
        return tuple(d)

    def total(self):
        return sum(m * l for (_, l), m in self.mult)

    def __eq__(self, other):
        return (isinstance(other, Multisegment)
                and self.n == other.n and self.mult == other.mult)

    def __hash__(self):
        return hash((self.n, self.mult))

    def __repr__(self):
        return f'Multisegment(n={self.n}, {dict(self.mult)!r})'


def is_aperiodic(ms):
    """True iff every length t >= 1 misses some vertex."""
    by_len = {}
    for (i, l), m in ms.mult:
        by_len.setdefault(l, set()).add(i)
    return all(len(v) < ms.n for v in by_len.values())


class NilRep:
    """A nilpotent representation: matrices maps[i]: V_i -> V_{i-1}."""

    __slots__ = ('q', 'n', 'dims', 'maps')

    def __init__(self, q, dims, maps, check=True):
        self.q = q
        self.n = len(dims)
        self.dims = tuple(dims)
        self.maps = [tuple(tuple(r) for r in m) for m in maps]
        if check and not self.is_nilpotent():
            raise ValueError('representation is not nilpotent')

    def is_nilpotent(self):
        F = gf(self.q)
        total = sum(self.dims)
        if total == 0:
            return True
        # the composite of `total` consecutive arrows must vanish everywhere
        for start in range(self.n):
            comp = None
            i = start
            for _ in range(total):
                m = [list(r) for r in self.maps[i]]
                comp = m if comp is None else mat_mul(F, m, comp)
                i = (i + 1) % self.n
                if comp and not any(any(r) for r in comp):
                    break
            if comp and any(any(r) for r in comp):
                return False
        return True


def zero_rep(q, dims):
    n = len(dims)
    maps = [[[0] * dims[i] for _ in range(dims[(i - 1) % n])] for i in range(n)]
    return NilRep(q, dims, maps, check=False)


def orbit_of(r):
    """The multisegment of a nilpotent representation.

    d_i^k = dim Ker(x_{i-k+1} ... x_{i-1} x_i);
    m_{i,l} = d_i^l - d_i^{l-1} + d_{i+1}^l - d_{i+1}^{l+1}.
    """
    if not r.is_nilpotent():
        raise ValueError('orbit_of requires a nilpotent representation')
    F = gf(r.q)
    n, dims = r.n, r.dims
    K = sum(dims) + 1
    d = [[0] * (K + 2) for _ in range(n)]  # d[i][k]
    for i in range(n):
        comp = None
        cur = i
        for k in range(1, K + 2):
            m = [list(row) for row in r.maps[cur]]
            comp = m if comp is None else mat_mul(F, m, comp)
            d[i][k] = dims[i] - mat_rank(F, comp)
            cur = (cur - 1) % n
    mult = {}
    for i in range(n):
        for l in range(1, K + 1):
            m = d[i][l] - d[i][l - 1] + d[(i + 1) % n][l] - d[(i + 1) % n][l + 1]
            if m < 0:
                raise ArithmeticError('negative multiplicity: invariant violated')
            if m:
                mult[(i, l)] = m
    return Multisegment(n, mult)


def rep_from_multisegment(ms, q):
    """A representative of the orbit: direct sum of segment modules."""
    n = ms.n
    # basis bookkeeping: at each vertex, a list of slots
    dims = ms.dims()
    index = [dict() for _ in range(n)]  # (seg_id, pos) -> coordinate
    counters = [0] * n
    seg_id = 0
    segs = []
    for (i, l), m in ms.mult:
        for _ in range(m):
            for j in range(l):
                v = (i - j) % n
                index[v][(seg_id, j)] = counters[v]
                counters[v] += 1
            segs.append((seg_id, i, l))
            seg_id += 1
    assert tuple(counters) == dims
    maps = [[[0] * dims[i] for _ in range(dims[(i - 1) % n])] for i in range(n)]
    for sid, i, l in segs:
        for j in range(l - 1):
            v = (i - j) % n
            src = index[v][(sid, j)]
            dst = index[(v - 1) % n][(sid, j + 1)]
            maps[v][dst][src] = 1
    return NilRep(q, dims, maps, check=False)


@cache
def multisegments_of_dims(n, dims):
    """All multisegments with the given dimension vector."""
    dims = tuple(dims)
    total = sum(dims)
    segtypes = []
    for i in range(n):
        for l in range(1, total + 1):
            d = [0] * n
            for j in range(l):
                d[(i - j) % n] += 1
            if all(a <= b for a, b in zip(d, dims)):
                segtypes.append(((i, l), tuple(d)))
    out = []

    def rec(k, remaining, chosen):
        if not any(remaining):
            out.append(Multisegment(n, dict(chosen)))
            return
        if k == len(segtypes):
            return
        (seg, d) = segtypes[k]
        maxm = min((r // dd if dd else 10 ** 9)
                   for r, dd in zip(remaining, d) if dd)
        for m in range(maxm, -1, -1):
            rem = tuple(r - m * dd for r, dd in zip(remaining, d))
            if all(x >= 0 for x in rem):
                rec(k + 1, rem, chosen + ([(seg, m)] if m else []))

    rec(0, dims, [])
    return tuple(out)


# -- orbit functions -------------------------------------------------------


class OrbitFn:
    """Finitely supported function on orbits of a fixed dimension vector."""

    __slots__ = ('q', 'n', 'dims', 'values')

    def __init__(self, q, n, dims, values):
        self.q = q
        self.n = n
        self.dims = tuple(dims)
        self.values = {}
        for ms, v in values.items():
            if not isinstance(v, QSqrt):
                v = QSqrt(q, v)
            if not v.is_zero():
                self.values[ms] = v

    def value(self, ms):
        return self.values.get(ms, QSqrt(self.q, 0))

    def __add__(self, other):
        assert (self.q, self.n, self.dims) == (other.q, other.n, other.dims)
        out = dict(self.values)
        for ms, v in other.values.items():
            s = out.get(ms, QSqrt(self.q, 0)) + v
            if s.is_zero():
                out.pop(ms, None)
            else:
                out[ms] = s
        return OrbitFn(self.q, self.n, self.dims, out)

    def __neg__(self):
        return OrbitFn(self.q, self.n, self.dims,
                       {ms: -v for ms, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not isinstance(c, QSqrt):
            c = QSqrt(self.q, c)
        return OrbitFn(self.q, self.n, self.dims,
                       {ms: v * c for ms, v in self.values.items()})

    def __eq__(self, other):
        return (isinstance(other, OrbitFn)
                and (self.q, self.n, self.dims) == (other.q, other.n, other.dims)
                and self.values == other.values)

    def is_zero(self):
        return not self.values

    def __repr__(self):
        return f'OrbitFn(q={self.q}, dims={self.dims}, {self.values!r})'

    def to_json(self):
        rows = []
        for ms, v in sorted(self.values.items(), key=lambda kv: kv[0].mult):
            rows.append([[[list(k), m] for k, m in ms.mult],
                         [str(v.a), str(v.b)]])
        return {'dims': list(self.dims), 'values': rows}


def char_fn(q, ms):
    return OrbitFn(q, ms.n, ms.dims(), {ms: 1})


def one_fn(q, n, dims):
    """The characteristic function of the whole variety 1_{N_dims}."""
    return OrbitFn(q, n, dims,
                   {ms: 1 for ms in multisegments_of_dims(n, tuple(dims))})


def unit_fn(q, n):
    return OrbitFn(q, n, (0,) * n, {Multisegment(n, {}): 1})


def e_fn(q, n, i, l=1):
    """E_i^{(l)}: characteristic function of the zero rep of dims l*eps_i."""
    if n == 1:
        raise ValueError('no E generators for the Jordan quiver')
    return char_fn(q, Multisegment(n, {(i, 1): l}))


def twist_exponent(d_sub, d_quot):
    """{d', d''} = sum d'_i d''_i - sum d'_i d''_{i+1} (d' = sub class)."""
    n = len(d_sub)
    return (sum(d_sub[i] * d_quot[i] for i in range(n))
            - sum(d_sub[i] * d_quot[(i + 1) % n] for i in range(n)))


def stable_sub_quotient_types(x, d_sub):
    """All x-stable subspace tuples of dims d_sub with their types.

    Yields (sub_multisegment, quot_multisegment) per stable tuple.
    """
    F = gf(x.q)
    n, dims = x.n, x.dims
    choices = [all_subspaces(F, dims[i], d_sub[i]) for i in range(n)]
    # precompute change-of-basis matrices per vertex choice
    for combo in iproduct(*choices):
        bases = []
        ok = True
        for i in range(n):
            rows = [list(r) for r in combo[i]]
            # complement: standard vectors at non-pivot coordinates
            pivots = [next(j for j, v in enumerate(r) if v) for r in rows]
            comp = [j for j in range(dims[i]) if j not in pivots]
            cols = [list(r) for r in rows] + \
                   [[int(k == j) for k in range(dims[i])] for j in comp]
            # matrix with these as columns
            M = [[cols[c][r] for c in range(dims[i])] for r in range(dims[i])]
            try:
                Minv = mat_inv(F, M)
            except ValueError:
                ok = False
                break
            bases.append((M, Minv))
        if not ok:
            continue
        sub_maps, quot_maps = [], []
        stable = True
        for i in range(n):
            tgt = (i - 1) % n
            M_i = bases[i][0]
            Minv_t = bases[tgt][1]
            y = mat_mul(F, Minv_t, mat_mul(F, [list(r) for r in x.maps[i]], M_i))
            k_t, k_i = d_sub[tgt], d_sub[i]
            # lower-left block must vanish for stability
            if any(y[r][c] for r in range(k_t, dims[tgt]) for c in range(k_i)):
                stable = False
                break
            sub_maps.append([row[:k_i] for row in y[:k_t]])
            quot_maps.append([row[k_i:] for row in y[k_t:]])
        if not stable:
            continue
        sub = NilRep(x.q, d_sub, sub_maps, check=False)
        quot = NilRep(x.q, tuple(a - b for a, b in zip(dims, d_sub)),
                      quot_maps, check=False)
        yield orbit_of(sub), orbit_of(quot)


def hall_product_bruteforce(f, g, q=None, budget=None, twist_sign=-1):
    """Hall product: f evaluates on the subrepresentation, g on the quotient.

    The value at an orbit x of class d' + d'' is
    q^{twist_sign * (1/2) {d', d''}} * sum over x-stable V' of dims d' of
    f(V') g(V/V'').  The calibrated twist sign makes E_i * E_i = [2] E_i^(2)
    at v = q^(-1/2); see the calibration test.
    """
    q = q or f.q
    assert f.q == g.q == q and f.n == g.n
    n = f.n
    d_sub, d_quot = f.dims, g.dims
    dims = tuple(a + b for a, b in zip(d_sub, d_quot))
    check_budget(q, dims, budget)
    twist = QSqrt.v_power(q, -twist_sign * twist_exponent(d_sub, d_quot))
    out = {}
    for ms in multisegments_of_dims(n, dims):
        x = rep_from_multisegment(ms, q)
        acc = QSqrt(q, 0)
        for sub_t, quot_t in stable_sub_quotient_types(x, d_sub):
            fv = f.value(sub_t)
            if fv.is_zero():
                continue
            gv = g.value(quot_t)
            if gv.is_zero():
                continue
            acc = acc + fv * gv
        if not acc.is_zero():
            out[ms] = acc * twist
    return OrbitFn(q, n, dims, out)


def hall_structure_count(ms_sub, ms_quot, q, budget=None):
    """Untwisted Hall counts at a fixed q: for every orbit x of the summed
    class, the number of x-stable subrepresentation tuples of type ms_sub
    whose quotient has type ms_quot.  Integer-valued; polynomial in q."""
    n = ms_sub.n
    d_sub, d_quot = ms_sub.dims(), ms_quot.dims()
    dims = tuple(a + b for a, b in zip(d_sub, d_quot))
    check_budget(q, dims, budget)
    out = {}
    for ms in multisegments_of_dims(n, dims):
        x = rep_from_multisegment(ms, q)
        c = sum(1 for sub_t, quot_t in stable_sub_quotient_types(x, d_sub)
                if sub_t == ms_sub and quot_t == ms_quot)
        if c:
            out[ms] = c
    return out


def coproduct_bruteforce(f, q=None, split=None, budget=None, twist_sign=1,
                         normalized=True):
    """Delta_{d'', d'}(f) = v^{{d', d''}} kappa_! iota^*(f).

    split = (d'', d') with d'' the quotient class and d' the subspace class.
    The fixed subspace V' is spanned by the first d'_i coordinates; the
    fiber of kappa over (y'', y') is the space of fillings b_i: V''_i ->
    V'_{i-1}.  With normalized=True the fiber sum is divided by its size
    q^{sum d'_{i-1} d''_i}, the calibration that makes Delta(1_{l+m}) =
    1_l (x) 1_m and Delta(zeta_{l+m}) = zeta_l (x) zeta_m exact.  Returns
    a map (quotient multisegment, sub multisegment) -> value.
    """
    q = q or f.q
    d_quot, d_sub = split
    n = f.n
    if tuple(a + b for a, b in zip(d_quot, d_sub)) != f.dims:
        raise ValueError('split does not sum to the class of f')
    check_budget(q, f.dims, budget)
    twist = QSqrt.v_power(q, twist_sign * twist_exponent(d_sub, d_quot))
    if normalized:
        fib = sum(d_sub[(i - 1) % n] * d_quot[i] for i in range(n))
        twist = twist * QSqrt(q, Fraction(1, q ** fib))
    out = {}
    for ms_q in multisegments_of_dims(n, tuple(d_quot)):
        y_quot = rep_from_multisegment(ms_q, q)
        for ms_s in multisegments_of_dims(n, tuple(d_sub)):
            y_sub = rep_from_multisegment(ms_s, q)
            acc = QSqrt(q, 0)
            # all block-triangular fillings b_i: V''_i -> V'_{i-1}
            shapes = [(d_sub[(i - 1) % n], d_quot[i]) for i in range(n)]
            for filling in iproduct(*[_all_matrices(q, r, c) for r, c in shapes]):
                maps = []
                for i in range(n):
                    tgt = (i - 1) % n
                    top = [list(y_sub.maps[i][r]) + list(filling[i][r])
                           for r in range(d_sub[tgt])]
                    bot = [[0] * d_sub[i] + list(y_quot.maps[i][r])
                           for r in range(d_quot[tgt])]
                    maps.append(top + bot)
                x = NilRep(q, f.dims, maps, check=False)
                v = f.value(orbit_of(x))
                if not v.is_zero():
                    acc = acc + v
            if not acc.is_zero():
                out[(ms_q, ms_s)] = acc * twist
    return out


@cache
def _all_matrices(q, r, c):
    if r == 0 or c == 0:
        return (tuple(tuple() for _ in range(r)),)
    cells = r * c
    out = []
    for enc in range(q ** cells):
        vals = []
        a = enc
        for _ in range(cells):
            vals.append(a % q)
            a //= q
        out.append(tuple(tuple(vals[i * c:(i + 1) * c]) for i in range(r)))
    return tuple(out)


# -- the elements zeta_l, h_l, u_l ----------------------------------------


def zeta(q, n, l):
    """zeta_l = sum over |lambda| = l of 1_{O_lambda}: orbits of dims
    (l,...,l) with all arrows except x_0 isomorphisms (x_0 of Jordan type
    lambda)."""
    vals = {}
    for lam in partitions(l):
        vals[_zeta_orbit(q, n, lam)] = 1
    return OrbitFn(q, n, (l,) * n, vals)


def _zeta_orbit(q, n, lam):
    l = sum(lam)
    if n == 1:
        # Jordan quiver: orbit of nilpotent of type lambda
        return Multisegment(1, {(0, p): lam.count(p) for p in set(lam)})
    F = gf(q)
    jordan = _jordan_matrix(lam, l)
    maps = []
    for i in range(n):
        if i == 0:
            maps.append(jordan)
        else:
            maps.append([[int(a == b) for b in range(l)] for a in range(l)])
    return orbit_of(NilRep(q, (l,) * n, maps, check=False))


def _jordan_matrix(lam, size):
    m = [[0] * size for _ in range(size)]
    pos = 0
    for p in lam:
        for j in range(p - 1):
            m[pos + j + 1][pos + j] = 1
        pos += p
    return m


def h_element(q, n, l):
    """h_l = (1/l) sum_{|lambda|=l} n(len(lambda)-1) 1_{O_lambda}, with
    n(k) = prod_{i=1..k} (1 - v^{-2i}) = prod (1 - q^i) and n(0) = 1.

    The n(0) = 1 convention is pinned by the generating identity
    1 + sum_l zeta_l s^l = exp(sum_l h_l s^l) in the Hall algebra."""
    vals = {}
    for lam in partitions(l):
        k = len(lam) - 1
        c = Fraction(1)
        for i in range(1, k + 1):
            c *= 1 - Fraction(q) ** i
        vals[_zeta_orbit(q, n, lam)] = QSqrt(q, c * Fraction(1, l))
    return OrbitFn(q, n, (l,) * n, vals)


def u_sequence(q, n, r, budget=None, twist_sign=-1):
    """u_1..u_r solving 1_{(l..l)} = zeta_l + zeta_{l-1} u_1 + ... + u_l."""
    us = {}
    for l in range(1, r + 1):
        acc = one_fn(q, n, (l,) * n) - zeta(q, n, l)
        for j in range(1, l):
            acc = acc - hall_product_bruteforce(zeta(q, n, l - j), us[j],
                                                budget=budget,
                                                twist_sign=twist_sign)
        us[l] = acc
    return [us[l] for l in range(1, r + 1)]


def check_in_EH(f, q=None, budget=None, twist_sign=-1):
    """True iff f lies in span of {E_i * g} over vertices i and orbit
    functions g of complementary class (exact linear algebra over
    Q(sqrt(q)))."""
    q = q or f.q
    n = f.n
    if f.is_zero():
        return True
    basis = sorted(multisegments_of_dims(n, f.dims), key=lambda m: m.mult)
    idx = {ms: k for k, ms in enumerate(basis)}
    span_vecs = []
    for i in range(n):
        rest = list(f.dims)
        rest[i] -= 1
        if rest[i] < 0:
            continue
        for ms in multisegments_of_dims(n, tuple(rest)):
            prod = hall_product_bruteforce(e_fn(q, n, i), char_fn(q, ms),
                                           budget=budget, twist_sign=twist_sign)
            vec = [QSqrt(q, 0)] * len(basis)
            for m, v in prod.values.items():
                vec[idx[m]] = v
            span_vecs.append(vec)
    target = [QSqrt(q, 0)] * len(basis)
    for m, v in f.values.items():
        target[idx[m]] = v
    return in_span(span_vecs, target)
