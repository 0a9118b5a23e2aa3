"""The ring of symmetric functions with exact basis transitions.

Bases: power sums (p), Schur (s), monomial (m), elementary (e), complete
homogeneous (h), and Hall-Littlewood P-polynomials (hl).  Everything is
computed per homogeneous degree through the monomial basis; transition
matrices are cached.  The Hall-Littlewood structure constants double as an
independent classical oracle for Hall numbers of torsion modules at a
rational point.
"""

from fractions import Fraction
from functools import cache
from math import factorial

from .laurent import LaurentRat
from .linalg import RatFunc
from .partitions import (conjugate, distinct_permutations, dominance_key,
                         n_invariant, normalize, partitions, z_lambda)

BASES = ('p', 's', 'm', 'e', 'h')


def _orbit_size(padded):
    n = len(padded)
    size = factorial(n)
    for part in set(padded):
        size //= factorial(padded.count(part))
    return size


def _pad(lam, n):
    return tuple(lam) + (0,) * (n - len(lam))


def mul_m(f, g, nvars):
    """Product of two m-basis coefficient dicts, valid for >= nvars variables.

    Uses the orbit-counting shortcut: fix one factor's exponent vector,
    permute the other, and correct by orbit sizes.
    """
    out = {}
    for lam, cl in f.items():
        for mu, cm in g.items():
            if len(lam) + 0 > nvars or len(mu) > nvars:
                raise ValueError('not enough variables')
            lp, mp = _pad(lam, nvars), _pad(mu, nvars)
            # permute the factor with the smaller orbit
            if _orbit_size(mp) > _orbit_size(lp):
                lp, mp = mp, lp
            counts = {}
            for beta in distinct_permutations(mp):
                nu = tuple(sorted((a + b for a, b in zip(lp, beta)),
                                  reverse=True))
                counts[nu] = counts.get(nu, 0) + 1
            base = _orbit_size(lp)
            c = cl * cm
            for nu, k in counts.items():
                coeff = Fraction(k * base, _orbit_size(nu))
                key = normalize(nu)
                val = out.get(key, 0) + c * coeff
                if _zeroish(val):
                    out.pop(key, None)
                else:
                    out[key] = val
    return out


def _zeroish(x):
    if isinstance(x, LaurentRat):
        return x.is_zero()
    if isinstance(x, RatFunc):
        return x.is_zero()
    return x == 0


# -- expansions of the classical bases into the monomial basis -----------


@cache
def _gen_to_m(kind, k):
    """m-expansion of p_k, e_k or h_k (coefficients Fraction)."""
    if k == 0:
        return {(): Fraction(1)}
    if kind == 'p':
        return {(k,): Fraction(1)}
    if kind == 'e':
        return {(1,) * k: Fraction(1)}
    if kind == 'h':
        return {lam: Fraction(1) for lam in partitions(k)}
    raise ValueError(kind)


@cache
def _prod_to_m(kind, comp):
    """m-expansion of a product of p/e/h generators (sorted composition)."""
    out = {(): Fraction(1)}
    total = sum(comp)
    for k in comp:
        out = mul_m(out, _gen_to_m(kind, k), total)
    return out


@cache
def _schur_to_m(lam):
    """Jacobi-Trudi: s_lam = det(h_{lam_i - i + j}) expanded into m."""
    lam = tuple(lam)
    if not lam:
        return {(): Fraction(1)}
    ell = len(lam)
    out = {}
    for sigma in distinct_permutations(tuple(range(ell))):
        degs = []
        ok = True
        for i in range(ell):
            d = lam[i] - (i + 1) + (sigma[i] + 1)
            if d < 0:
                ok = False
                break
            if d > 0:
                degs.append(d)
        if not ok:
            continue
        sgn = _perm_sign(sigma)
        term = _prod_to_m('h', tuple(sorted(degs, reverse=True)))
        for nu, c in term.items():
            val = out.get(nu, Fraction(0)) + sgn * c
            if val:
                out[nu] = val
            else:
                out.pop(nu, None)
    return out


def _perm_sign(sigma):
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


# -- direct p <-> s transitions via symmetric group characters ----------


def _strip_removals(lam, r):
    """Partitions obtained by removing a border strip of size r, with
    the sign (-1)^height, via beta-numbers: replace one first-column
    hook length b by b - r."""
    l = len(lam)
    beta = [lam[i] + (l - 1 - i) for i in range(l)]
    bset = set(beta)
    out = []
    for b in beta:
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for x in beta if nb < x < b)
        newbeta = sorted((bset - {b}) | {nb}, reverse=True)
        mu = normalize(tuple(x - (l - 1 - j)
                             for j, x in enumerate(newbeta)))
        out.append((mu, -1 if height % 2 else 1))
    return out


@cache
def _mn_char(lam, mu):
    """Irreducible symmetric group character chi^lam(mu), by the
    Murnaghan-Nakayama border-strip recursion."""
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    total = 0
    for nl, sgn in _strip_removals(lam, r):
        total += sgn * _mn_char(nl, rest)
    return total


@cache
def _schur_in_p(lam):
    """s_lam = sum_mu chi^lam(mu) / z_mu p_mu."""
    out = {}
    for mu in partitions(sum(lam)):
        c = _mn_char(lam, mu)
        if c:
            out[mu] = Fraction(c, z_lambda(mu))
    return out


@cache
def _p_in_schur(mu):
    """p_mu = sum_lam chi^lam(mu) s_lam."""
    out = {}
    for lam in partitions(sum(mu)):
        c = _mn_char(lam, mu)
        if c:
            out[lam] = c
    return out


@cache
def basis_to_m_matrix(basis, d):
    """{partition_of_d: m-expansion dict} for the given basis."""
    out = {}
    for lam in partitions(d):
        if basis == 'm':
            out[lam] = {lam: Fraction(1)}
        elif basis == 's':
            out[lam] = _schur_to_m(lam)
        else:
            out[lam] = _prod_to_m(basis, lam)
    return out


@cache
def m_to_basis_matrix(basis, d):
    """Inverse transition: m-coordinates -> basis coordinates, per degree."""
    parts = list(partitions(d))
    idx = {lam: i for i, lam in enumerate(parts)}
    n = len(parts)
    fwd = basis_to_m_matrix(basis, d)
    # rows: image of each basis element in m-coordinates
    mat = [[Fraction(0)] * n for _ in range(n)]
    for lam, exp in fwd.items():
        for nu, c in exp.items():
            mat[idx[nu]][idx[lam]] = c  # column lam, row nu: m-coords
    inv = _invert(mat)
    # inv maps m-coordinate vectors to basis coordinates
    out = {}
    for j, lam in enumerate(parts):
        out[lam] = {parts[i]: inv[i][j] for i in range(n) if inv[i][j]}
    return out


def _invert(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        f = aug[col][col]
        aug[col] = [x / f for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                g = aug[r][col]
                aug[r] = [a - g * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# -- SymFunc ---------------------------------------------------------------


class SymFunc:
    """A symmetric function: coefficients over LaurentRat in a named basis."""

    __slots__ = ('basis', 'coeffs')

    def __init__(self, basis, coeffs):
        if basis not in BASES:
            raise ValueError(f'unknown basis {basis!r}')
        self.basis = basis
        self.coeffs = {}
        for lam, c in coeffs.items():
            if not isinstance(c, LaurentRat):
                c = LaurentRat.const(c)
            if not c.is_zero():
                self.coeffs[normalize(lam)] = c

    @staticmethod
    def generator(basis, k):
        return SymFunc(basis, {(k,): LaurentRat.one()})

    @staticmethod
    def one(basis='p'):
        return SymFunc(basis, {(): LaurentRat.one()})

    def is_zero(self):
        return not self.coeffs

    def degrees(self):
        return sorted({sum(lam) for lam in self.coeffs})

    def homogeneous(self, d):
        return SymFunc(self.basis,
                       {lam: c for lam, c in self.coeffs.items()
                        if sum(lam) == d})

    def __add__(self, other):
        other = self._coerced(other)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            s = out.get(lam, LaurentRat.zero()) + c
            if s.is_zero():
                out.pop(lam, None)
            else:
                out[lam] = s
        return SymFunc(self.basis, out)

    def __neg__(self):
        return SymFunc(self.basis, {lam: -c for lam, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerced(other))

    def scale(self, c):
        if not isinstance(c, LaurentRat):
            c = LaurentRat.const(c)
        return SymFunc(self.basis, {lam: co * c for lam, co in self.coeffs.items()})

    def _coerced(self, other):
        if not isinstance(other, SymFunc):
            raise TypeError(other)
        return convert(other, self.basis)

    def __eq__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        return convert(self, 'm').coeffs == convert(other, 'm').coeffs

    def __hash__(self):
        mm = convert(self, 'm').coeffs
        return hash(tuple(sorted((lam, c) for lam, c in mm.items())))

    def __repr__(self):
        bits = [f'{c!r}*{self.basis}{list(lam)}'
                for lam, c in sorted(self.coeffs.items())]
        return ' + '.join(bits) if bits else '0'

    def to_json(self):
        return {'basis': self.basis,
                'terms': [[list(lam), c.to_json()]
                          for lam, c in sorted(self.coeffs.items())]}

    @staticmethod
    def from_json(data):
        return SymFunc(data['basis'],
                       {tuple(lam): LaurentRat.from_json(c)
                        for lam, c in data['terms']})


def convert(f, target):
    """Change of basis, exact, path-independent."""
    if target not in BASES:
        raise ValueError(f'unknown basis {target!r}')
    if f.basis == target:
        return f
    if (f.basis, target) in (('s', 'p'), ('p', 's')):
        # direct character transition; the m-basis route is far slower
        # at high degree
        table = _schur_in_p if f.basis == 's' else _p_in_schur
        out = {}
        for lam, c in f.coeffs.items():
            for mu, r in table(lam).items():
                s = out.get(mu, LaurentRat.zero()) + c * r
                if s.is_zero():
                    out.pop(mu, None)
                else:
                    out[mu] = s
        return SymFunc(target, out)
    out = {}
    for d in f.degrees():
        piece = f.homogeneous(d)
        fwd = basis_to_m_matrix(f.basis, d)
        mcoords = {}
        for lam, c in piece.coeffs.items():
            for nu, r in fwd[lam].items():
                s = mcoords.get(nu, LaurentRat.zero()) + c * r
                if s.is_zero():
                    mcoords.pop(nu, None)
                else:
                    mcoords[nu] = s
        if target == 'm':
            for nu, c in mcoords.items():
                out[nu] = out.get(nu, LaurentRat.zero()) + c
            continue
        inv = m_to_basis_matrix(target, d)
        for nu, c in mcoords.items():
            for lam, r in inv[nu].items():
                s = out.get(lam, LaurentRat.zero()) + c * r
                if s.is_zero():
                    out.pop(lam, None)
                else:
                    out[lam] = s
    return SymFunc(target, out)


def multiply(f, g):
    """Exact product, expanded in f's basis."""
    fm = convert(f, 'm')
    gm = convert(g, 'm')
    out = {}
    for d1 in fm.degrees():
        for d2 in gm.degrees():
            prod = mul_m(fm.homogeneous(d1).coeffs,
                         gm.homogeneous(d2).coeffs, d1 + d2)
            for nu, c in prod.items():
                if isinstance(c, Fraction):
                    c = LaurentRat.const(c)
                s = out.get(nu, LaurentRat.zero()) + c
                if s.is_zero():
                    out.pop(nu, None)
                else:
                    out[nu] = s
    return convert(SymFunc('m', out), f.basis)


# -- Hall-Littlewood P-polynomials ----------------------------------------


def _hl_inner_matrix(d, t):
    """Gram matrix of the m-basis for the HL inner product, over RatFunc."""
    parts = list(partitions(d))
    p2m = basis_to_m_matrix('p', d)
    m2p = m_to_basis_matrix('p', d)
    # p-coordinates of each m_lambda
    pcoords = {lam: m2p[lam] for lam in parts}
    weights = {}
    for lam in parts:
        w = RatFunc(1)
        for part in lam:
            w = w * RatFunc(LaurentRat.one(),
                            LaurentRat.one() - t ** part)
        weights[lam] = w * RatFunc(LaurentRat.const(z_lambda(lam)))
    gram = {}
    for a in parts:
        for b in parts:
            acc = RatFunc(0)
            for rho in parts:
                ca = pcoords[a].get(rho)
                cb = pcoords[b].get(rho)
                if ca and cb:
                    acc = acc + RatFunc(LaurentRat.const(ca * cb)) * weights[rho]
            gram[(a, b)] = acc
    return parts, gram


@cache
def _hl_basis(d, t):
    """HL P-polynomials of degree d at parameter t, as m-coefficient dicts.

    Gram-Schmidt along a linear extension of dominance, normalized so the
    coefficient of m_lambda in P_lambda is 1 (Macdonald's construction).
    """
    parts, gram = _hl_inner_matrix(d, t)
    order = sorted(parts, key=dominance_key)  # dominance-ascending
    done = {}       # lam -> m-coords as {mu: RatFunc}
    norms = {}
    def inner(xc, yc):
        acc = RatFunc(0)
        for a, ca in xc.items():
            for b, cb in yc.items():
                g = gram[(a, b)]
                if not g.is_zero():
                    acc = acc + ca * cb * g
        return acc
    for lam in order:
        coords = {lam: RatFunc(1)}
        for mu in done:
            c = inner(coords, done[mu]) / norms[mu]
            if not c.is_zero():
                for nu, cv in done[mu].items():
                    s = coords.get(nu, RatFunc(0)) - c * cv
                    if s.is_zero():
                        coords.pop(nu, None)
                    else:
                        coords[nu] = s
        done[lam] = coords
        norms[lam] = inner(coords, coords)
        if norms[lam].is_zero():
            raise ValueError(f'degenerate HL inner product at t={t!r}')
    return {lam: {nu: c.as_laurent() for nu, c in coords.items()}
            for lam, coords in done.items()}


def hall_littlewood_P(lam, t):
    """The Hall-Littlewood P-polynomial in the monomial basis.

    t may be any LaurentRat (a rational constant or a monomial standing for
    the formal parameter); at t = 0 this is the Schur function.
    """
    lam = normalize(lam)
    if not isinstance(t, LaurentRat):
        t = LaurentRat.const(t)
    if not lam:
        return SymFunc.one('m')
    table = _hl_basis(sum(lam), t)
    return SymFunc('m', table[lam])


def hl_structure_constant(lam, mu, nu, q):
    """Classical Hall number g^nu_{lam,mu}(q) from HL structure constants.

    Coefficient of P_nu in P_lam * P_mu at t = 1/q, renormalized by
    q^{n(nu) - n(lam) - n(mu)} (Hall's theorem); exact rational output.
    """
    lam, mu, nu = normalize(lam), normalize(mu), normalize(nu)
    if sum(lam) + sum(mu) != sum(nu):
        raise ValueError('size mismatch: |lam| + |mu| must equal |nu|')
    q = Fraction(q)
    t = LaurentRat.const(1 / q)
    prod = multiply(hall_littlewood_P(lam, t), hall_littlewood_P(mu, t))
    d = sum(nu)
    table = _hl_basis(d, t)
    # triangular expansion of prod (m-coords) in the P-basis
    coeff_nu = Fraction(0)
    order = sorted(partitions(d), key=dominance_key, reverse=True)
    rem = {p: _as_fraction(c) for p, c in prod.homogeneous(d).coeffs.items()}
    for p in order:
        c = rem.get(p, Fraction(0))
        if c:
            if p == nu:
                coeff_nu = c
            for m_part, mc in table[p].items():
                val = rem.get(m_part, Fraction(0)) - c * _as_fraction(mc)
                if val:
                    rem[m_part] = val
                else:
                    rem.pop(m_part, None)
    if rem:
        raise ArithmeticError('HL expansion did not terminate')
    exp = n_invariant(nu) - n_invariant(lam) - n_invariant(mu)
    return coeff_nu * q ** exp


def _as_fraction(c):
    if isinstance(c, LaurentRat):
        terms = c.terms
        if not terms:
            return Fraction(0)
        if set(terms) == {0}:
            return terms[0]
        raise ValueError('non-constant coefficient where rational expected')
    return Fraction(c)


def schur(lam):
    return SymFunc('s', {normalize(lam): LaurentRat.one()})


def power_sum(lam):
    return SymFunc('p', {normalize(lam): LaurentRat.one()})
