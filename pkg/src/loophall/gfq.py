"""Small finite fields, exact matrices, polynomials, and local Smith form.

GF(q) for prime powers q <= 32 is realized with precomputed addition and
multiplication tables; elements are integers 0..q-1 encoding base-p digit
vectors of polynomials over F_p modulo a fixed irreducible.  On top of that:
dense matrix algebra, row reduction, subspace enumeration by reduced echelon
representatives, univariate polynomials, monic irreducibles, and Smith
normal form over the local ring F_q[z]/(pi^N).

Also the exact value field Q(sqrt(q)) used for Hall-algebra computations at
non-square q (half-integer powers of q stay exact).
"""

from fractions import Fraction
from functools import cache
from math import isqrt


def _factor_prime_power(q):
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise ValueError(f'{q} is not a prime power')
            return p, k
    raise ValueError(f'{q} is not a prime power')


class GF:
    """The finite field with q elements; all operations table-driven."""

    def __init__(self, q):
        self.q = q
        self.p, self.k = _factor_prime_power(q)
        self.modulus = self._find_irreducible()
        self._build_tables()

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, d):
        a = 0
        for x in reversed(d):
            a = a * self.p + x
        return a

    def _find_irreducible(self):
        """Monic irreducible of degree k over F_p (trial division search)."""
        p, k = self.p, self.k
        if k == 1:
            return [0, 1]
        for enc in range(p ** k):
            cand = []
            a = enc
            for _ in range(k):
                cand.append(a % p)
                a //= p
            cand = cand + [1]  # monic degree k
            if self._poly_irreducible_fp(cand):
                return cand
        raise RuntimeError('no irreducible found')

    def _poly_irreducible_fp(self, f):
        p = self.p
        deg = len(f) - 1

        def pmod(a, b):
            a = a[:]
            while len(a) >= len(b) and any(a):
                if a[-1] == 0:
                    a.pop()
                    continue
                c = a[-1]
                d = len(a) - len(b)
                for i in range(len(b)):
                    a[i + d] = (a[i + d] - c * b[i]) % p
                while a and a[-1] == 0:
                    a.pop()
            return a

        # no roots and no low-degree monic factors
        for enc in range(1, p ** ((deg // 2) + 1)):
            g = []
            a = enc
            while a:
                g.append(a % p)
                a //= p
            if len(g) < 2:
                g = g + [0] * (2 - len(g))
            if g[-1] != 1:
                continue
            if len(g) - 1 >= 1 and len(g) - 1 <= deg // 2:
                if not pmod(f, g):
                    return False
        return True

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            da = self._digits(a)
            for b in range(q):
                db = self._digits(b)
                add[a][b] = self._undigits([(x + y) % p for x, y in zip(da, db)])
        mod = self.modulus
        for a in range(q):
            da = self._digits(a)
            for b in range(q):
                db = self._digits(b)
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(da):
                    if x:
                        for j, y in enumerate(db):
                            prod[i + j] = (prod[i + j] + x * y) % p
                # reduce modulo the irreducible
                for d in range(len(prod) - 1, k - 1, -1):
                    c = prod[d]
                    if c:
                        prod[d] = 0
                        for i in range(k):
                            prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
                mul[a][b] = self._undigits(prod[:k])
        self.add_t = add
        self.mul_t = mul
        self.neg_t = [next(b for b in range(q) if add[a][b] == 0) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
        self.inv_t = inv

    def add(self, a, b):
        return self.add_t[a][b]

    def sub(self, a, b):
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a, b):
        return self.mul_t[a][b]

    def neg(self, a):
        return self.neg_t[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError('inverse of 0')
        return self.inv_t[a]

    def elements(self):
        return range(self.q)

    def __repr__(self):
        return f'GF({self.q})'


@cache
def gf(q):
    return GF(q)


# -- dense matrices over GF(q): lists of row lists ------------------------


def mat_zero(r, c):
    return [[0] * c for _ in range(r)]


def mat_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(F, A, B):
    if not A or not B:
        return []
    r, inner, c = len(A), len(B), len(B[0])
    out = [[0] * c for _ in range(r)]
    for i in range(r):
        Ai = A[i]
        for k in range(inner):
            a = Ai[k]
            if a:
                Bk = B[k]
                Oi = out[i]
                for j in range(c):
                    if Bk[j]:
                        Oi[j] = F.add(Oi[j], F.mul(a, Bk[j]))
    return out


def mat_vec(F, A, v):
    return [_dot(F, row, v) for row in A]


def _dot(F, a, b):
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s = F.add(s, F.mul(x, y))
    return s


def rref(F, A):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [r[:] for r in A if any(r)]
    ncols = len(A[0]) if A else 0
    pivots = []
    done = []
    lead = 0
    while rows and lead < ncols:
        piv = next((i for i, r in enumerate(rows) if r[lead]), None)
        if piv is None:
            lead += 1
            continue
        r = rows.pop(piv)
        inv = F.inv(r[lead])
        r = [F.mul(inv, x) for x in r]
        rows = [_row_sub(F, row, r, row[lead]) for row in rows]
        done = [_row_sub(F, row, r, row[lead]) for row in done]
        done.append(r)
        rows = [row for row in rows if any(row)]
        pivots.append(lead)
        lead += 1
    # sort done rows by pivot
    done.sort(key=lambda row: next(i for i, x in enumerate(row) if x))
    return done, sorted(pivots)


def _row_sub(F, row, pivot_row, factor):
    if not factor:
        return row
    return [F.sub(x, F.mul(factor, y)) for x, y in zip(row, pivot_row)]


def mat_rank(F, A):
    if not A:
        return 0
    return len(rref(F, A)[0])


def kernel_basis(F, A, ncols=None):
    """Basis of the right kernel {v : A v = 0}."""
    if not A:
        return mat_identity(ncols) if ncols else []
    ncols = len(A[0])
    rows, pivots = rref(F, A)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row in rows:
            p = next(i for i, x in enumerate(row) if x)
            v[p] = F.neg(row[f])
        basis.append(v)
    return basis


def solve(F, A, b):
    """One solution of A x = b, or None."""
    if not A:
        return None if any(b) else []
    ncols = len(A[0])
    aug = [row[:] + [bv] for row, bv in zip(A, b)]
    rows, pivots = rref(F, aug)
    x = [0] * ncols
    for row in rows:
        p = next(i for i, v in enumerate(row) if v)
        if p == ncols:
            return None
        x[p] = row[ncols]
    return x


def mat_inv(F, A):
    """Inverse of a square matrix over GF(q); raises if singular."""
    n = len(A)
    aug = [row[:] + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    rows, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)) or len(rows) != n:
        raise ValueError('singular matrix')
    return [row[n:] for row in rows]


def all_vectors(F, n):
    """All vectors of F^n (lexicographic)."""
    if n == 0:
        yield []
        return
    for rest in all_vectors(F, n - 1):
        for x in F.elements():
            yield rest + [x]


def all_subspaces(F, n, k):
    """All k-dimensional subspaces of F^n as RREF basis-row tuples."""
    if k < 0 or k > n:
        return []
    if k == 0:
        return [()]
    out = []
    from itertools import combinations
    for pivots in combinations(range(n), k):
        free_positions = []
        for i, p in enumerate(pivots):
            for j in range(p + 1, n):
                if j not in pivots:
                    free_positions.append((i, j))
        nf = len(free_positions)
        for assign in _tuples(F.q, nf):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), val in zip(free_positions, assign):
                rows[i][j] = val
            out.append(tuple(tuple(r) for r in rows))
    return out


def _tuples(q, n):
    if n == 0:
        yield ()
        return
    for rest in _tuples(q, n - 1):
        for x in range(q):
            yield rest + (x,)


def gl_order(n, q):
    """|GL_n(F_q)|."""
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


# -- polynomials over GF(q): dense int coefficient lists ------------------


def ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def pad_poly(F, a, b):
    n = max(len(a), len(b))
    return ([x for x in a] + [0] * (n - len(a)),
            [x for x in b] + [0] * (n - len(b)))


def poly_add(F, a, b):
    x, y = pad_poly(F, a, b)
    return ptrim([F.add(u, v) for u, v in zip(x, y)])


def poly_sub(F, a, b):
    x, y = pad_poly(F, a, b)
    return ptrim([F.sub(u, v) for u, v in zip(x, y)])


def poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return ptrim(out)


def poly_divmod(F, a, b):
    a = ptrim(a[:])
    b = ptrim(b[:])
    if not b:
        raise ZeroDivisionError('poly division by zero')
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b):
        c = F.mul(a[-1], inv_lead)
        d = len(a) - len(b)
        q[d] = c
        for i in range(len(b)):
            a[i + d] = F.sub(a[i + d], F.mul(c, b[i]))
        ptrim(a)
        if not a:
            break
    return ptrim(q), a


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def poly_pow_mod(F, a, n, m):
    out = [1]
    base = poly_mod(F, a, m)
    while n:
        if n & 1:
            out = poly_mod(F, poly_mul(F, out, base), m)
        base = poly_mod(F, poly_mul(F, base, base), m)
        n >>= 1
    return out


def poly_gcd(F, a, b):
    a, b = ptrim(a[:]), ptrim(b[:])
    while b:
        a, b = b, poly_mod(F, a, b)
    if a:
        inv = F.inv(a[-1])
        a = [F.mul(inv, x) for x in a]
    return a


@cache
def monic_irreducibles(q, max_degree):
    """All monic irreducibles over GF(q) of degree <= max_degree, by degree."""
    F = gf(q)
    by_deg = {d: [] for d in range(1, max_degree + 1)}
    for d in range(1, max_degree + 1):
        for enc in range(q ** d):
            coeffs = []
            a = enc
            for _ in range(d):
                coeffs.append(a % q)
                a //= q
            cand = coeffs + [1]
            if _is_irreducible(F, cand, by_deg):
                by_deg[d].append(tuple(cand))
    return {d: tuple(v) for d, v in by_deg.items()}


def _is_irreducible(F, f, by_deg):
    deg = len(f) - 1
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for g in by_deg[d]:
            if not poly_mod(F, f, list(g)):
                return False
    return True


# -- Smith normal form over the local ring F_q[z]/(pi^N) -------------------


def _valuation(F, a, pi):
    """pi-adic valuation of a polynomial (None for the zero polynomial)."""
    a = ptrim(a[:])
    if not a:
        return None
    v = 0
    while True:
        q_, r = poly_divmod(F, a, pi)
        if r:
            return v
        a = q_
        v += 1
        if not a:
            return v  # exact power times zero cannot happen; defensive


def _inv_mod(F, u, m):
    """Inverse of u modulo m (requires gcd(u, m) = 1), extended Euclid."""
    r0, r1 = ptrim(u[:]), ptrim(m[:])
    s0, s1 = [1], []
    while r1:
        q_, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(F, s0, poly_mul(F, q_, s1))
    if len(r0) != 1:
        raise ValueError('element not invertible modulo m')
    c = F.inv(r0[0])
    return ptrim([F.mul(c, x) for x in s0])


def smith_local(q, pi, N, M):
    """Elementary divisors of coker(M) over the local ring at pi.

    M is a matrix (list of rows) of polynomials over GF(q); columns are
    relations, rows are generators.  All arithmetic is done modulo pi^N with
    N beyond the torsion budget.  Returns (free_rank, exponents) where
    exponents are the positive pi-exponents of the torsion part.
    """
    F = gf(q)
    pi = list(pi)
    piN = [1]
    for _ in range(N):
        piN = poly_mul(F, piN, pi)
    M = [[poly_mod(F, list(e), piN) for e in row] for row in M]
    nrows = len(M)
    divisors = []
    while M and M[0]:
        best = None
        for i, row in enumerate(M):
            for j, e in enumerate(row):
                v = _valuation(F, e, pi)
                if v is not None and v < N and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, bi, bj = best
        # move pivot to (0,0)
        M[0], M[bi] = M[bi], M[0]
        for row in M:
            row[0], row[bj] = row[bj], row[0]
        pivot = M[0][0]
        # pivot = pi^v * u with u invertible mod pi^(N-v)
        u = pivot
        for _ in range(v):
            u = poly_divmod(F, u, pi)[0]
        pi_rest = [1]
        for _ in range(N - v):
            pi_rest = poly_mul(F, pi_rest, pi)
        u_inv = _inv_mod(F, u, pi_rest)
        # clear the pivot column
        for i in range(1, len(M)):
            e = M[i][0]
            ve = _valuation(F, e, pi)
            if ve is None or ve >= N:
                M[i][0] = []
                continue
            ered = e
            for _ in range(v):
                ered = poly_divmod(F, ered, pi)[0]
            f = poly_mod(F, poly_mul(F, ered, u_inv), piN)
            M[i] = [poly_mod(F, poly_sub(F, a, poly_mul(F, f, b)), piN)
                    for a, b in zip(M[i], M[0])]
        # clear the pivot row
        row0 = M[0]
        for j in range(1, len(row0)):
            e = row0[j]
            ve = _valuation(F, e, pi)
            if ve is None or ve >= N:
                row0[j] = []
                continue
            ered = e
            for _ in range(v):
                ered = poly_divmod(F, ered, pi)[0]
            f = poly_mod(F, poly_mul(F, ered, u_inv), piN)
            for i in range(len(M)):
                M[i][j] = poly_mod(F, poly_sub(F, M[i][j],
                                               poly_mul(F, f, M[i][0])), piN)
        # check both cleared (one pass suffices when the pivot has minimal
        # valuation, which we re-ensure by retrying otherwise)
        col_ok = all(_valuation(F, M[i][0], pi) in (None,) or
                     _valuation(F, M[i][0], pi) >= N
                     for i in range(1, len(M)))
        row_ok = all(_valuation(F, M[0][j], pi) in (None,) or
                     _valuation(F, M[0][j], pi) >= N
                     for j in range(1, len(M[0])))
        if not (col_ok and row_ok):
            # minimality can be disturbed; loop again without recording
            continue
        divisors.append(v)
        M = [row[1:] for row in M[1:]]
    free_rank = nrows - len(divisors)
    exponents = sorted((v for v in divisors if v > 0), reverse=True)
    return free_rank, exponents


# -- the exact value field Q(sqrt(q)) --------------------------------------


class QSqrt:
    """Element a + b*sqrt(q) of Q(sqrt(q)); collapses if q is a square."""

    __slots__ = ('q', 'a', 'b')

    def __init__(self, q, a, b=0):
        self.q = q
        a, b = Fraction(a), Fraction(b)
        r = isqrt(q)
        if r * r == q and b:
            a, b = a + b * r, Fraction(0)
        self.a, self.b = a, b

    @staticmethod
    def v_power(q, e):
        """v^e at v = q^(-1/2), exact in Q(sqrt(q))."""
        if e % 2 == 0:
            return QSqrt(q, Fraction(1, q ** (e // 2)) if e >= 0
                         else Fraction(q ** (-e // 2)))
        # v^e = q^(-e/2) = q^(-(e+1)/2) * sqrt(q)
        k = -(e + 1) // 2
        coeff = Fraction(q) ** k
        return QSqrt(q, 0, coeff)

    @staticmethod
    def from_laurent(x, q):
        """Specialize a LaurentRat at v = q^(-1/2)."""
        out = QSqrt(q, 0)
        for e, c in x.terms.items():
            out = out + QSqrt.v_power(q, e) * c
        return out

    def is_zero(self):
        return not self.a and not self.b

    def __add__(self, other):
        other = self._coerce(other)
        return QSqrt(self.q, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(self.q, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        return QSqrt(self.q,
                     self.a * other.a + self.q * self.b * other.b,
                     self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        n = other.a * other.a - self.q * other.b * other.b
        if not n:
            raise ZeroDivisionError('division by zero in Q(sqrt q)')
        conj = QSqrt(self.q, other.a / n, -other.b / n)
        return self * conj

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def _coerce(self, x):
        if isinstance(x, QSqrt):
            if x.q != self.q:
                raise ValueError('mixed radicands')
            return x
        return QSqrt(self.q, x)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSqrt(self.q, other)
        if not isinstance(other, QSqrt):
            return NotImplemented
        return self.q == other.q and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.q, self.a, self.b))

    def __repr__(self):
        if not self.b:
            return f'{self.a}'
        return f'({self.a} + {self.b}*sqrt({self.q}))'
