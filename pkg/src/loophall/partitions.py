"""Integer partitions as weakly decreasing tuples of positive parts."""

from fractions import Fraction
from functools import cache
from itertools import permutations
from math import factorial


def is_partition(parts):
    return (all(isinstance(p, int) and p >= 1 for p in parts)
            and all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1)))


def normalize(parts):
    """Sort decreasing and drop zeros; returns a tuple."""
    return tuple(sorted((p for p in parts if p), reverse=True))


@cache
def partitions(n, max_part=None):
    """All partitions of n with parts bounded by max_part, as tuples."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    if max_part is None or max_part > n:
        max_part = n
    out = []
    for first in range(max_part, 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def conjugate(lam):
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def weight(lam):
    return sum(lam)


def z_lambda(lam):
    """The centralizer order z_lambda = prod i^{m_i} m_i!."""
    z = Fraction(1)
    for part in set(lam):
        m = lam.count(part)
        z *= Fraction(part) ** m * factorial(m)
    return z


def n_invariant(lam):
    """n(lambda) = sum (i-1) * lambda_i."""
    return sum(i * p for i, p in enumerate(lam))


def dominates(lam, mu):
    """True iff lam >= mu in dominance order (same weight assumed)."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def dominance_key(lam):
    """Sort key: dominance-compatible total order (partial sums, lex)."""
    sums = []
    a = 0
    for p in lam:
        a += p
        sums.append(a)
    return tuple(sums)


@cache
def distinct_permutations(vec):
    """All distinct permutations of a tuple (small lengths only)."""
    return tuple(set(permutations(vec)))


def multiplicities(lam):
    """Map part -> multiplicity."""
    out = {}
    for p in lam:
        out[p] = out.get(p, 0) + 1
    return out
