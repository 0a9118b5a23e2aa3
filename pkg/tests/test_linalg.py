from fractions import Fraction

import pytest

from loophall.laurent import LaurentRat
from loophall.linalg import (RatFunc, SparseMatrix, in_span, pdivmod, pgcd,
                             rank, row_reduce, solve_unitriangular)


def L(d):
    return LaurentRat(d)


class TestSolveUnitriangular:
    def test_identity(self):
        M = SparseMatrix([0, 1], [0, 1],
                         {(0, 0): L({0: 1}), (1, 1): L({0: 1})},
                         unitriangular=True)
        rhs = {0: L({1: 1}), 1: L({0: 2})}
        assert solve_unitriangular(M, rhs) == rhs

    def test_back_substitution(self):
        M = SparseMatrix(['a', 'b'], ['a', 'b'],
                         {('a', 'a'): L({0: 1}), ('b', 'b'): L({0: 1}),
                          ('a', 'b'): L({1: 1})},
                         unitriangular=True)
        x = solve_unitriangular(M, {'a': L({0: 3}), 'b': L({0: 5})})
        assert x['b'] == L({0: 5})
        assert x['a'] == L({0: 3}) - L({1: 5})

    def test_rejects_non_unit_diagonal(self):
        with pytest.raises(ValueError):
            SparseMatrix([0], [0], {(0, 0): L({1: 1})}, unitriangular=True)

    def test_rejects_lower_entry(self):
        with pytest.raises(ValueError):
            SparseMatrix([0, 1], [0, 1],
                         {(0, 0): L({0: 1}), (1, 1): L({0: 1}),
                          (1, 0): L({0: 1})},
                         unitriangular=True)


class TestFieldElimination:
    def test_rank_fractions(self):
        rows = [[Fraction(1), Fraction(2)],
                [Fraction(2), Fraction(4)],
                [Fraction(0), Fraction(1)]]
        assert rank(rows) == 2

    def test_in_span(self):
        v1 = [Fraction(1), Fraction(0), Fraction(1)]
        v2 = [Fraction(0), Fraction(1), Fraction(1)]
        assert in_span([v1, v2], [Fraction(1), Fraction(1), Fraction(2)])
        assert not in_span([v1, v2], [Fraction(0), Fraction(0), Fraction(1)])

    def test_row_reduce_ratfunc(self):
        v = RatFunc(L({1: 1}))
        one = RatFunc(1)
        rows = [[one, v], [v, v * v]]
        assert rank(rows) == 1


class TestPolyHelpers:
    def test_pdivmod_exact(self):
        # (x^2 - 1) / (x - 1) = x + 1
        q, r = pdivmod([Fraction(-1), Fraction(0), Fraction(1)],
                       [Fraction(-1), Fraction(1)])
        assert q == [Fraction(1), Fraction(1)] and r == []

    def test_pgcd(self):
        # gcd(x^2 - 1, x^2 - 2x + 1) = x - 1
        g = pgcd([Fraction(-1), Fraction(0), Fraction(1)],
                 [Fraction(1), Fraction(-2), Fraction(1)])
        assert g == [Fraction(-1), Fraction(1)]


class TestRatFunc:
    def test_reduce(self):
        # (v^2 - 1)/(v - 1) reduces to v + 1
        x = RatFunc(L({2: 1, 0: -1}), L({1: 1, 0: -1}))
        assert x.as_laurent() == L({1: 1, 0: 1})

    def test_arith(self):
        a = RatFunc(L({0: 1}), L({1: 1, 0: -1}))
        b = RatFunc(L({1: 1}), L({1: 1, 0: -1}))
        assert (b - a).as_laurent() == L({0: 1})
        assert (a / b) == RatFunc(L({-1: 1}))

    def test_laurent_shift_handling(self):
        x = RatFunc(L({-3: 1}), L({-1: 2}))
        assert x.as_laurent() == L({-2: Fraction(1, 2)})

    def test_inexact_division_raises(self):
        with pytest.raises(ValueError):
            RatFunc(L({1: 1, 0: 1}), L({1: 1, 0: -1})).as_laurent()
