from fractions import Fraction
from itertools import permutations as iperm

import pytest

from loophall.laurent import LaurentRat
from loophall.partitions import (conjugate, dominates, is_partition,
                                 n_invariant, normalize, partitions, z_lambda)
from loophall.symfunc import (SymFunc, convert, hall_littlewood_P,
                              hl_structure_constant, multiply, power_sum,
                              schur)


class TestPartitions:
    def test_partitions_counts(self):
        # classical partition numbers
        assert [len(partitions(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]

    def test_conjugate_involution(self):
        for n in range(7):
            for lam in partitions(n):
                assert conjugate(conjugate(lam)) == lam

    def test_dominance(self):
        assert dominates((3,), (2, 1))
        assert dominates((2, 1), (1, 1, 1))
        assert not dominates((2, 2), (3, 1))

    def test_z_lambda(self):
        assert z_lambda((1, 1, 1)) == 6
        assert z_lambda((2, 1)) == 2
        assert z_lambda((3,)) == 3

    def test_n_invariant(self):
        assert n_invariant((2, 1, 1)) == 0 + 1 + 2
        assert n_invariant(()) == 0

    def test_normalize(self):
        assert normalize([0, 2, 1, 0]) == (2, 1)
        assert is_partition(normalize([5, 5, 1]))


class TestConversions:
    def test_p1_is_s1(self):
        assert convert(power_sum((1,)), 's') == schur((1,))

    def test_p2_in_schur(self):
        assert convert(power_sum((2,)), 's') == schur((2,)) - schur((1, 1))

    def test_s11_in_p(self):
        f = convert(schur((1, 1)), 'p')
        assert f.coeffs[(1, 1)] == LaurentRat.const(Fraction(1, 2))
        assert f.coeffs[(2,)] == LaurentRat.const(Fraction(-1, 2))

    @pytest.mark.parametrize('d', range(1, 7))
    def test_roundtrip_all_bases(self, d):
        for lam in partitions(d):
            f = schur(lam)
            for b1 in ('p', 'm', 'e', 'h'):
                g = convert(convert(f, b1), 's')
                assert g == f, (lam, b1)

    def test_path_independence(self):
        f = power_sum((3, 2, 1))
        via_m = convert(convert(f, 'm'), 'e')
        via_s = convert(convert(f, 's'), 'e')
        assert via_m == via_s


class TestMultiply:
    def test_pieri_s1_s1(self):
        assert multiply(schur((1,)), schur((1,))) == schur((2,)) + schur((1, 1))

    def test_pieri_s2_s1(self):
        assert multiply(schur((2,)), schur((1,))) == schur((3,)) + schur((2, 1))

    def test_power_sums_free(self):
        assert multiply(power_sum((3,)), power_sum((2,))) == power_sum((3, 2))

    def test_commutative_associative(self):
        a, b, c = schur((2,)), schur((1, 1)), power_sum((1,))
        assert multiply(a, b) == multiply(b, a)
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))

    def test_littlewood_richardson(self):
        # s21 * s1 = s31 + s22 + s211
        prod = multiply(schur((2, 1)), schur((1,)))
        assert prod == schur((3, 1)) + schur((2, 2)) + schur((2, 1, 1))


class TestHallLittlewood:
    def test_small_expansions(self):
        t = LaurentRat.v_power(1)  # a formal parameter
        assert hall_littlewood_P((1,), t) == SymFunc('m', {(1,): 1})
        assert hall_littlewood_P((1, 1), t) == SymFunc('m', {(1, 1): 1})
        p2 = hall_littlewood_P((2,), t)
        assert p2.coeffs[(2,)].is_one()
        assert p2.coeffs[(1, 1)] == LaurentRat.one() - t

    @pytest.mark.parametrize('d', range(1, 7))
    def test_t_zero_is_schur(self, d):
        for lam in partitions(d):
            assert hall_littlewood_P(lam, LaurentRat.zero()) == schur(lam)

    def test_unit_and_degree_one(self):
        assert hl_structure_constant((1,), (), (1,), 2) == 1
        assert hl_structure_constant((1,), (1,), (2,), 2) == 1

    def test_lines_count(self):
        # submodules of (F_q)^2: q + 1 lines
        for q in (2, 3, 5):
            assert hl_structure_constant((1,), (1,), (1, 1), q) == q + 1

    def test_classical_values(self):
        # in M = R/pi^2 + R/pi the q+1 socle lines split as q with quotient
        # (2) and one with quotient (1,1)
        for q in (2, 3):
            assert hl_structure_constant((2,), (1,), (2, 1), q) == q
            assert hl_structure_constant((1, 1), (1,), (2, 1), q) == 1
            # g^{(1^3)}_{(1,1),(1)}(q) = q^2 + q + 1
            assert hl_structure_constant((1, 1), (1,), (1, 1, 1), q) == q * q + q + 1

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            hl_structure_constant((1,), (1,), (3,), 2)
