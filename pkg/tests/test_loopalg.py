import random

import pytest

from loophall.laurent import LaurentRat, q_int
from loophall.loopalg import (AlgElement, KClass, PBWMonomial, chi,
                              e_element, hn_segments, monomials_of_class,
                              multiply, normally_ordered_current_coeff,
                              straighten, theta, torsion_element,
                              xi_element, xi_recursion_check)
from loophall.symfunc import power_sum, schur


def mono(e_part, torsion=()):
    return PBWMonomial(tuple(e_part), tuple(torsion))


def elem(pairs, window=None):
    coeffs = {}
    for m, c in pairs:
        coeffs[m] = c if isinstance(c, LaurentRat) else LaurentRat.const(c)
    kclass = next(iter(coeffs)).kclass()
    return AlgElement(kclass, window, coeffs)


v = LaurentRat.v_power


class TestStraighten:
    def test_descending_adjacent(self):
        x = straighten([('E', 1), ('E', 0)])
        assert x.coeffs == {mono([(0, 1), (1, 1)]): v(-2)}

    def test_equal_twists_divided_power(self):
        x = straighten([('E', 0), ('E', 0)])
        assert x.coeffs == {mono([(0, 2)]): q_int(2)}

    def test_heisenberg_commutator(self):
        x = straighten([('H', 1), ('E', 0)])
        expect = {mono([(0, 1)], (1,)): LaurentRat.one(),
                  mono([(1, 1)]): q_int(2)}
        assert x.coeffs == expect

    def test_xi2_past_e(self):
        # xi_2 E_t = E_t xi_2 + [2] E_{t+1} xi_1 + [3] E_{t+2},
        # with xi_2 = p_2 = s_2 - s_11
        x = straighten([('XI', 2), ('E', 0)])
        expect = {mono([(0, 1)], (2,)): LaurentRat.one(),
                  mono([(0, 1)], (1, 1)): LaurentRat.const(-1),
                  mono([(1, 1)], (1,)): q_int(2),
                  mono([(2, 1)]): q_int(3)}
        assert x.coeffs == expect

    def test_gap_two_rule(self):
        # E_2 E_0 straightens with the three-term rule and stays exact
        x = straighten([('E', 2), ('E', 0)])
        y = straighten([('E', 0), ('E', 2)])
        onev2 = v(-2)
        # v^2 E_2 E_0 - E_0 E_2 = E_1 E_1 - v^2 E_1 E_1
        lhs = x.scale(v(2)) - y
        rhs = straighten([('E', 1), ('E', 1)]).scale(
            LaurentRat.one() - v(2))
        assert lhs == rhs

    def test_window_truncation(self):
        x = straighten([('XI', 2), ('E', 0)], window=1)
        assert all(m.e_part[0][0] >= 1 for m in x.coeffs)
        assert mono([(2, 1)]) in x.coeffs

    def test_never_lowers_minimum_twist(self):
        rng = random.Random(11)
        for _ in range(30):
            word = []
            for _ in range(rng.randrange(1, 5)):
                if rng.random() < 0.6:
                    word.append(('E', rng.randrange(-3, 4)))
                else:
                    word.append(('XI', rng.randrange(1, 4)))
            lo = min((t for k, t in word if k == 'E'), default=None)
            x = straighten(word)
            for m in x.coeffs:
                if m.e_part:
                    assert lo is not None and m.e_part[0][0] >= lo, word


class TestMultiply:
    def test_unit(self):
        x = straighten([('E', 0), ('E', 1)])
        assert multiply(AlgElement.unit(), x) == x
        assert multiply(x, AlgElement.unit()) == x

    def test_xi_commutator(self):
        # E_0 xi_1 and xi_1 E_0 differ by (v + v^-1) E_1
        a = multiply(e_element(0), xi_element(1))
        b = multiply(xi_element(1), e_element(0))
        diff = b - a
        assert diff.coeffs == {mono([(1, 1)]): q_int(2)}

    def test_associativity_generators(self):
        a = multiply(multiply(e_element(0), e_element(1)), e_element(2))
        b = multiply(e_element(0), multiply(e_element(1), e_element(2)))
        assert a == b

    def test_associativity_random_monomials(self):
        rng = random.Random(5)
        pool = [mono([(-1, 1)]), mono([(0, 1)], (1,)), mono([(1, 2)]),
                mono([(0, 1), (2, 1)]), mono([], (2,)), mono([(-2, 1)], (1, 1))]
        for _ in range(12):
            xs = [elem([(rng.choice(pool), 1)]) for _ in range(3)]
            if sum(x.kclass.rank for x in xs) > 3:
                continue
            lhs = multiply(multiply(xs[0], xs[1]), xs[2])
            rhs = multiply(xs[0], multiply(xs[1], xs[2]))
            assert lhs == rhs

    def test_confluence_orderings(self):
        # straightening a word all at once agrees with pairwise products
        word = [('E', 2), ('XI', 1), ('E', -1), ('E', 2)]
        whole = straighten(word)
        parts = [straighten([tok]) for tok in word]
        left = parts[0]
        for p in parts[1:]:
            left = multiply(left, p)
        right = multiply(multiply(parts[0], parts[1]),
                         multiply(parts[2], parts[3]))
        assert whole == left == right

    def test_window_discard(self):
        x = e_element(0, window=0)
        y = xi_element(1, window=0)
        prod = multiply(y, x)
        # xi_1 E_0 = E_0 xi_1 + [2] E_1, all within window 0
        assert prod.window == 0
        assert mono([(0, 1)], (1,)) in prod.coeffs


class TestTorsionSector:
    def test_theta_zero_is_unit(self):
        assert theta(0) == AlgElement.unit()

    def test_theta_one(self):
        expect = torsion_element(power_sum((1,))).scale(v(-1) - v(1))
        assert theta(1) == expect

    @pytest.mark.parametrize('l', [1, 2, 3, 4])
    def test_xi_chi_convolution(self, l):
        acc = None
        for k in range(l + 1):
            xi = xi_element(l - k) if l - k else AlgElement.unit()
            term = multiply(xi, chi(k))
            acc = term if acc is None else acc + term
        assert acc.is_zero()

    def test_schur_torsion_roundtrip(self):
        x = torsion_element(schur((2, 1)))
        assert x.coeffs == {mono([], (2, 1)): LaurentRat.one()}


class TestCurrents:
    def test_l_one(self):
        x = normally_ordered_current_coeff(1, 3, 0)
        assert x.coeffs == {mono([(3, 1)]): LaurentRat.one()}

    def test_l_two_exponents(self):
        x = normally_ordered_current_coeff(2, 0, -2)
        # (t,t) block carries exponent 0; (t, t+1) likewise
        assert x.coeffs[mono([(0, 2)])] == LaurentRat.one()
        assert x.coeffs[mono([(-1, 1), (1, 1)])] == v(-1)
        assert x.coeffs[mono([(-2, 1), (2, 1)])] == v(-3)

    def test_window_limits_support(self):
        x = normally_ordered_current_coeff(2, 1, 0)
        assert set(x.coeffs) == {mono([(0, 1), (1, 1)])}
        assert x.coeffs[mono([(0, 1), (1, 1)])] == LaurentRat.one()


class TestEnumeration:
    def test_rank_one_window(self):
        ms = monomials_of_class(KClass(1, 3), 1)
        # E_3, E_2 xi_1, E_1 (xi_2 or xi_11)
        assert len(ms) == 4

    def test_torsion_class(self):
        ms = monomials_of_class(KClass(0, 4), 0)
        assert len(ms) == 5

    def test_empty_when_window_excludes(self):
        assert monomials_of_class(KClass(1, 0), 1) == []

    def test_hn_segments(self):
        m = mono([(1, 1), (3, 1)])
        assert [tuple(s) for s in hn_segments(m)] == [(1, 3), (1, 1)]
        m = mono([(0, 2)], (1, 1))
        assert [tuple(s) for s in hn_segments(m)] == [(0, 2), (2, 0)]


class TestRecursionAndJson:
    @pytest.mark.parametrize('l', [0, 1, 2])
    def test_xi_recursion(self, l):
        assert xi_recursion_check(l)['consistent']

    def test_json_roundtrip(self):
        x = straighten([('XI', 2), ('E', 0)], window=-1)
        y = AlgElement.from_json(x.to_json())
        assert x == y and y.window == -1
