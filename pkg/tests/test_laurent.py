from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from loophall.laurent import LaurentRat, bar_coeff, q_factorial, q_int, specialize


def L(d):
    return LaurentRat(d)


laurents = st.dictionaries(
    st.integers(-6, 6),
    st.fractions(min_value=-50, max_value=50, max_denominator=8),
    max_size=5,
).map(LaurentRat)


class TestBasics:
    def test_zero_coefficients_dropped(self):
        assert L({2: 0, 1: 3}).terms == {1: Fraction(3)}

    def test_add_cancellation(self):
        assert (L({1: 2}) + L({1: -2})).is_zero()

    def test_mul(self):
        assert L({1: 1, -1: 1}) * L({1: 1, -1: 1}) == L({2: 1, 0: 2, -2: 1})

    def test_pow_monomial_negative(self):
        assert L({2: Fraction(1, 2)}) ** -1 == L({-2: 2})

    def test_serialization_roundtrip(self):
        x = L({-1: Fraction(2, 3), 4: -5})
        assert LaurentRat.from_json(x.to_json()) == x
        assert x.to_json() == [[-1, '2', '3'], [4, '-5', '1']]


class TestQuantumIntegers:
    def test_q_factorial_zero(self):
        assert q_factorial(0).is_one()

    def test_q_factorial_two(self):
        assert q_factorial(2) == L({1: 1, -1: 1})

    def test_q_factorial_three(self):
        assert q_factorial(3) == L({3: 1, 1: 2, -1: 2, -3: 1})

    def test_q_int_values(self):
        assert q_int(0).is_zero()
        assert q_int(1).is_one()
        assert q_int(3) == L({2: 1, 0: 1, -2: 1})

    @pytest.mark.parametrize('n', range(21))
    def test_q_factorial_bar_symmetric(self, n):
        assert bar_coeff(q_factorial(n)) == q_factorial(n)


class TestBarAndSpecialize:
    def test_bar_example(self):
        assert bar_coeff(L({2: 1, -1: -1})) == L({-2: 1, 1: -1})

    def test_specialize_examples(self):
        assert specialize(L({-2: 1}), Fraction(1, 2)) == 4
        assert specialize(q_int(2), Fraction(1, 2)) == Fraction(5, 2)
        assert specialize(L({}), Fraction(7)) == 0

    def test_specialize_rejects_zero(self):
        with pytest.raises(ValueError):
            specialize(L({1: 1}), 0)

    @given(laurents)
    def test_bar_involutive(self, x):
        assert bar_coeff(bar_coeff(x)) == x

    @given(laurents, laurents)
    def test_bar_multiplicative(self, x, y):
        assert bar_coeff(x * y) == bar_coeff(x) * bar_coeff(y)

    @given(laurents, laurents)
    def test_specialize_ring_hom(self, x, y):
        v = Fraction(2, 3)
        assert specialize(x + y, v) == specialize(x, v) + specialize(y, v)
        assert specialize(x * y, v) == specialize(x, v) * specialize(y, v)


class TestPredicates:
    def test_in_v_z_v(self):
        assert L({1: 1, 3: -2}).in_v_z_v()
        assert not L({0: 1, 1: 1}).in_v_z_v()
        assert not L({1: Fraction(1, 2)}).in_v_z_v()

    def test_nonneg_integral(self):
        assert L({-3: 2, 0: 1}).is_nonneg_integral()
        assert not L({0: -1}).is_nonneg_integral()
