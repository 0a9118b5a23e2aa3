import pytest

from loophall.canonical import (CanonicalElement, Slope, bar_window,
                                canonical_basis, closed_form_rank1,
                                closed_form_rank2, delta_mu,
                                farey_consecutive, farey_mediant,
                                hn_compare, hn_type_of_monomial,
                                kappa_twist, slope_of, transition_matrix)
from loophall.laurent import LaurentRat
from loophall.loopalg import (AlgElement, KClass, PBWMonomial, e_element,
                              monomials_of_class, multiply, pbw_sort_key,
                              torsion_element, xi_element)
from loophall.symfunc import schur

v = LaurentRat.v_power


def mono(e_part, torsion=()):
    return PBWMonomial(tuple(e_part), tuple(torsion))


class TestSlopes:
    def test_normalization(self):
        assert Slope(2, 4) == Slope(1, 2)
        assert Slope(-3, -6) == Slope(1, 2)
        assert Slope(5, 0) == Slope(1, 0)
        with pytest.raises(ValueError):
            Slope(0, 0)

    def test_order(self):
        assert Slope(1, 2) < Slope(1, 1)
        assert Slope(-1, 1) < Slope(0, 1)
        assert Slope(3, 1) < Slope(1, 0)
        assert not Slope(1, 0) < Slope(1, 0)

    def test_slope_of(self):
        assert slope_of(KClass(2, 3)) == Slope(3, 2)
        assert slope_of(KClass(0, 2)) == Slope(1, 0)
        with pytest.raises(ValueError):
            slope_of(KClass(0, 0))

    def test_mediant(self):
        assert farey_mediant(Slope(0, 1), Slope(1, 0)) == Slope(1, 1)
        assert farey_mediant(Slope(1, 2), Slope(1, 1)) == Slope(2, 3)

    def test_consecutive(self):
        assert farey_consecutive(Slope(1, 2), Slope(1, 1))
        assert farey_consecutive(Slope(0, 1), Slope(1, 0))
        assert not farey_consecutive(Slope(1, 1), Slope(1, 2))

    def test_delta_additivity(self):
        a, b = Slope(1, 2), Slope(1, 1)
        med = farey_mediant(a, b)
        assert delta_mu(a) + delta_mu(b) == delta_mu(med)
        assert delta_mu(med) == KClass(3, 2)


class TestHNTypes:
    def test_bundle_segments(self):
        segs = hn_type_of_monomial(mono([(1, 1), (3, 1)]))
        assert segs == [KClass(1, 3), KClass(1, 1)]

    def test_mixed_segments(self):
        segs = hn_type_of_monomial(mono([(0, 2)], (1, 1)))
        assert segs == [KClass(0, 2), KClass(2, 0)]

    def test_pure_torsion(self):
        assert hn_type_of_monomial(mono([], (3, 1))) == [KClass(0, 4)]

    def test_bundle_dominates_torsion(self):
        a = [KClass(1, 1)]
        b = [KClass(0, 1), KClass(1, 0)]
        assert hn_compare(a, b) == 1
        assert hn_compare(b, a) == -1

    def test_equal(self):
        a = [KClass(0, 2), KClass(1, 1)]
        assert hn_compare(a, list(a)) == 0

    def test_first_slope_rule(self):
        a = [KClass(1, 2), KClass(1, 0)]
        b = [KClass(1, 3), KClass(1, -1)]
        assert hn_compare(a, b) == 1

    def test_class_mismatch(self):
        with pytest.raises(ValueError):
            hn_compare([KClass(1, 1)], [KClass(1, 2)])


class TestBar:
    def test_fixes_torsion(self):
        for lam in [(1,), (2,), (2, 1), (3, 1)]:
            x = torsion_element(schur(lam), 0)
            assert bar_window(x) == x

    def test_rank_one_leading_and_tail(self):
        x = bar_window(e_element(0, -2))
        assert x.coeffs[mono([(0, 1)])] == LaurentRat.one()
        assert x.coeffs[mono([(-1, 1)], (1,))] == v(1) - v(-1)
        # degree-two tail in the Schur basis: gamma_2 = (v^2 - v^-2) p_2
        # + (v^-2 - 1) p_1^2 with p_2 = s_2 - s_11, p_1^2 = s_2 + s_11
        assert x.coeffs[mono([(-2, 1)], (2,))] == v(2) - LaurentRat.one()
        assert x.coeffs[mono([(-2, 1)], (1, 1))] == (
            v(-2, 2) - v(2) - LaurentRat.one())

    @pytest.mark.parametrize('kclass,window', [
        (KClass(1, 1), -2), (KClass(0, 3), -1),
        (KClass(2, 0), -2), (KClass(2, 1), -1),
    ])
    def test_involution(self, kclass, window):
        for m in monomials_of_class(kclass, window):
            x = AlgElement(kclass, window, {m: LaurentRat.one()})
            assert bar_window(bar_window(x)) == x

    def test_requires_window(self):
        with pytest.raises(ValueError):
            bar_window(e_element(0))

    def test_multiplicative_mod_below_window(self):
        # factor images are computed in a buffered window first, since
        # truncating them before multiplying discards terms that later
        # straighten back above the window
        w, wd = -2, -4
        pairs = [(e_element(0, w), e_element(1, w)),
                 (e_element(-1, w), xi_element(2, w)),
                 (xi_element(1, w), e_element(0, w))]
        deep = [(e_element(0, wd), e_element(1, wd)),
                (e_element(-1, wd), xi_element(2, wd)),
                (xi_element(1, wd), e_element(0, wd))]
        for (x, y), (xd, yd) in zip(pairs, deep):
            lhs = bar_window(multiply(x, y))
            rhs = multiply(bar_window(xd), bar_window(yd)).truncate(w)
            assert lhs == rhs

    def test_fixes_closed_forms(self):
        cf = closed_form_rank1(0, -3)
        assert bar_window(cf) == cf
        for kind in ('equal', 'adjacent'):
            cf = closed_form_rank2(0, kind, -2)
            assert bar_window(cf) == cf


class TestCanonicalBasis:
    def test_rank_one_example(self):
        cb = canonical_basis(KClass(1, 0), -2)
        byidx = {ce.index: ce.element for ce in cb}
        top = byidx[mono([(0, 1)])]
        expect = {mono([(0, 1)]): LaurentRat.one(),
                  mono([(-1, 1)], (1,)): v(1),
                  mono([(-2, 1)], (2,)): v(2),
                  mono([(-2, 1)], (1, 1)): v(2, -1)}
        assert top.coeffs == expect

    def test_torsion_class_is_schur(self):
        cb = canonical_basis(KClass(0, 4), 0)
        assert len(cb) == 5
        for ce in cb:
            assert ce.element.coeffs == {ce.index: LaurentRat.one()}
            assert ce.index.e_part == ()

    def test_rank_one_matches_closed_form(self):
        cb = canonical_basis(KClass(1, 1), -2)
        byidx = {ce.index: ce.element for ce in cb}
        assert byidx[mono([(1, 1)])] == closed_form_rank1(1, -2)

    def test_rank_two_matches_closed_forms(self):
        cb = canonical_basis(KClass(2, -1), -3)
        byidx = {ce.index: ce.element for ce in cb}
        assert (byidx[mono([(-1, 1), (0, 1)])]
                == closed_form_rank2(-1, 'adjacent', -3))
        cb = canonical_basis(KClass(2, 0), -2)
        byidx = {ce.index: ce.element for ce in cb}
        assert byidx[mono([(0, 2)])] == closed_form_rank2(0, 'equal', -2)

    def test_transition_unitriangular(self):
        cb = canonical_basis(KClass(1, 0), -2)
        monos, rows = transition_matrix(cb)
        for i, row in enumerate(rows):
            assert row[i].is_one()
            for j in range(i + 1, len(row)):
                assert row[j].is_zero()
            for j in range(i):
                assert all(e >= 1 and c.denominator == 1
                           for e, c in row[j].terms.items())

    def test_truncation_stability(self):
        wide = canonical_basis(KClass(1, 0), -3)
        narrow = canonical_basis(KClass(1, 0), -2)
        nar = {ce.index: ce.element for ce in narrow}
        for ce in wide:
            if ce.index in nar:
                assert ce.element.truncate(-2) == nar[ce.index]

    def test_kappa_bijection(self):
        src = canonical_basis(KClass(1, 0), -2)
        dst = {ce.index: ce.element for ce in canonical_basis(KClass(1, 1), -1)}
        for ce in src:
            shifted = kappa_twist(ce.element, 1)
            idx = mono([(t + 1, d) for t, d in ce.index.e_part],
                       ce.index.torsion)
            assert dst[idx] == shifted

    def test_positivity_of_products(self):
        w = -2
        cb1 = canonical_basis(KClass(1, 0), w)
        cb0 = canonical_basis(KClass(0, 1), w)
        target = {ce.index: ce.element
                  for ce in canonical_basis(KClass(1, 1), w)}
        order = sorted(target, key=pbw_sort_key, reverse=True)
        for a in cb1:
            for b in cb0:
                prod = multiply(a.element, b.element)
                rest = prod
                for idx in order:
                    c = rest.coeffs.get(idx)
                    if c is None:
                        continue
                    assert all(co.denominator == 1 and co >= 0
                               for co in c.terms.values()), (a.index, b.index)
                    rest = rest - target[idx].scale(c)
                assert rest.is_zero()

    def test_leading_coefficient_validation(self):
        x = e_element(0, -1).scale(v(1))
        with pytest.raises(ValueError):
            CanonicalElement(mono([(0, 1)]), x, -1)


class TestClosedForms:
    def test_rank1_empty_tail(self):
        assert closed_form_rank1(2, 2) == e_element(2, 2)

    def test_rank1_depth_one(self):
        expect = e_element(2, 1) + multiply(
            e_element(1, 1), xi_element(1, 1)).scale(v(1))
        assert closed_form_rank1(2, 1) == expect

    def test_rank2_equal_cross_term_exponent(self):
        # the (t-1, t+1) pair with no torsion carries v^(-1+2) = v
        cf = closed_form_rank2(0, 'equal', -2)
        assert cf.coeffs[mono([(-1, 1), (1, 1)])] == v(1)

    def test_rank2_leading_terms(self):
        cf = closed_form_rank2(0, 'equal', -2)
        assert cf.coeffs[mono([(0, 2)])] == LaurentRat.one()
        cf = closed_form_rank2(0, 'adjacent', -2)
        assert cf.coeffs[mono([(0, 1), (1, 1)])] == LaurentRat.one()

    def test_rank2_square_tail_exponent(self):
        # E_{t1}^(2) xi_{t2} carries v^(2 t2)
        cf = closed_form_rank2(0, 'equal', -1)
        assert cf.coeffs[mono([(-1, 2)], (2,))] == v(4)

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            closed_form_rank2(0, 'skew', -2)

    def test_window_guard(self):
        with pytest.raises(ValueError):
            closed_form_rank1(0, 1)


class TestKappa:
    def test_shifts_generator(self):
        assert kappa_twist(e_element(0, 0), 1) == e_element(1, 1)

    def test_fixes_torsion(self):
        x = torsion_element(schur((2, 1)), 0)
        y = kappa_twist(x, 3)
        assert y.coeffs == x.coeffs
        assert y.window == 3

    def test_inverse(self):
        x = closed_form_rank1(1, -1)
        assert kappa_twist(kappa_twist(x, 2), -2) == x
