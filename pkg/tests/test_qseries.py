import cmath
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ruvoa import qseries as qs
from ruvoa.qseries import GaussRat, TwoVarSeries, FactoredForm, Atom, ONE


def series(d, cut):
    return TwoVarSeries(d, cut)


# --- GaussRat


def test_gaussrat_canonical_and_field_ops():
    a = GaussRat(Fraction(2, 4), 1)
    assert a == GaussRat(Fraction(1, 2), 1)
    assert hash(a) == hash(GaussRat(Fraction(1, 2), 1))
    assert a * a.inverse() == ONE
    assert GaussRat(0, 1) ** 4 == ONE
    with pytest.raises(ZeroDivisionError):
        GaussRat(0).inverse()
    with pytest.raises(TypeError):
        GaussRat(0.5)


def test_root_of_unity_quarter_phases_only():
    assert GaussRat.root_of_unity(Fraction(1, 4)) == GaussRat(0, 1)
    assert GaussRat.root_of_unity(Fraction(1, 2)) == GaussRat(-1)
    with pytest.raises(qs.UnsupportedPhaseError):
        GaussRat.root_of_unity(Fraction(1, 3))


# --- series arithmetic


def test_difference_of_squares():
    a = series({(0, 0): 1, (0, 1): 1}, 10)
    b = series({(0, 0): 1, (0, 1): -1}, 10)
    assert a * b == series({(0, 0): 1, (0, 2): -1}, 10)


def test_multiply_by_one():
    a = series({(1, 3): 2, (-1, 5): GaussRat(0, 1)}, 30)
    assert a * TwoVarSeries.one(30) == a


def test_small_theta_square_coefficient():
    # (sum p^m q^(m^2/2), |m| <= 2)^2, cutoff q^2: coefficient of p^0 q^1 is 2
    a = series({(2 * m, 12 * m * m): 1 for m in range(-2, 3)}, 48)
    assert (a * a).coeff_num(0, 24) == GaussRat(2)


def test_ladder_mismatch_is_configuration_error():
    a = TwoVarSeries({(0, 0): 1}, 10)
    b = TwoVarSeries({(0, 0): 1}, 10, qDen=12)
    with pytest.raises(qs.ConfigurationError):
        a * b


def test_cutoff_is_minimum_and_nothing_above_is_reported():
    a = series({(0, 0): 1, (0, 5): 1}, 20)
    b = series({(0, 0): 1, (0, 5): 1}, 8)
    c = a * b
    assert c.qCutoff == 8
    assert all(n <= 8 for (_, n) in c.terms)


def test_geometric_series_inverse():
    inv = qs.series_invert(series({(0, 0): 1, (0, 24): -1}, 24 * 6))
    assert inv == series({(0, 24 * j): 1 for j in range(7)}, 24 * 6)


def test_monomial_inverse():
    inv = qs.series_invert(series({(0, 28): 1}, 100))
    assert inv.terms == {(0, -28): ONE}


def test_non_monomial_leading_layer_rejected():
    with pytest.raises(qs.NotInvertibleError):
        qs.series_invert(series({(1, 0): 1, (-1, 0): 1}, 10))


small_series = st.dictionaries(
    st.tuples(st.integers(-3, 3), st.integers(1, 30)),
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)), max_size=6)


def _mk(d, lead=(0, 1)):
    terms = {k: GaussRat(*v) for k, v in d.items()}
    terms[(0, 0)] = GaussRat(*lead)
    return TwoVarSeries(terms, 30)


@settings(max_examples=40, deadline=None)
@given(small_series, small_series, small_series)
def test_ring_laws(x, y, z):
    a, b, c = _mk(x), _mk(y), _mk(z)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(small_series)
def test_invert_then_multiply_is_one(x):
    a = _mk(x, lead=(2, 1))
    assert a * qs.series_invert(a) == TwoVarSeries.one(30)


def test_series_json_round_trip_and_ordering():
    a = series({(1, 3): GaussRat(Fraction(1, 2), -1), (-1, 0): 2}, 30)
    d = a.to_json()
    assert d["terms"][0][:2] == [-1, 0]
    assert d["terms"][1][2] == [1, 2, -1, 1]
    assert TwoVarSeries.from_json(d) == a


# --- eta


def test_eta_low_order_coefficients():
    s = qs.eta_series(1, 1 + 24 * 8)
    got = [s.coeff_num(0, 1 + 24 * n) for n in range(9)]
    assert got == [GaussRat(v) for v in (1, -1, -1, 0, 0, 1, 0, 1, 0)]
    assert s.coeff_num(0, 0) == qs.ZERO


def test_eta_pentagonal_sparsity_to_order_100():
    # independent oracle: Euler's pentagonal number theorem
    s = qs.eta_series(1, 1 + 24 * 100)
    expected = {}
    for j in range(-10, 11):
        n = j * (3 * j - 1) // 2
        if n <= 100:
            expected[n] = (-1) ** (j % 2)
    for n in range(101):
        assert s.coeff_num(0, 1 + 24 * n) == GaussRat(expected.get(n, 0))


def test_eta_rescaling():
    s1, s2 = qs.eta_series(1, 24 * 10), qs.eta_series(2, 48 * 10)
    for (m, n), v in s1.terms.items():
        assert s2.coeff_num(0, 2 * n) == v


# --- theta


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("a", [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
@pytest.mark.parametrize("shift", [False, True])
def test_triple_product_matches_defining_sum(k, a, shift):
    cut = 24 * 20
    prod = qs.theta_factored(k, a, shift, cut)
    assert prod.expand(cut) == qs.theta_sum(k, a, shift, cut)


def test_theta_first_p_layer():
    s = qs.theta_factored(1, 0, False, 24 * 2).expand(48)
    assert s.coeff_num(2, 12) == GaussRat(-1)


def test_theta_p_to_one_is_theta_constant():
    # theta(1/2 | tau) at z = 0: sum (-1)^m q^(m^2/2)
    s = qs.theta_factored(1, 0, False, 24 * 8).expand(24 * 8).subs_p_one()
    terms = {}
    for m in range(-4, 5):
        terms[(0, 12 * m * m)] = terms.get((0, 12 * m * m), 0) + (-1) ** (m % 2)
    expected = TwoVarSeries(terms, 24 * 8)
    assert s == expected


def test_shifted_theta_has_q_free_vanishing_atom():
    f = qs.theta_factored(1, 0, True, 48)
    assert any(at.qExp == 0 and at.pExp == -1 and at.zeta == ONE for at in f.atoms)


def test_unsupported_phase():
    with pytest.raises(qs.UnsupportedPhaseError):
        qs.theta_factored(1, Fraction(1, 3), False, 24)


# --- p -> 1 limits


def test_limit_cancels_matched_atoms():
    f = FactoredForm(ONE, 0, 0, [Atom(ONE, -4, 0, 14), Atom(ONE, -2, 0, -14)], 100)
    assert qs.limit_p_to_one(f) == TwoVarSeries({(0, 0): 2 ** 14}, 100)


def test_limit_of_p_free_form_is_its_expansion():
    f = qs.eta_factored(3, 24 * 10)
    assert qs.limit_p_to_one(f) == f.expand()


def test_limit_reports_order():
    f = FactoredForm(ONE, 0, 0, [Atom(ONE, -1, 0, 1)], 10)
    with pytest.raises(qs.DivergesOrVanishes) as e:
        qs.limit_p_to_one(f)
    assert e.value.order == 1


def test_limit_agrees_with_substitution_without_vanishing_atoms():
    f = qs.theta_factored(2, Fraction(1, 4), False, 24 * 6)
    assert qs.limit_p_to_one(f, 24 * 6) == f.expand(24 * 6).subs_p_one()


# --- numerics


def test_eta_at_i():
    expected = mpmath.gamma(0.25) / (2 * mpmath.pi ** 0.75)
    for method in ("product", "reduced"):
        v = qs.numeric_eval([(1, 1)], 1j, method=method)
        assert abs(v - complex(expected)) < 1e-13


def test_eta_against_mpmath_q_pochhammer():
    for tau in (0.3 + 0.4j, -0.45 + 0.06j, 0.1 + 1.2j):
        q = mpmath.exp(2j * mpmath.pi * tau)
        ref = complex(mpmath.exp(2j * mpmath.pi * tau / 24) * mpmath.qp(q))
        v = qs.numeric_eval([(1, 1)], tau)
        assert abs(v - ref) <= 1e-12 * abs(ref)


def test_eta_translation_and_inversion():
    for tau in (0.1 + 0.5j, -0.23 + 0.9j, 0.37 + 1.7j, 0.05 + 0.31j, 0.4 + 0.7j):
        r = qs.numeric_eval([(1, 1)], tau + 1) / qs.numeric_eval([(1, 1)], tau)
        assert abs(r - cmath.exp(1j * math.pi / 12)) < 1e-12
        lhs = qs.numeric_eval([(1, 1)], -1 / tau)
        rhs = cmath.sqrt(-1j * tau) * qs.numeric_eval([(1, 1)], tau)
        assert abs(lhs - rhs) < 1e-9


def test_eta_quotient_positive_on_imaginary_axis():
    v = qs.numeric_eval([(2, 4), (1, -4)], 1j)
    assert abs(v.imag) < 1e-15 and v.real > 0


def test_precision_error_and_upper_half_plane():
    with pytest.raises(qs.PrecisionError):
        qs.log_eta_product(1e-7j, max_terms=1000)
    with pytest.raises(ValueError):
        qs.numeric_eval([(1, 1)], -1j)
