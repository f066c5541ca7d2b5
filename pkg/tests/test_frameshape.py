import cmath
import json
from fractions import Fraction
from importlib import resources

import pytest

from ruvoa import frameshape as fsm, qseries as qs
from ruvoa.qseries import GaussRat, Q_DEN


def table_rows():
    text = resources.files("ruvoa").joinpath("data", "frame_shapes.json").read_text()
    return json.loads(text)["rows"]


def test_parse_examples():
    assert fsm.parse_frame_shape("4^{14}/2^{14}").factors == ((2, 0, -14), (4, 0, 14))
    assert fsm.parse_frame_shape("1^{28}").factors == ((1, 0, 28),)
    assert fsm.parse_frame_shape("1_{1/4}^4 4^6").factors == ((1, Fraction(1, 4), 4), (4, 0, 6))


def test_parse_unbraced_single_digit_superscripts():
    assert fsm.parse_frame_shape("4^112^5").factors == ((4, 0, 1), (12, 0, 5))


def test_parse_repeated_cycle_with_distinct_phases():
    fs = fsm.parse_frame_shape("1^1 1_{1/4}^1 2_{3/4}^1 16^2/8^1")
    assert (1, 0, 1) in fs.factors and (1, Fraction(1, 4), 1) in fs.factors
    assert fs.dimension == 28


@pytest.mark.parametrize("bad", ["", "/2^3", "4^{14}/2^{14}/1", "4_{x}^2", "a^2"])
def test_parse_errors(bad):
    with pytest.raises(fsm.FrameShapeError):
        fsm.parse_frame_shape(bad)


def test_dimension_assertion():
    with pytest.raises(fsm.FrameShapeError):
        fsm.parse_frame_shape("1^{27}", 28)


def test_every_table_shape_has_the_right_dimension():
    rows = table_rows()
    assert len(rows) == 36
    for r in rows:
        assert fsm.parse_frame_shape(r["su28"]).dimension == 28
        assert fsm.parse_frame_shape(r["so56"]).dimension == 56


def test_format_round_trip():
    for r in table_rows():
        fs = fsm.parse_frame_shape(r["su28"])
        assert fsm.parse_frame_shape(fs.format()) == fs


def test_eigenvalue_examples():
    e = fsm.eigenvalues(fsm.parse_frame_shape("29^1/1^1"))
    assert e.total == 28 and e.multiplicity(0) == 0
    assert all(e.multiplicity(Fraction(j, 29)) == 1 for j in range(1, 29))
    assert fsm.eigenvalues(fsm.parse_frame_shape("1^{28}")).entries == {Fraction(0): 28}
    e = fsm.eigenvalues(fsm.parse_frame_shape("4^{14}/2^{14}"))
    assert e.entries == {Fraction(1, 4): 14, Fraction(3, 4): 14}


def test_inconsistent_shape():
    with pytest.raises(fsm.InconsistentShapeError):
        fsm.eigenvalues(fsm.parse_frame_shape("1^2/2^1"))


def test_every_lift_has_determinant_one_and_genuine_eigenvalues():
    for r in table_rows():
        e = fsm.eigenvalues(fsm.parse_frame_shape(r["su28"]))
        assert e.is_genuine() and e.total == 28
        assert e.determinant_angle() == 0


def test_negation_shifts_phase_by_half_cycle():
    fs = fsm.parse_frame_shape("1_{1/4}^4 4^6")
    neg = fs.negate()
    e, en = fsm.eigenvalues(fs), fsm.eigenvalues(neg)
    assert en.entries == {(t + Fraction(1, 2)) % 1: m for t, m in e.entries.items()}
    assert neg.negate() == fs


def test_trace_exterior_examples():
    assert fsm.trace_exterior(fsm.parse_frame_shape("29^1/1^1"), -1) == GaussRat(29)
    assert fsm.trace_exterior(fsm.parse_frame_shape("1^{28}"), 1) == GaussRat(2 ** 28)
    assert fsm.trace_exterior(fsm.parse_frame_shape("4^{14}/2^{14}"), -1) == GaussRat(2 ** 14)


def test_trace_exterior_against_numeric_eigenvalue_product():
    for r in table_rows():
        fs = fsm.parse_frame_shape(r["su28"])
        e = fsm.eigenvalues(fs)
        for sign in (1, -1):
            num = 1
            for t, m in e.entries.items():
                num *= (1 + sign * cmath.exp(2j * cmath.pi * float(t))) ** m
            exact = fsm.trace_exterior(fs, sign).to_complex()
            assert abs(num - exact) < 1e-6 * max(1, abs(exact))


def _phi_direct(fs, cut):
    # theta from its defining sum, eta from the product, assembled by plain series arithmetic
    out = qs.TwoVarSeries.one(cut + 200)
    for k, a, m in fs.factors:
        big = cut + 2 * 28 * 24
        f = qs.theta_sum(k, a, False, big) * qs.series_invert(qs.eta_series(k, big))
        if m < 0:
            f = qs.series_invert(f)
        for _ in range(abs(m)):
            out = out * f
    return out.truncate(cut)


@pytest.mark.parametrize("text", ["1^{28}", "4^{14}/2^{14}", "1_{1/4}^4 4^6", "29^1/1^1",
                                  "2^120^3/4^110^3"])
def test_phi_matches_direct_product(text):
    fs = fsm.parse_frame_shape(text)
    cut = -fs.dimension + 2 * Q_DEN
    assert fsm.phi(fs, cut) == _phi_direct(fs, cut)


def test_phi_leading_layer_is_monomial():
    for r in table_rows():
        fs = fsm.parse_frame_shape(r["su28"])
        s = fsm.phi(fs, -28 + 24)
        lead = s.layers()[s.qFloor]
        assert lead == {0: qs.ONE} and s.qFloor == -28


def test_identity_character_entries():
    fs = fsm.parse_frame_shape("1^{28}")
    inv = qs.series_invert(fsm.phi(fs, 28 + 24 - 56))
    assert inv.coeff_num(0, 28 + 24) == GaussRat(784)
    assert inv.coeff_num(2, 28 + 12) == GaussRat(28)


def test_psi_prefactor_and_vanishing_order():
    f = fsm.psi(fsm.parse_frame_shape("29^1/1^1"), 24)
    # explicit prefactor 29/8 - 1/8, plus q^(-28/24) from the eta denominators
    assert f.qExp == Fraction(28, 8) - Fraction(28, 24)
    f = fsm.psi(fsm.parse_frame_shape("1^{28}"), 24)
    with pytest.raises(qs.DivergesOrVanishes) as e:
        qs.limit_p_to_one(f)
    assert e.value.order == 28


def test_psi_expansion_matches_shifted_theta_sums():
    # a shape whose psi has no q-free poles: compare with direct sums
    fs = fsm.parse_frame_shape("1^{28}")
    cut = 24 * 2
    f = fsm.psi(fs, cut)
    s = f.expand()
    direct = qs.TwoVarSeries.one(10 ** 6)
    big = cut + 24 * 4
    th = qs.theta_sum(1, 0, True, big) * qs.series_invert(qs.eta_series(1, big + 2))
    for _ in range(28):
        direct = direct * th
    direct = direct.shift(28, 28 * 3)
    assert s == direct.truncate(s.qCutoff)


def test_limit_of_psi_leading_coefficient_is_trace_of_minus_lift():
    for r in table_rows():
        fs = fsm.parse_frame_shape(r["su28"])
        try:
            s = qs.limit_p_to_one(fsm.psi(fs, 24))
        except qs.DivergesOrVanishes as e:
            assert e.order > 0
            assert fsm.trace_exterior(fs, -1) == qs.ZERO
            continue
        assert s.coeff_num(0, s.qFloor) == fsm.trace_exterior(fs, -1)


def test_scaled_rule_is_rejected_by_the_determinant_check():
    # the alternative reading x^k = exp(2 pi i a k) breaks det = 1 for some lift
    bad = 0
    for r in table_rows():
        fs = fsm.parse_frame_shape(r["su28"])
        e = fsm.eigenvalues(fs, fsm.SCALED_RULE, allow_negative=True)
        bad += e.determinant_angle() != 0
    assert bad > 0
