from fractions import Fraction as F

import pytest

from entangled_banks import (
    DegenerateModelError,
    RestrictionError,
    compute_thresholds,
    debt_levels,
    debt_reduction_I,
    p_aut,
    p_f_aut,
    p_ind,
    p_r_aut,
    p_s_aut,
    p_soc,
    p_star,
    p_term,
    s_safe,
    u_feasible_interval,
)
from entangled_banks import thresholds as tf

from conftest import valid_sets
from oracle import exact_thresholds

# Exact values for the canonical scenario, worked out by hand from the literals.
P0_EXACT = {
    "I": F(1, 50),
    "s_safe": F(209, 16000),
    "D_star": F(399, 400),
    "D_safe": F(3199, 3200),
    "R_star": F(400, 399),
    "p_ind": F(1, 135),
    "p_soc": F(2, 2695),
    "p_term": F(5, 129),
    "p_f_aut": F(80, 517),
    "p_r_aut": F(1, 127),
    "p_s_aut": F(4, 193),
    "p_aut": F(1, 127),
    "p_star": F(1, 135),
}
P0_DEBTS = {"D_term": F(1199, 1600), "D_r_aut": F(30391, 32000), "D_s_aut": F(34391, 40000)}


def test_oracle_agrees_with_hand_values(p0):
    exact = exact_thresholds(p0)
    for key, value in P0_EXACT.items():
        assert exact[key] == value, key


def test_p0_thresholds(p0):
    t = compute_thresholds(p0).as_dict()
    for key, value in P0_EXACT.items():
        assert t[key] == pytest.approx(float(value), rel=1e-12), key


def test_p0_debt_levels(p0):
    d = debt_levels(p0)
    for key, value in P0_DEBTS.items():
        assert d[key] == pytest.approx(float(value), rel=1e-12), key
    assert d["D_max"] == pytest.approx(d["D_star"], rel=1e-12)
    assert d["R_star"] == pytest.approx(1.0025063, rel=1e-7)


def test_printed_p0_constants(p0):
    t = compute_thresholds(p0)
    assert round(t.p_ind, 7) == 0.0074074
    assert round(t.p_soc, 8) == 0.00074212
    assert round(t.p_term, 6) == 0.038760  # 0.0387597 rounds up
    assert round(t.p_r_aut, 7) == 0.0078740
    assert round(t.p_s_aut, 6) == 0.020725
    assert round(t.p_f_aut, 6) == 0.154739


def test_no_risk_limit(p0):
    params = p0.replace(p=0.0)
    d = debt_levels(params)
    assert d["D_star"] == d["D_safe"] == pytest.approx(1.1 - 0.3 + 0.2)
    assert d["R_star"] == 1.0


def test_certain_bad_state(p0):
    assert debt_levels(p0.replace(p=1.0))["D_star"] == pytest.approx(p0.L)


def test_s_safe(p0):
    assert s_safe(p0) == pytest.approx(0.0130625, rel=1e-12)
    assert s_safe(p0.replace(p=0.0)) == pytest.approx(0.1 / 8)
    # no discounting -> actuarially fair price; beta = 1 is outside the model so take the limit
    assert s_safe(p0.replace(beta=1 - 1e-12)) == pytest.approx(p0.p / p0.n, rel=1e-8)


def test_debt_reduction(p0):
    assert debt_reduction_I(p0) == pytest.approx(0.02)
    assert debt_reduction_I(p0.replace(X=0.3)) == pytest.approx(p0.u)
    assert debt_reduction_I(p0.replace(r=2)) == pytest.approx(0.14)
    with pytest.raises(RestrictionError):
        debt_reduction_I(p0.replace(u=0.05))


def test_p_ind_examples(p0):
    assert p_ind(p0) == pytest.approx(0.0074074, rel=1e-5)
    assert p_ind(p0.replace(beta=1 - 1e-12)) < 1e-12


def test_p_soc_examples(p0):
    assert p_soc(p0) == pytest.approx(0.004 / 5.39, rel=1e-12)


def test_p_term_examples(p0):
    assert p_term(p0.replace(B_0=0.0)) == 0.0


def test_p_f_aut_vanishes_with_numerator(p0):
    params = p0.replace(R_L=0.0, X=0.3, R_H=1.0, B_1=1.3)
    assert params.R_L == params.R_H + params.X - params.B_1
    assert p_f_aut(params) == 0.0


def test_p_s_aut_vanishes_with_numerator(p0):
    params = p0.replace(u=0.05)  # 2u + X - B_1 = 0
    assert p_s_aut(params) == pytest.approx(0.0, abs=1e-15)


def test_p_aut_and_p_star(p0):
    assert p_aut(p0) == p_r_aut(p0)
    assert p_star(p0) == p_ind(p0)
    assert p_star(p0) <= p_ind(p0)


def test_thresholds_vanish_as_beta_to_one(p0):
    params = p0.replace(beta=1 - 1e-6)
    for fn in (p_ind, p_soc, p_term, p_f_aut, p_r_aut, p_s_aut):
        assert 0 <= fn(params) < 1e-4, fn.__name__


def test_u_interval(p0):
    lo, hi = u_feasible_interval(p0)
    assert lo == pytest.approx(0.1)
    assert hi == 0.15
    assert u_feasible_interval(p0.replace(r=2))[1] == pytest.approx(0.125, rel=1e-15)
    assert u_feasible_interval(p0.replace(r=2))[1] == pytest.approx(5 / 12 * 0.3, rel=1e-15)


def test_u_interval_empty(p0):
    with pytest.raises(DegenerateModelError):
        u_feasible_interval(p0.replace(X=0.0))


def test_degenerate_denominator_raises(p0):
    params = p0.replace(R_H=0.4, R_L=0.0, L=0.39, X=0.0, B_1=0.39, beta=0.51, u=0.5)
    with pytest.raises(DegenerateModelError):
        p_soc(params)


def test_compute_thresholds_requires_valid_params(p0):
    with pytest.raises(RestrictionError) as info:
        compute_thresholds(p0.replace(L=0.0))
    assert not info.value.report.passed
    compute_thresholds(p0.replace(L=0.0), check=False)


def test_compute_thresholds_deterministic(p0):
    assert compute_thresholds(p0) == compute_thresholds(p0)


def test_unclamped_values_flagged(p0):
    t = compute_thresholds(p0.replace(beta=0.51, L=0.9), check=False)
    assert t.p_f_aut > 1
    assert "p_f_aut" in t.above_one


@pytest.mark.parametrize("params", valid_sets(11, 60), ids=lambda p: f"n{p.n}r{p.r}")
def test_matches_exact_oracle(params):
    exact = exact_thresholds(params)
    t = compute_thresholds(params).as_dict()
    for key, value in exact.items():
        assert t[key] == pytest.approx(float(value), rel=1e-10, abs=1e-15), key


@pytest.mark.parametrize("params", valid_sets(12, 40), ids=lambda p: f"n{p.n}r{p.r}")
def test_structural_invariants(params):
    t = compute_thresholds(params)
    assert t.p_aut == min(t.p_s_aut, t.p_r_aut, t.p_f_aut)
    assert t.p_star == min(t.p_ind, t.p_aut, t.p_term)
    assert t.R_star >= 1
    assert 0 < t.D_star <= t.D_safe <= 1
    assert t.u_lo < params.u < t.u_hi
    assert t.u_lo == pytest.approx(params.B_1 - params.X)


def test_two_neighbor_forms_at_p0(p0):
    assert tf.p_soc(p0) == pytest.approx(tf.p_soc_two_neighbors(p0), rel=1e-12)
    assert tf.p_r_aut(p0) == pytest.approx(tf.p_r_aut_two_neighbors(p0), rel=1e-12)
    assert tf.p_s_aut(p0) == pytest.approx(tf.p_s_aut_two_neighbors(p0), rel=1e-12)
