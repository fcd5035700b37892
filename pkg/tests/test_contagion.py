import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from entangled_banks import (
    Regime,
    canonical_scenario,
    cascade,
    classify_regime,
    compute_thresholds,
    draw_bad_state,
    monte_carlo,
    rollover_feasible,
    welfare_gains,
)
from entangled_banks.contagion import (
    expected_payoffs,
    insurance_payout_probabilities,
    intervention_cost,
    rollover_capacity,
    rollover_feasible_two_neighbors,
)

from conftest import valid_sets


def test_classify_p0(p0):
    report = classify_regime(p0)
    assert report.regime is Regime.CONTAGIOUS_UNINSURED
    assert report.socially_desirable
    assert not report.privately_chosen
    assert report.theorem_applicable


def test_classify_dense_ring_insures(p0):
    report = classify_regime(p0.replace(r=2), compute_thresholds(p0.replace(r=2), check=False))
    assert report.regime is Regime.INSURED_STABLE
    assert report.privately_chosen


def test_classify_out_of_range(p0):
    report = classify_regime(p0.replace(p=0.01))
    assert report.regime is Regime.OUT_OF_THEOREM_RANGE
    assert not report.theorem_applicable


@pytest.mark.parametrize("params", valid_sets(21, 40), ids=lambda p: f"n{p.n}r{p.r}")
def test_regime_invariants(params):
    report = classify_regime(params)
    if report.regime is Regime.INSURED_STABLE:
        assert 4 * params.r >= params.n
    if report.regime is Regime.CONTAGIOUS_UNINSURED:
        assert 4 * params.r < params.n and params.p < report.thresholds.p_star


def test_rollover_examples(p0):
    assert rollover_capacity(1, p0) == pytest.approx(0.5)
    assert not rollover_feasible(1, p0)
    assert rollover_feasible(0, p0)
    assert not rollover_feasible(2, p0)
    with pytest.raises(ValueError):
        rollover_feasible(3, p0)


def test_rollover_with_all_neighbours_lost_needs_high_low_return(p0):
    # R_L = R_H + X - B_1 makes the full loss exactly break even (indifference is feasible)
    params = p0.replace(R_H=1.2, R_L=1.1, X=0.2, B_1=0.3)
    assert rollover_feasible(2, params)
    assert rollover_feasible_two_neighbors(2, params)


def test_rollover_two_neighbor_form(p0):
    for n_d in range(3):
        assert rollover_feasible(n_d, p0) == rollover_feasible_two_neighbors(n_d, p0)


def test_cascade_p0_rounds(p0):
    state = cascade([0], False, p0)
    assert state.n_failed == 8
    assert state.failed_round.tolist() == [0, 1, 2, 3, 4, 3, 2, 1]
    assert state.rounds == 4


def test_cascade_insured_stays_local(p0):
    assert cascade([3], True, p0).failed_set() == {3}


def test_cascade_empty(p0):
    assert cascade([], False, p0).n_failed == 0


def test_cascade_rounds_contiguous(p0):
    params = p0.replace(n=16, r=3)
    state = cascade([0, 5], False, params)
    rounds = sorted(set(state.failed_round[state.failed].tolist()))
    assert rounds == list(range(len(rounds)))


def test_intervention_rescues_banks(p0):
    # r = 1: every bank next to a failure has lost r counter-parties and is rescued
    state = cascade([0], False, p0, intervene=True)
    assert state.failed_set() == {0}
    assert state.rescued.sum() == 2
    assert intervention_cost(state, p0) == pytest.approx(2 * 0.02)


def test_intervention_larger_ring(p0):
    params = p0.replace(n=16, r=3, u=0.105)
    plain = cascade([0], False, params)
    helped = cascade([0], False, params, intervene=True)
    assert plain.n_failed == 16
    assert helped.n_failed < 16
    assert helped.failed_set() <= plain.failed_set()
    assert not (helped.rescued & helped.failed).any()


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 16), st.data())
def test_cascade_monotone_in_initial_set(n, data):
    r = data.draw(st.integers(1, (n - 1) // 2))
    base = canonical_scenario().replace(n=n, r=r)
    small = data.draw(st.sets(st.integers(0, n - 1), max_size=n))
    extra = data.draw(st.sets(st.integers(0, n - 1), max_size=n))
    a = cascade(small, False, base).failed_set()
    b = cascade(small | extra, False, base).failed_set()
    assert a <= b


def test_draw_bad_state_limits(p0):
    rng = np.random.default_rng(0)
    assert all(draw_bad_state(rng, p0.replace(p=0.0)) is None for _ in range(1000))
    draws = [draw_bad_state(rng, p0.replace(p=1.0)) for _ in range(1000)]
    assert all(d is not None and 0 <= d < 8 for d in draws)


def test_draw_bad_state_frequency(p0):
    rng = np.random.default_rng(123)
    hits = sum(draw_bad_state(rng, p0) is not None for _ in range(100_000))
    se = np.sqrt(0.005 * 0.995 / 100_000)
    assert abs(hits / 100_000 - 0.005) <= 3 * se


def test_monte_carlo_uninsured_all_or_nothing(p0):
    report = monte_carlo(p0, 20_000, seed=3)
    assert set(report.failure_distribution) <= {0, 8}
    assert report.failure_distribution.get(8, 0) == pytest.approx(report.bad_state_frequency)
    assert sum(report.failure_distribution.values()) == pytest.approx(1.0)


def test_monte_carlo_insured_single_failures(p0):
    report = monte_carlo(p0, 20_000, seed=3, insured=True)
    assert set(report.failure_distribution) <= {0, 1}


def test_monte_carlo_no_risk(p0):
    report = monte_carlo(p0.replace(p=0.0), 1000, seed=1)
    assert report.failure_distribution == {0: 1.0}
    assert report.bad_states == 0


def test_monte_carlo_deterministic(p0):
    assert monte_carlo(p0, 5000, seed=9) == monte_carlo(p0, 5000, seed=9)
    assert monte_carlo(p0, 5000, seed=9) != monte_carlo(p0, 5000, seed=10)


def test_monte_carlo_histogram_uniform(p0):
    report = monte_carlo(p0.replace(p=1.0), 100_000, seed=5)
    observed = np.array(report.shocked_histogram)
    chi2 = ((observed - observed.sum() / 8) ** 2 / (observed.sum() / 8)).sum()
    assert chi2 < stats.chi2.ppf(0.999, 7)


def test_monte_carlo_payoffs_converge(p0):
    params = p0.replace(p=0.2)
    report = monte_carlo(params, 200_000, seed=2)
    expected = expected_payoffs(params)
    for key, value in expected.items():
        assert report.mean_bank_payoff[key] == pytest.approx(value, abs=3e-3)


def test_welfare_gains_p0(p0):
    gains = welfare_gains(p0)
    assert gains["private_deviation_gain"] == pytest.approx(-0.0001625, rel=1e-9)
    assert gains["social_gain"] == pytest.approx(0.00286875, rel=1e-9)


def test_private_gain_zero_at_threshold(p0):
    t = compute_thresholds(p0)
    gains = welfare_gains(p0.replace(p=t.p_ind))
    assert gains["private_deviation_gain"] == pytest.approx(0.0, abs=1e-15)


def test_payout_probabilities_meet_at_full_degree(p0):
    params = p0.replace(n=9, r=4)
    probs = insurance_payout_probabilities(params)
    assert probs["private"] == pytest.approx(probs["social"], rel=1e-15)
    assert insurance_payout_probabilities(p0)["private"] < insurance_payout_probabilities(p0)["social"]


def test_expected_payoffs_match_welfare_gap(p0):
    e = expected_payoffs(p0)
    gap = e["InsuredStable"] - e["ContagiousUninsured"]
    assert gap == pytest.approx(welfare_gains(p0)["social_gain"], rel=1e-9)
