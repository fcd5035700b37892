"""Cross-checks of closed forms against the enumerator and against each other.

Used by the ``verify`` command; each check returns a :class:`Check` instead
of raising so the whole battery runs and reports every mismatch at once.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from . import thresholds as tf
from .contagion import (
    cascade,
    insures_by_topology,
    rollover_feasible,
    rollover_feasible_two_neighbors,
    welfare_gains,
)
from .errors import ModelError
from .exact import (
    enumerate_survival_mass,
    enumerate_unhedged_payoff,
    expected_unhedged_payoff,
    hedging_bound_ratio,
    hedging_preferred,
    literal,
    survival_mass,
)
from .params import ModelParams, sample_valid_params

REL_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def rel_close(a, b, rel=REL_TOL, abs_floor=0.0) -> bool:
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_floor)


def _check(name, fn) -> Check:
    try:
        worst = fn()
    except ModelError as exc:
        return Check(name, False, f"model error: {exc}")
    if worst is True or worst is None:
        return Check(name, True)
    return Check(name, False, str(worst))


def check_oracle(rng, r_max=8, pairs=20):
    for r in range(1, r_max + 1):
        if survival_mass(r) != enumerate_survival_mass(r):
            return f"survival mass differs at r={r}"
        for _ in range(pairs):
            B_1, u = rng.uniform(0, 1), rng.uniform(0, 1)
            a, b = expected_unhedged_payoff(B_1, u, r), enumerate_unhedged_payoff(B_1, u, r)
            if not rel_close(a, b):
                return f"r={r} B_1={B_1!r} u={u!r}: closed {a!r} vs enumerated {b!r}"
    return True


def check_hedging(params_list):
    for params in params_list:
        closed = hedging_preferred(params)
        bound = literal(params.u) < literal(params.B_1) * hedging_bound_ratio(params.r)
        brute = params.B_1 > enumerate_unhedged_payoff(params.B_1, params.u, params.r)
        if not closed == bound == brute:
            return f"{params}: closed={closed} bound={bound} brute={brute}"
    return True


def check_break_even(params_list):
    for params in params_list:
        t = tf.compute_thresholds(params, check=False)
        p, n, r, L, I = params.p, params.n, params.r, params.L, t.I
        V = tf.pledgable_return(params)
        pairs = {
            "contagious investors": ((1 - p) * t.R_star * t.D_star + p * L, t.D_star),
            "rate times debt": (t.R_star * t.D_star, V),
            "max debt at contagious rate": (t.D_max, t.D_star),
            "insured investors": ((1 - p / n) * V + (p / n) * L, t.D_safe),
            "insurance fund": (
                params.beta * (2 * r * I - 2 * p * r * I),
                2 * r * I - 2 * n * r * I * t.s_safe,
            ),
        }
        for label, (a, b) in pairs.items():
            if not rel_close(a, b):
                return f"{label}: {a!r} vs {b!r} for {params}"
    return True


def check_min_identities(params_list):
    for params in params_list:
        t = tf.compute_thresholds(params, check=False)
        if t.p_aut != min(t.p_s_aut, t.p_r_aut, t.p_f_aut):
            return f"p_aut is not the autarky minimum for {params}"
        if t.p_star != min(t.p_ind, t.p_aut, t.p_term):
            return f"p_star is not the minimum for {params}"
    return True


def check_two_neighbor_forms(params_list):
    for params in params_list:
        q = params.replace(r=1)
        try:
            tf.debt_reduction_I(q)
        except ModelError:
            continue
        pairs = {
            "p_soc": (tf.p_soc(q), tf.p_soc_two_neighbors(q)),
            "p_r_aut": (tf.p_r_aut(q), tf.p_r_aut_two_neighbors(q)),
            "p_s_aut": (tf.p_s_aut(q), tf.p_s_aut_two_neighbors(q)),
            "u bound": (tf.counterparty_upper_bound(q), tf.u_upper_two_neighbors(q)),
        }
        for label, (a, b) in pairs.items():
            if not rel_close(a, b):
                return f"{label}: general {a!r} vs two-neighbour {b!r}"
        for n_d in range(3):
            if rollover_feasible(n_d, q) != rollover_feasible_two_neighbors(n_d, q):
                return f"rollover differs at n_d={n_d}"
    return True


def check_contagion(params_list):
    for params in params_list:
        if insures_by_topology(params):
            continue
        for bank in range(params.n):
            state = cascade([bank], False, params)
            if state.n_failed != params.n:
                return f"cascade from {bank} stopped at {state.n_failed} banks for {params}"
            if state.rounds > -(-params.n // 2):
                return f"cascade from {bank} took {state.rounds} rounds"
        if cascade([0], True, params).failed_set() != {0}:
            return "insured cascade spread"
    return True


def check_welfare_signs(params_list, rel=1e-9):
    for params in params_list:
        t = tf.compute_thresholds(params, check=False)
        g = welfare_gains(params, t)
        for key, threshold in (("private_deviation_gain", t.p_ind), ("social_gain", t.p_soc)):
            gap = params.p - threshold
            if abs(gap) <= rel * max(abs(threshold), 1e-300):
                continue
            if np.sign(g[key]) != np.sign(gap):
                return f"{key}={g[key]!r} disagrees with p - threshold = {gap!r}"
    return True


def run_verification(params: ModelParams, seed: int = 0, draws: int = 200) -> List[Check]:
    """Run the full cross-check battery on ``params`` plus ``draws`` random valid sets."""
    rng = np.random.default_rng(seed)
    sample = [params] + [sample_valid_params(rng) for _ in range(draws)]
    contagious = [p for p in sample if not insures_by_topology(p)][:50]
    return [
        _check("oracle_equivalence", lambda: check_oracle(rng)),
        _check("hedging_three_way", lambda: check_hedging(sample)),
        _check("break_even_identities", lambda: check_break_even(sample)),
        _check("threshold_minima", lambda: check_min_identities(sample)),
        _check("two_neighbor_corollaries", lambda: check_two_neighbor_forms(sample)),
        _check("contagion_totality", lambda: check_contagion(contagious)),
        _check("welfare_signs", lambda: check_welfare_signs(sample)),
    ]
