"""Regime classification, rollover cascades on the ring, and Monte-Carlo bad-state draws."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Optional

import numpy as np

from .exact import literal
from .params import ModelParams, adjacency
from .thresholds import ThresholdSet, compute_thresholds, debt_levels, debt_reduction_I, s_safe

GENERATOR = "numpy.random.PCG64"


class Regime(str, Enum):
    CONTAGIOUS_UNINSURED = "ContagiousUninsured"
    INSURED_STABLE = "InsuredStable"
    OUT_OF_THEOREM_RANGE = "OutOfTheoremRange"

    def __str__(self):
        return self.value


def insures_by_topology(params) -> bool:
    """Counter-party risk is judged large enough to insure once ``2r >= n/2``."""
    return 4 * params.r >= params.n


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    socially_desirable: bool
    privately_chosen: bool
    theorem_applicable: bool
    thresholds: ThresholdSet

    def as_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "socially_desirable": self.socially_desirable,
            "privately_chosen": self.privately_chosen,
            "theorem_applicable": self.theorem_applicable,
            "thresholds": self.thresholds.as_dict(),
        }


def classify_regime(params: ModelParams, thresholds: Optional[ThresholdSet] = None) -> RegimeReport:
    if thresholds is None:
        thresholds = compute_thresholds(params)
    p = params.p
    dense = insures_by_topology(params)
    applicable = p < thresholds.p_star
    if dense:
        regime = Regime.INSURED_STABLE
    elif applicable:
        regime = Regime.CONTAGIOUS_UNINSURED
    else:
        regime = Regime.OUT_OF_THEOREM_RANGE
    return RegimeReport(
        regime=regime,
        socially_desirable=p > thresholds.p_soc,
        privately_chosen=p >= thresholds.p_ind or dense,
        theorem_applicable=applicable,
        thresholds=thresholds,
    )


# -- rollover and cascades -----------------------------------------------------


def rollover_capacity(n_d: int, params) -> float:
    """Debt investors will roll over for a bank with ``n_d`` failed counter-parties.

    ``P_s (R_H + X - B_1) + P_f R_L`` with ``P_f = n_d / 2r``.
    """
    return float(_rollover_capacity(n_d, params))


def _rollover_capacity(n_d, params) -> Fraction:
    deg = 2 * params.r
    if not 0 <= n_d <= deg:
        raise ValueError(f"failed-neighbour count {n_d} outside 0..{deg}")
    P_s = Fraction(deg - n_d, deg)
    P_f = Fraction(n_d, deg)
    D_1 = literal(params.R_H) + literal(params.X) - literal(params.B_1)
    return P_s * D_1 + P_f * literal(params.R_L)


def rollover_feasible(n_d: int, params) -> bool:
    """Whether a bank with ``n_d`` failed counter-parties still gets its debt rolled over.

    The debt due is ``D_1 = R_H + X - B_1``; equality counts as feasible.
    """
    D_1 = literal(params.R_H) + literal(params.X) - literal(params.B_1)
    return _rollover_capacity(n_d, params) >= D_1


def rollover_feasible_two_neighbors(n_d: int, params) -> bool:
    D_1 = literal(params.R_H) + literal(params.X) - literal(params.B_1)
    half = Fraction(1, 2)
    capacity = {0: D_1, 1: half * D_1 + half * literal(params.R_L), 2: literal(params.R_L)}[n_d]
    return capacity >= D_1


@dataclass
class NetworkState:
    """Per-bank outcome of a cascade.

    ``failed_round[i]`` is the round in which bank ``i`` failed (0 for the
    initial shock) or -1 if it is still operating. ``rescued`` marks banks
    kept alive by a debt-reduction injection.
    """

    failed_round: np.ndarray
    insured: bool
    rescued: np.ndarray = field(default=None)

    def __post_init__(self):
        self.failed_round = np.asarray(self.failed_round, dtype=int)
        if self.rescued is None:
            self.rescued = np.zeros(len(self.failed_round), dtype=bool)

    @property
    def failed(self) -> np.ndarray:
        return self.failed_round >= 0

    @property
    def operating(self) -> np.ndarray:
        return ~self.failed

    @property
    def n_failed(self) -> int:
        return int(self.failed.sum())

    @property
    def rounds(self) -> int:
        """Number of cascade rounds after the initial shock."""
        return int(self.failed_round.max()) if self.n_failed else 0

    def failed_set(self) -> set:
        return set(np.flatnonzero(self.failed).tolist())


def cascade(
    initial_failed: Iterable[int],
    insured: bool,
    params: ModelParams,
    *,
    intervene: bool = False,
) -> NetworkState:
    """Propagate failures through the ring in synchronous rounds.

    Insured banks are paid out on a counter-party default and stay hedged, so
    nothing spreads. Uninsured, every operating bank whose rollover becomes
    infeasible fails in the next round, until nothing changes.

    With ``intervene`` a bank that has lost at least ``r`` counter-parties
    receives the debt reduction ``I`` and is kept operating.
    """
    n = params.n
    rounds = np.full(n, -1, dtype=int)
    rescued = np.zeros(n, dtype=bool)
    for i in initial_failed:
        if not 0 <= i < n:
            raise IndexError(f"bank index {i} outside 0..{n - 1}")
        rounds[i] = 0
    if insured:
        return NetworkState(rounds, True, rescued)

    adj = adjacency(params).astype(int)
    feasible = np.array([rollover_feasible(k, params) for k in range(2 * params.r + 1)])
    k = 0
    while True:
        n_d = adj @ (rounds >= 0)
        at_risk = (rounds < 0) & ~rescued
        if intervene:
            rescue = at_risk & (n_d >= params.r)
            rescued |= rescue
            at_risk &= ~rescue
        newly = at_risk & ~feasible[n_d]
        if not newly.any():
            break
        k += 1
        rounds[newly] = k
    return NetworkState(rounds, False, rescued)


def intervention_cost(state: NetworkState, params) -> float:
    """Total equity injected into rescued banks."""
    return int(state.rescued.sum()) * debt_reduction_I(params)


# -- payoffs -------------------------------------------------------------------


def insurance_payout_probabilities(params) -> Dict[str, float]:
    """Chance a given bank collects an insurance payout: privately ``2rp/n``, socially ``(n-1)p/n``."""
    n, p = params.n, params.p
    return {"private": 2 * params.r * p / n, "social": (n - 1) * p / n}


def expected_payoffs(params: ModelParams) -> Dict[str, float]:
    """Expected banker payoff (net of own equity) in the contagious and insured systems."""
    n, r, p, beta, B_1 = params.n, params.r, params.p, params.beta, params.B_1
    debts = debt_levels(params)
    I = debt_reduction_I(params)
    contagious = beta * (1 - p) * B_1 - (1 - debts["D_star"])
    insured = (
        beta * (1 - (1 + 2 * r) * p / n) * B_1
        + beta * (2 * r * p / n) * (B_1 + I)
        - s_safe(params) * 2 * r * I
        - (1 - debts["D_safe"])
    )
    return {Regime.CONTAGIOUS_UNINSURED.value: contagious, Regime.INSURED_STABLE.value: insured}


def welfare_gains(params: ModelParams, thresholds: Optional[ThresholdSet] = None) -> Dict[str, float]:
    """Payoff differences behind the private and social insurance decisions.

    ``private_deviation_gain`` is what one bank gains by staying insured when
    everyone else is insured; ``social_gain`` compares everyone insured with
    nobody insured. Positive means insurance wins.
    """
    if thresholds is None:
        thresholds = compute_thresholds(params, check=False)
    n, r, p, beta, B_1 = params.n, params.r, params.p, params.beta, params.B_1
    I, s = thresholds.I, thresholds.s_safe
    payout = beta * (2 * r * p / n) * (B_1 + I)
    premium = s * 2 * r * I
    private = payout - premium
    insured = beta * (1 - (1 + 2 * r) * p / n) * B_1 + payout - premium - (1 - thresholds.D_safe)
    contagious = beta * (1 - p) * B_1 - (1 - thresholds.D_star)
    return {"private_deviation_gain": private, "social_gain": insured - contagious}


# -- Monte Carlo ---------------------------------------------------------------


def draw_bad_state(rng: np.random.Generator, params) -> Optional[int]:
    """With probability ``p`` return the index of the bank whose project fails."""
    if rng.random() < params.p:
        return int(rng.integers(params.n))
    return None


@dataclass(frozen=True)
class MCReport:
    trials: int
    seed: int
    generator: str
    insured: bool
    intervene: bool
    bad_states: int
    bad_state_frequency: float
    shocked_histogram: tuple
    failure_distribution: Dict[int, float]
    mean_bank_payoff: Dict[str, float]
    expected_bank_payoff: Dict[str, float]

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "generator": self.generator,
            "insured": self.insured,
            "intervene": self.intervene,
            "bad_states": self.bad_states,
            "bad_state_frequency": self.bad_state_frequency,
            "shocked_histogram": list(self.shocked_histogram),
            "failure_distribution": {str(k): v for k, v in self.failure_distribution.items()},
            "mean_bank_payoff": dict(self.mean_bank_payoff),
            "expected_bank_payoff": dict(self.expected_bank_payoff),
        }


def _realised_payoffs(state_uninsured, insured_state, params, I, s, debts):
    # Average banker payoff across banks for one bad-state outcome, both arrangements.
    beta, B_1, r = params.beta, params.B_1, params.r
    alive = state_uninsured.operating
    contagious = beta * B_1 * alive.mean() - (1 - debts["D_star"])

    adj = adjacency(params)
    failed = insured_state.failed
    paid = adj[failed].any(axis=0) & ~failed
    per_bank = np.where(failed, 0.0, B_1) + np.where(paid, I, 0.0)
    insured = beta * per_bank.mean() - s * 2 * r * I - (1 - debts["D_safe"])
    return contagious, insured


def monte_carlo(
    params: ModelParams,
    trials: int,
    seed: int = 0,
    insured: bool = False,
    *,
    intervene: bool = False,
) -> MCReport:
    """Simulate ``trials`` independent periods and aggregate the outcomes.

    Each trial is a bad state with probability ``p``, in which a uniformly
    chosen bank fails and the cascade is run from it. The report also carries
    the realised mean banker payoff under both arrangements, which should
    approach :func:`expected_payoffs`.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    n = params.n
    rng = np.random.Generator(np.random.PCG64(seed))
    bad = rng.random(trials) < params.p
    n_bad = int(bad.sum())
    shocked = rng.integers(0, n, size=n_bad)
    hist = np.bincount(shocked, minlength=n)

    debts = debt_levels(params)
    I = debt_reduction_I(params)
    s = s_safe(params)

    # Cascades are deterministic per shocked bank, so run each at most once.
    outcome = {}
    for bank in np.flatnonzero(hist):
        chosen = cascade([bank], insured, params, intervene=intervene)
        uninsured = chosen if not insured else cascade([bank], False, params, intervene=intervene)
        insured_state = chosen if insured else cascade([bank], True, params)
        outcome[int(bank)] = (chosen.n_failed, *_realised_payoffs(uninsured, insured_state, params, I, s, debts))

    failures = np.zeros(trials, dtype=int)
    failures[np.flatnonzero(bad)] = [outcome[int(b)][0] for b in shocked]
    counts = np.bincount(failures, minlength=n + 1)
    distribution = {k: int(c) / trials for k, c in enumerate(counts) if c}

    good_contagious = params.beta * params.B_1 - (1 - debts["D_star"])
    good_insured = params.beta * params.B_1 - s * 2 * params.r * I - (1 - debts["D_safe"])
    sum_c = good_contagious * (trials - n_bad)
    sum_i = good_insured * (trials - n_bad)
    for bank, count in enumerate(hist):
        if count:
            sum_c += count * outcome[bank][1]
            sum_i += count * outcome[bank][2]
    mean_payoff = {
        Regime.CONTAGIOUS_UNINSURED.value: float(sum_c / trials),
        Regime.INSURED_STABLE.value: float(sum_i / trials),
    }

    return MCReport(
        trials=int(trials),
        seed=int(seed),
        generator=GENERATOR,
        insured=bool(insured),
        intervene=bool(intervene),
        bad_states=n_bad,
        bad_state_frequency=n_bad / trials,
        shocked_histogram=tuple(int(c) for c in hist),
        failure_distribution=distribution,
        mean_bank_payoff=mean_payoff,
        expected_bank_payoff=expected_payoffs(params),
    )
