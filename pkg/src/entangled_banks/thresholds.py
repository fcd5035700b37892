"""Closed-form debt levels, insurance price and bad-state probability thresholds.

All thresholds are returned unclamped. A value above one means the
corresponding condition holds for every ``p``.
"""

from dataclasses import asdict, dataclass
from typing import Tuple

from .errors import DegenerateModelError, RestrictionError
from .exact import survival_mass
from .params import ModelParams, counterparty_upper_bound, validate_params


def _positive(value, what):
    if not value > 0:
        raise DegenerateModelError(f"{what} must be positive, got {value!r}")
    return value


def pledgable_return(params) -> float:
    """``R_H - B_1 + X``: the most a bank can promise to repay and still exert effort."""
    return params.R_H - params.B_1 + params.X


def max_debt(params, rate: float) -> float:
    """Largest face value borrowed at gross ``rate`` that can still be rolled over."""
    return pledgable_return(params) / rate


def contagious_rate(params) -> float:
    V = _positive(pledgable_return(params), "R_H - B_1 + X")
    return 1.0 / (1.0 - params.p * (1.0 - params.L / V))


def debt_levels(params) -> dict:
    """Debt capacity per unit of investment in each arrangement.

    Keys: ``D_max`` (evaluated at the contagious interest rate), ``D_safe``,
    ``D_star``, ``D_term``, ``D_r_aut``, ``D_s_aut`` and ``R_star``.
    """
    n, p = params.n, params.p
    R_H, R_L, L, X = params.R_H, params.R_L, params.L, params.X
    B_0, B_1, u, r = params.B_0, params.B_1, params.u, params.r
    V = _positive(pledgable_return(params), "R_H - B_1 + X")
    q = p / n

    R_star = contagious_rate(params)
    D_star = (1 - p) * V + p * L
    D_safe = (1 - q) * V + q * L
    D_term = (1 - q) * (X + R_H) - B_0 - B_1 + q * B_1 + q * R_L
    mass = float(survival_mass(r))
    D_r_aut = q * L + R_H - B_1 - q * R_H + q * B_1 + (1 - q) * X * mass
    D_s_aut = (1 - q) * (R_H - 2 * r * u) + q * L
    return {
        "D_max": max_debt(params, R_star),
        "D_safe": D_safe,
        "D_star": D_star,
        "D_term": D_term,
        "D_r_aut": D_r_aut,
        "D_s_aut": D_s_aut,
        "R_star": R_star,
    }


def s_safe(params) -> float:
    """Break-even price of one unit of default insurance when every bank insures."""
    return (1 - params.beta) / params.n + params.beta * params.p / params.n


def debt_reduction_I(params) -> float:
    """Equity injection that keeps a bank with ``r`` lost hedges solvent."""
    I = params.r * params.u + params.X - params.B_1
    if not I > 0:
        raise RestrictionError(f"debt reduction r*u + X - B_1 = {I!r} is not positive")
    return I


def _effort_margin(params) -> float:
    # R_H + X - L - B_1 (1 - beta); shared by most threshold denominators.
    return params.R_H + params.X - params.L - params.B_1 * (1 - params.beta)


def p_ind(params) -> float:
    """Bad-state probability above which a single bank privately wants insurance."""
    return debt_reduction_I(params) * (1 - params.beta) / (params.beta * params.B_1)


def p_soc(params) -> float:
    """Bad-state probability above which insuring everyone is socially worthwhile."""
    I = debt_reduction_I(params)
    denom = _positive((params.n - 1) * _effort_margin(params), "(n-1)(R_H+X-L-B_1(1-beta))")
    return 2 * I * params.r * (1 - params.beta) / denom


def p_term(params) -> float:
    n, beta = params.n, params.beta
    denom = _effort_margin(params) + (params.R_L + beta * params.B_1 - params.L) / (n - 1)
    _positive(denom, "short-term debt threshold denominator")
    return (1 - beta) * (n / (n - 1)) * params.B_0 / denom


def p_f_aut(params) -> float:
    n, beta = params.n, params.beta
    numer = (1 - beta) * (params.R_H + params.X - params.B_1 - params.R_L)
    denom = _effort_margin(params) - (beta / n) * (params.R_H - params.R_L)
    return numer / _positive(denom, "full-autarky threshold denominator")


def p_r_aut(params) -> float:
    n, beta, X = params.n, params.beta, params.X
    shortfall = 1 - float(survival_mass(params.r))
    denom = _effort_margin(params) - (n * beta - 1) * X / (n - 1) * shortfall
    _positive(denom, "risky-autarky threshold denominator")
    return (1 - beta) * (n / (n - 1)) * X * shortfall / denom


def p_s_aut(params) -> float:
    n, beta = params.n, params.beta
    exposure = 2 * params.r * params.u + params.X - params.B_1
    denom = (
        params.R_H + params.X - params.L - params.B_1 + beta * params.B_1
        + (1 - beta) / (n - 1) * exposure
    )
    _positive(denom, "safe-autarky threshold denominator")
    return (1 - beta) * (n / (n - 1)) * exposure / denom


def p_aut(params) -> float:
    return min(p_s_aut(params), p_r_aut(params), p_f_aut(params))


def p_star(params) -> float:
    """Upper end of the bad-state probabilities for which the equilibrium results hold."""
    return min(p_ind(params), p_aut(params), p_term(params))


def u_feasible_interval(params) -> Tuple[float, float]:
    """Open interval of shock sizes that are large enough to be contagious yet still hedged."""
    u_lo = params.B_1 - params.X
    u_hi = counterparty_upper_bound(params)
    if not u_hi > u_lo:
        raise DegenerateModelError(
            f"empty shock interval: upper bound {u_hi!r} does not exceed B_1 - X = {u_lo!r}"
        )
    return u_lo, u_hi


# Corollary forms for two counter-parties; kept separate from the general
# expressions so the two can be checked against each other.


def p_soc_two_neighbors(params) -> float:
    I = params.u + params.X - params.B_1
    return 2 * I * (1 - params.beta) / ((params.n - 1) * _effort_margin(params))


def p_r_aut_two_neighbors(params) -> float:
    n, beta, X = params.n, params.beta, params.X
    return (1 - beta) * n / (n - 1) * (X / 4) / (_effort_margin(params) - (n * beta - 1) / (n - 1) * (X / 4))


def p_s_aut_two_neighbors(params) -> float:
    n, beta, u, X, B_1 = params.n, params.beta, params.u, params.X, params.B_1
    denom = params.R_H + X - params.L - B_1 + beta * B_1 + (1 - beta) / (n - 1) * (X + 2 * u - B_1)
    return (1 - beta) * (n / (n - 1)) * (2 * u + X - B_1) / denom


def u_upper_two_neighbors(params) -> float:
    return params.B_1 / 2


@dataclass(frozen=True)
class ThresholdSet:
    D_max: float
    D_safe: float
    D_star: float
    D_term: float
    D_r_aut: float
    D_s_aut: float
    R_star: float
    s_safe: float
    I: float
    u_lo: float
    u_hi: float
    p_ind: float
    p_soc: float
    p_term: float
    p_f_aut: float
    p_r_aut: float
    p_s_aut: float
    p_aut: float
    p_star: float

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def above_one(self) -> Tuple[str, ...]:
        """Names of probability thresholds exceeding one (condition holds for every ``p``)."""
        return tuple(k for k, v in self.as_dict().items() if k.startswith("p_") and v > 1)


def compute_thresholds(params: ModelParams, *, check: bool = True) -> ThresholdSet:
    """Evaluate every closed form for ``params``.

    With ``check=True`` the restrictions must hold; sweeps pass ``check=False``
    to get numbers for points outside the admissible region.
    """
    if check:
        report = validate_params(params)
        if not report.passed:
            raise RestrictionError(f"restrictions violated: {report.summary()}", report)
    debts = debt_levels(params)
    u_lo, u_hi = u_feasible_interval(params)
    aut = dict(s=p_s_aut(params), r=p_r_aut(params), f=p_f_aut(params))
    pa = min(aut["s"], aut["r"], aut["f"])
    pi, pt = p_ind(params), p_term(params)
    return ThresholdSet(
        **debts,
        s_safe=s_safe(params),
        I=debt_reduction_I(params),
        u_lo=u_lo,
        u_hi=u_hi,
        p_ind=pi,
        p_soc=p_soc(params),
        p_term=pt,
        p_f_aut=aut["f"],
        p_r_aut=aut["r"],
        p_s_aut=aut["s"],
        p_aut=pa,
        p_star=min(pi, pa, pt),
    )
