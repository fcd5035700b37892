"""Bad-state thresholds, regimes and default cascades for banks hedging on a ring.

Each of ``n`` banks hedges its asset shocks with ``2r`` neighbours. The
package evaluates the closed-form debt levels and probability thresholds of
that economy, checks the combinatorial ones against brute-force enumeration,
and simulates rollover cascades and bad-state draws.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateModelError,
    EnumerationLimitError,
    ModelError,
    RestrictionError,
    StructuralError,
)
from .params import (
    ModelParams,
    ShockAssignment,
    ValidationReport,
    all_exposures,
    canonical_scenario,
    neighbors,
    sample_valid_params,
    shock_exposure,
    validate_params,
)
from .exact import (
    drift_sum,
    enumerate_unhedged_payoff,
    expected_unhedged_payoff,
    hedging_preferred,
    survival_mass,
    unhedged_failure_check,
)
from .thresholds import (
    ThresholdSet,
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
from .contagion import (
    MCReport,
    NetworkState,
    Regime,
    RegimeReport,
    cascade,
    classify_regime,
    draw_bad_state,
    monte_carlo,
    rollover_feasible,
    welfare_gains,
)
