"""Model parameters, the circulant counter-party ring, and restriction checks."""

from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .errors import ModelError, StructuralError
from .exact import hedging_bound_ratio, literal

MONEY_FIELDS = ("R_H", "R_L", "L", "X", "B_0", "B_1", "u")


@dataclass(frozen=True)
class ModelParams:
    """Parameter vector of the symmetric ``n``-bank economy.

    Each bank is linked to its ``r`` nearest neighbours on either side of a
    ring, so it has ``2r`` counter-parties.
    """

    n: int
    r: int
    R_H: float
    R_L: float
    L: float
    X: float
    B_0: float
    B_1: float
    u: float
    beta: float
    p: float

    def __post_init__(self):
        for name in ("n", "r"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise StructuralError(name, f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        for f in fields(self):
            if f.name not in ("n", "r"):
                value = float(getattr(self, f.name))
                if not np.isfinite(value):
                    raise StructuralError(f.name, f"{f.name} must be finite, got {value!r}")
                object.__setattr__(self, f.name, value)

        if self.n <= 3:
            raise StructuralError("n", f"n must exceed 3, got {self.n}")
        if self.r < 1:
            raise StructuralError("r", f"r must be at least 1, got {self.r}")
        if 2 * self.r > self.n - 1:
            raise StructuralError(
                "r", f"2r = {2 * self.r} exceeds n - 1 = {self.n - 1}; neighbours would repeat"
            )
        for name in MONEY_FIELDS:
            if getattr(self, name) < 0:
                raise StructuralError(name, f"{name} must be non-negative")
        if not self.R_L < self.R_H:
            raise StructuralError("R_L", "R_L must be below R_H")
        if not 0 < self.beta < 1:
            raise StructuralError("beta", f"beta must lie in (0, 1), got {self.beta}")
        if not 0 <= self.p <= 1:
            raise StructuralError("p", f"p must lie in [0, 1], got {self.p}")

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def degree(self) -> int:
        return 2 * self.r


def canonical_scenario() -> ModelParams:
    """A small desk-scale economy that satisfies every restriction."""
    return ModelParams(
        n=8, r=1, R_H=1.1, R_L=0.0, L=0.5, X=0.2,
        B_0=0.25, B_1=0.3, u=0.12, beta=0.9, p=0.005,
    )


# -- restrictions --------------------------------------------------------------


@dataclass(frozen=True)
class RestrictionCheck:
    number: int
    name: str
    passed: bool
    lhs: float
    rhs: float
    relation: str

    def describe(self) -> str:
        verdict = "ok" if self.passed else "FAILED"
        return f"[{self.number}] {self.name}: {self.lhs:.6g} {self.relation} {self.rhs:.6g} {verdict}"


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[RestrictionCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[RestrictionCheck]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, number) -> RestrictionCheck:
        for c in self.checks:
            if c.number == number:
                return c
        raise KeyError(number)

    def summary(self) -> str:
        if self.passed:
            return "ok"
        return ";".join(f"fail:{c.number}:{c.name}" for c in self.failures)


def counterparty_upper_bound(params) -> float:
    """Largest shock size at which banks still hedge every asset exposure."""
    return float(literal(params.B_1) * hedging_bound_ratio(params.r))


def _check(number, name, lhs, rhs, relation):
    ok = {"<": lhs < rhs, "<=": lhs <= rhs, ">": lhs > rhs, ">=": lhs >= rhs}[relation]
    return RestrictionCheck(number, name, bool(ok), float(lhs), float(rhs), relation)


def _chain(number, name, low, mid, high, low_rel="<", high_rel="<"):
    # low < mid < high; report whichever link breaks, else the upper one.
    first = _check(number, name, low, mid, low_rel)
    if not first.passed:
        return first
    return _check(number, name, mid, high, high_rel)


def validate_params(params: ModelParams) -> ValidationReport:
    """Evaluate the six model restrictions.

    Structural problems are raised by :class:`ModelParams` itself before any
    of this runs. Comparisons are exact, without tolerance, on the decimal
    literals of the inputs (see :func:`~entangled_banks.exact.literal`), so a
    parameter set placed exactly on a non-strict boundary passes.
    """
    n = params.n
    p, R_H, R_L, L, X, B_0, B_1, u, beta = (
        literal(getattr(params, k)) for k in ("p", "R_H", "R_L", "L", "X", "B_0", "B_1", "u", "beta")
    )
    q = p / n

    rollover = _chain(1, "rollover", R_L, L, (1 - q) * (R_H + X) - B_1)
    effort = _check(2, "effort", R_H - R_L, 2 * B_1 / (1 - q), ">")
    equity = _check(3, "equity", B_1, R_H - 1 + X, ">=")
    counterparty = _chain(
        4, "counterparty_risk", B_1 - X, u, B_1 * hedging_bound_ratio(params.r)
    )

    numer = 1 - (1 - p) * (R_H + X - B_1) - p * L
    denom = (1 - p) * B_1
    if denom > 0:
        discount = _check(5, "discount", beta, max(Fraction(1, 2), numer / denom), ">")
    else:
        # (1 - p) B_1 == 0: the second bound is +inf unless its numerator is negative.
        floor = Fraction(1, 2) if numer < 0 else None
        if floor is None:
            discount = RestrictionCheck(5, "discount", False, float(beta), float("inf"), ">")
        else:
            discount = _check(5, "discount", beta, floor, ">")

    benefit = _chain(6, "private_benefit", 2 * u, B_0, (1 - p) * B_1, low_rel="<=")

    return ValidationReport((rollover, effort, equity, counterparty, discount, benefit))


# -- topology and shocks ------------------------------------------------------


def ring_neighbors(i: int, n: int, r: int) -> List[int]:
    if not 0 <= i < n:
        raise IndexError(f"bank index {i} outside 0..{n - 1}")
    return [(i - k) % n for k in range(r, 0, -1)] + [(i + k) % n for k in range(1, r + 1)]


def neighbors(i: int, params) -> List[int]:
    """Counter-parties of bank ``i``: ``i-r, ..., i-1, i+1, ..., i+r`` modulo ``n``."""
    return ring_neighbors(i, params.n, params.r)


def adjacency(params) -> np.ndarray:
    """Boolean ``n x n`` adjacency matrix of the counter-party ring."""
    n, r = params.n, params.r
    a = np.zeros((n, n), dtype=bool)
    idx = np.arange(n)
    for k in range(1, r + 1):
        a[idx, (idx + k) % n] = True
        a[idx, (idx - k) % n] = True
    return a


@dataclass(frozen=True)
class ShockAssignment:
    """One realised ``+u``/``-u`` draw per bank index."""

    values: np.ndarray
    u: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("shock values must be one-dimensional")
        if not np.all(np.abs(values) == self.u):
            raise ValueError("every shock must have magnitude exactly u")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_signs(cls, signs, u: float) -> "ShockAssignment":
        signs = np.asarray(signs)
        if not np.all(np.isin(signs, (-1, 1))):
            raise ValueError("signs must be +1 or -1")
        return cls(signs * float(u), float(u))

    @classmethod
    def uniform(cls, n: int, u: float) -> "ShockAssignment":
        return cls(np.full(n, float(u)), float(u))

    def __len__(self):
        return len(self.values)


def _check_assignment(shocks, params):
    if len(shocks) != params.n:
        raise ValueError(f"shock assignment has {len(shocks)} entries, expected n={params.n}")


def shock_exposure(i: int, shocks: ShockAssignment, params) -> float:
    """Net exposure of bank ``i`` to the realised shocks.

    The shocks of banks ``i-1 .. i-r`` enter with a plus sign and those of
    ``i-r-1 .. i-2r`` with a minus sign (indices modulo ``n``).
    """
    n, r = params.n, params.r
    if not 0 <= i < n:
        raise IndexError(f"bank index {i} outside 0..{n - 1}")
    _check_assignment(shocks, params)
    eps = shocks.values
    plus = sum(eps[(i - k) % n] for k in range(1, r + 1))
    minus = sum(eps[(i - k) % n] for k in range(r + 1, 2 * r + 1))
    return float(plus - minus)


def all_exposures(shocks: ShockAssignment, params) -> np.ndarray:
    """Vector of :func:`shock_exposure` for every bank."""
    _check_assignment(shocks, params)
    eps = shocks.values
    out = np.zeros(params.n)
    for k in range(1, params.r + 1):
        out += np.roll(eps, k)
    for k in range(params.r + 1, 2 * params.r + 1):
        out -= np.roll(eps, k)
    return out


# -- sampling ------------------------------------------------------------------


def _between(rng, lo, hi):
    lo = max(lo, 0.0)
    if not lo < hi:
        return None
    return float(rng.uniform(lo, hi))


def sample_valid_params(
    rng: np.random.Generator,
    n: Optional[int] = None,
    r: Optional[int] = None,
    *,
    n_range=(4, 16),
    r_range=(1, 6),
    p_max=0.05,
    contagious_only=False,
    require_closed_forms=True,
    max_tries=100_000,
) -> ModelParams:
    """Rejection-sample a parameter set that passes every restriction.

    ``contagious_only`` restricts the draw to topologies with ``4r < n``.
    With ``require_closed_forms`` the draw must also keep every threshold
    denominator positive.
    """
    for _ in range(max_tries):
        n_ = n if n is not None else int(rng.integers(n_range[0], n_range[1] + 1))
        r_max = (n_ - 1) // 2
        if contagious_only:
            r_max = min(r_max, (n_ - 1) // 4)
        r_max = min(r_max, r_range[1])
        if r is not None:
            r_ = r
        elif r_max < r_range[0]:
            continue
        else:
            r_ = int(rng.integers(r_range[0], r_max + 1))
        if 2 * r_ > n_ - 1 or (contagious_only and 4 * r_ >= n_):
            continue

        beta = float(rng.uniform(0.5, 1.0))
        p = float(rng.uniform(0.0, p_max))
        B_1 = float(rng.uniform(0.05, 0.45))
        u_cap = min(float(hedging_bound_ratio(r_)), 0.5) * B_1
        X = _between(rng, B_1 - u_cap, B_1 + 0.1)
        u = _between(rng, B_1 - X, u_cap) if X is not None else None
        if u is None:
            continue
        # Keep R_H + X - B_1 close to one so the discount restriction is easy to meet.
        R_H = 1 + B_1 - X - float(rng.uniform(0.0, 0.1))
        R_L = _between(rng, 0.0, R_H - 2.05 * B_1)
        if R_L is None:
            continue
        L = _between(rng, R_L, (1 - p / n_) * (R_H + X) - B_1)
        B_0 = _between(rng, 2 * u, (1 - p) * B_1)
        if L is None or B_0 is None:
            continue
        try:
            params = ModelParams(n_, r_, R_H, R_L, L, X, B_0, B_1, u, beta, p)
        except StructuralError:
            continue
        if not validate_params(params).passed:
            continue
        if require_closed_forms:
            from .thresholds import compute_thresholds

            try:
                compute_thresholds(params)
            except ModelError:
                continue
        return params
    raise RuntimeError("no valid parameter set found; widen the sampling ranges")
