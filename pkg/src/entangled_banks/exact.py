"""Exact binomial payoff sums and a brute-force enumerator over shock outcomes.

Everything that involves ``(2r)!`` is kept as :class:`fractions.Fraction`
until the very last step, so nothing overflows or loses bits for large ``r``.
The enumerator never touches a binomial coefficient: it walks every
``+u/-u`` sign vector and is meant to be used as an independent check on the
closed forms.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import EnumerationLimitError

ExactRational = Fraction

#: Largest ``r`` the enumerator accepts (``2**24`` outcomes).
ENUMERATION_CAP = 12


def _check_r(r):
    if int(r) != r or r < 1:
        raise ValueError(f"r must be a positive integer, got {r!r}")
    return int(r)


@lru_cache(maxsize=None)
def survival_mass(r) -> Fraction:
    """Probability that at most ``r`` of ``2r`` fair signs are negative.

    Written as ``(2r)!/2**(2r) * sum_K 1/(K!(2r-K)!)`` for ``K = 0..r``.
    """
    r = _check_r(r)
    f2r = factorial(2 * r)
    total = sum(Fraction(1, factorial(k) * factorial(2 * r - k)) for k in range(r + 1))
    return Fraction(f2r, 4**r) * total


@lru_cache(maxsize=None)
def drift_sum(r) -> Fraction:
    """``sum_K (2r-2K) / (K!(2r-K)!)`` for ``K = 0..r``."""
    r = _check_r(r)
    return sum(
        (Fraction(2 * r - 2 * k, factorial(k) * factorial(2 * r - k)) for k in range(r + 1)),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def hedging_bound_ratio(r) -> Fraction:
    """Largest ``u / B_1`` at which hedging every exposure is still strictly preferred.

    ``(4**r - sum_K C(2r, K)) / ((2r)! * drift_sum(r))``. At ``r = 1`` this is 1/2.
    """
    r = _check_r(r)
    numer = 4**r - sum(comb(2 * r, k) for k in range(r + 1))
    return Fraction(numer) / (factorial(2 * r) * drift_sum(r))


def literal(x) -> Fraction:
    """Exact value of the shortest decimal literal that round-trips to ``x``.

    Parameters are typed in as decimal literals, so ``literal(1.1) == 11/10``
    even though the binary64 value is slightly larger.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


def _exact(x) -> Fraction:
    return literal(x)


def expected_unhedged_payoff_exact(B_1, u, r) -> Fraction:
    r = _check_r(r)
    B_1, u = _exact(B_1), _exact(u)
    f2r = factorial(2 * r)
    total = sum(
        (B_1 + (2 * r - 2 * k) * u) / (factorial(k) * factorial(2 * r - k)) for k in range(r + 1)
    )
    return Fraction(f2r, 4**r) * total


def expected_unhedged_payoff(B_1, u, r) -> float:
    """Expected banker payoff when every shock exposure is left open.

    The bank survives whenever no more than ``r`` of its ``2r`` exposures go
    against it, and then collects ``B_1`` plus the net drift ``(2r-2K)u``.
    """
    if B_1 < 0 or u < 0:
        raise ValueError("B_1 and u must be non-negative")
    return float(expected_unhedged_payoff_exact(B_1, u, r))


_CHUNK = 1 << 18


@lru_cache(maxsize=None)
def _outcome_counts(r):
    """Walk every sign vector of length ``2r``; return (survivors, summed survivor drift).

    Sign vectors are the integers ``0 .. 4**r - 1``; a set bit is a ``-u`` draw.
    """
    m = 2 * r
    survivors = 0
    drift_total = 0
    for lo in range(0, 1 << m, _CHUNK):
        codes = np.arange(lo, min(lo + _CHUNK, 1 << m), dtype=np.int64)
        drift = np.zeros(codes.shape, dtype=np.int64)
        minus = np.zeros(codes.shape, dtype=np.int64)
        for j in range(m):
            bit = (codes >> j) & 1
            minus += bit
            drift += 1 - 2 * bit
        alive = minus <= r
        survivors += int(alive.sum())
        drift_total += int(drift[alive].sum())
    return survivors, drift_total


def _enumeration_r(r):
    r = _check_r(r)
    if r > ENUMERATION_CAP:
        raise EnumerationLimitError(f"r={r} exceeds enumeration cap {ENUMERATION_CAP}")
    return r


def enumerate_unhedged_payoff(B_1, u, r) -> float:
    """Brute-force mean of the unhedged payoff over all ``2**(2r)`` sign vectors.

    A vector pays ``B_1 + (net drift) * u`` when it has at most ``r`` negative
    entries and nothing otherwise.
    """
    r = _enumeration_r(r)
    survivors, drift_total = _outcome_counts(r)
    return (B_1 * survivors + u * drift_total) / (1 << (2 * r))


def enumerate_survival_mass(r) -> Fraction:
    """Fraction of sign vectors with at most ``r`` negative entries, by counting."""
    r = _enumeration_r(r)
    return Fraction(_outcome_counts(r)[0], 1 << (2 * r))


def hedging_preferred(params) -> bool:
    """True when hedging all exposures strictly beats leaving them open.

    The comparison is exact on the decimal literals of the inputs, so a tie
    resolves to ``False``.
    """
    B_1 = literal(params.B_1)
    return B_1 > expected_unhedged_payoff_exact(B_1, params.u, params.r)


def unhedged_failure_check(params) -> bool:
    """True when one open ``-u`` exposure already leaves the bank unable to repay."""
    return literal(params.u) > literal(params.B_1) - literal(params.X)
