"""Missing-mass and unseen-symbol estimation from sample profiles.

Two quantities about the unobserved part of a distribution are estimated here,
both functions of the profile alone.

Total mass per count class.  ``estimate_total_mass(profile, k)`` estimates the
combined probability of the symbols observed exactly k times, via the
alternating series

    m_k = -C(N, k) * sum_{i=1}^{N-k} (-1)^i * h_{k+i} / C(N, k+i)

whose k = 0 leading term is the familiar Good-Turing missing-mass estimate
h_1 / N.  The raw series value can fall outside [0, 1] (it is unbiased, not
bounded), so the returned estimate carries both the raw value and a clamped
copy.  When the count class is empty (h_k = 0 for k >= 1) the true m_k is an
empty sum, and the estimate is forced to zero.

Unseen-symbol count.  ``estimate_unseen_count`` is a smoothed Good-Toulmin
extrapolation: it predicts how many new symbols would appear if the sample
were amplified by a factor ``a``, damping the wildly oscillating terms with
Poisson(r) tail weights,

    U = sum_i s_i * h_i,
    s_i = -sum_{j=0}^{min(mu-1, i)} (-a)^i (-1)^j C(i, j) Pr(Poisson(r) >= i+j),

with r set by ``smoothing_parameter``.  For a <= 1 no smoothing is needed and
the r -> infinity limit is taken, where every tail weight equals 1; at a = 1,
mu = 1 the estimator is then exactly the alternating sum h_1 - h_2 + h_3 - ...

``lookup_amplification`` maps an estimated missing mass to the amplification
factor used by the partition entropy estimator: the emptier the sample looks,
the further the extrapolation has to reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Profile, log_binomial, log_poisson_tail

__all__ = [
    "MassEstimate",
    "UnseenEstimate",
    "DEFAULT_AMPLIFICATION_TABLE",
    "estimate_total_mass",
    "estimate_unseen_count",
    "smoothing_parameter",
    "lookup_amplification",
]

# (lower bound on estimated missing mass, amplification factor), scanned top
# down with left-closed intervals; the final row catches everything below 0.15.
DEFAULT_AMPLIFICATION_TABLE: tuple[tuple[float, float], ...] = (
    (0.8, 4.0e5),
    (0.7, 100.0),
    (0.55, 8.0),
    (0.4, 5.0),
    (0.3, 2.0),
    (0.15, 1.5),
    (0.0, 1.0),
)


@dataclass(frozen=True)
class MassEstimate:
    """Estimated total probability of the symbols seen exactly k times."""

    k: int
    raw: float
    clamped: float
    forced_zero: bool = False


@dataclass(frozen=True)
class UnseenEstimate:
    """Estimated number of distinct unseen symbols under amplification."""

    multiplicity: int
    amplification: float
    r: float
    raw: float
    clamped: float


def estimate_total_mass(profile: Profile, k: int) -> MassEstimate:
    """Estimate the total probability mass of the count-k symbol class.

    Args:
        profile: nonempty sample profile.
        k: count class, 0 <= k <= profile.n (k = 0 is the missing mass).

    Returns:
        MassEstimate with the raw series value and its [0, 1] clamp.  For
        k >= 1 with h_k = 0 the class is empty and the clamped estimate is
        forced to 0 regardless of the series value.

    Each series term is evaluated as one correctly-rounded division of exact
    integers, h_{k+i} * C(N, k) / C(N, k+i), and the signed terms are summed
    with compensated accuracy, so the result tracks a big-rational evaluation
    to near machine precision even when the ratios span many orders of
    magnitude.
    """
    n = profile.n
    if n == 0:
        raise ValueError("empty profile: nothing to estimate from")
    if k < 0 or k > n:
        raise ValueError(f"count class k={k} outside [0, {n}]")
    comb_nk = math.comb(n, k)
    terms = []
    for i, hi in profile.h.items():
        if i <= k:
            continue
        # series index is i - k; odd indices contribute positively after the
        # leading minus sign
        sign = 1.0 if (i - k) % 2 == 1 else -1.0
        try:
            magnitude = (hi * comb_nk) / math.comb(n, i)
        except OverflowError:
            magnitude = math.inf
        terms.append(sign * magnitude)
    raw = math.fsum(terms)
    forced = k >= 1 and profile.h.get(k, 0) == 0
    if forced:
        clamped = 0.0
    else:
        clamped = min(max(raw, 0.0), 1.0)
    return MassEstimate(k=k, raw=raw, clamped=clamped, forced_zero=forced)


def smoothing_parameter(n: int, amplification: float) -> float:
    """Poisson smoothing rate for an amplified-sample extrapolation.

    r = ln(n * (a+1)^2 / (a-1)) / (2a), floored at 0.  Defined for a > 1;
    the a <= 1 regime needs no smoothing (see estimate_unseen_count).
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    if amplification <= 1.0:
        raise ValueError(f"smoothing parameter undefined for amplification {amplification} <= 1")
    a = amplification
    r = math.log(n * (a + 1.0) ** 2 / (a - 1.0)) / (2.0 * a)
    return max(r, 0.0)


def _signed_tail_term(i: int, j: int, log_a: float, r: float) -> float:
    """One (i, j) contribution to s_i for a > 1, evaluated in log space.

    a^i alone overflows for the large amplifications in the lookup table while
    the Poisson tail underflows, so only their combined exponent is safe.
    """
    sign = -1.0 if (i + j) % 2 == 0 else 1.0
    log_mag = i * log_a + log_binomial(i, j) + log_poisson_tail(r, i + j)
    return sign * math.exp(log_mag)


def estimate_unseen_count(
    profile: Profile, amplification: float, multiplicity: int = 1
) -> UnseenEstimate:
    """Estimate the number of distinct symbols an amplified sample would add.

    Args:
        profile: sample profile (an empty profile contributes nothing).
        amplification: a > 0; how many times larger the hypothetical sample is.
        multiplicity: mu >= 1; symbols are counted once they would appear at
            least mu times (the partition estimator always uses mu = 1).

    Returns:
        UnseenEstimate; ``clamped`` is the raw value floored at 0.
    """
    if amplification <= 0.0:
        raise ValueError(f"amplification must be > 0, got {amplification}")
    if multiplicity < 1:
        raise ValueError(f"multiplicity must be >= 1, got {multiplicity}")
    a = amplification
    if not profile.h:
        r = math.inf if a <= 1.0 else smoothing_parameter(1, a)
        return UnseenEstimate(multiplicity, a, r, 0.0, 0.0)

    contributions = []
    if a <= 1.0:
        # r -> infinity limit: every Poisson tail weight is exactly 1.  Kept
        # in plain arithmetic so that a = 1, mu = 1 reproduces the alternating
        # sum h_1 - h_2 + h_3 - ... bit for bit.
        r = math.inf
        for i, hi in profile.h.items():
            s_i = 0.0
            for j in range(min(multiplicity - 1, i) + 1):
                s_i -= (-a) ** i * (-1.0) ** j * math.comb(i, j)
            contributions.append(s_i * hi)
    else:
        r = smoothing_parameter(profile.n, a)
        log_a = math.log(a)
        for i, hi in profile.h.items():
            s_i = math.fsum(
                _signed_tail_term(i, j, log_a, r)
                for j in range(min(multiplicity - 1, i) + 1)
            )
            contributions.append(s_i * hi)
    raw = math.fsum(contributions)
    return UnseenEstimate(multiplicity, a, r, raw, max(raw, 0.0))


def lookup_amplification(
    missing_mass: float,
    table: tuple[tuple[float, float], ...] = DEFAULT_AMPLIFICATION_TABLE,
) -> float:
    """Map an estimated missing mass in [0, 1] to an amplification factor.

    The table rows are (lower bound, factor) with strictly decreasing bounds;
    intervals are closed on the left, so a missing mass sitting exactly on a
    bound takes that row's factor.
    """
    if not 0.0 <= missing_mass <= 1.0:
        raise ValueError(f"missing mass {missing_mass} outside [0, 1]")
    if not table:
        raise ValueError("empty amplification table")
    previous = math.inf
    for bound, factor in table:
        if not bound < previous:
            raise ValueError("amplification table bounds must be strictly decreasing")
        previous = bound
        if missing_mass >= bound:
            return factor
    raise ValueError(f"amplification table does not cover missing mass {missing_mass}")
