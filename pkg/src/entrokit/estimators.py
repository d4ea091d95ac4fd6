"""Discrete Shannon entropy estimators over count tables.

Four classical baselines (plug-in, Miller-Madow, Chao-Shen, James-Stein
shrinkage) plus this package's partition estimator, which splits the support
into unseen / rare / frequent subsets by observed count, estimates each
subset's probability share from the profile, and decomposes the entropy as

    H = H(split) + P_unseen * H(X | unseen) + P_rare * H(X | rare)
      + P_frequent * H(X | frequent)

with the unseen conditional entropy taken as the log of an extrapolated
unseen-symbol count, the rare conditional entropy as log of the rare-subset
size (rare symbols look exchangeable at low counts), and the frequent
conditional entropy as a bias-corrected plug-in on the frequent counts.

All estimators accept a CountTable and return nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    CountTable,
    EntropyEstimate,
    Profile,
    TermBreakdown,
    build_profile,
    entropy_kernel,
)
from .unseen import (
    DEFAULT_AMPLIFICATION_TABLE,
    MassEstimate,
    estimate_total_mass,
    estimate_unseen_count,
    lookup_amplification,
)

__all__ = [
    "ESTIMATOR_NAMES",
    "EstimatorConfig",
    "PartitionSummary",
    "plug_in",
    "miller_madow",
    "chao_shen",
    "shrinkage",
    "partition_counts",
    "conditional_mm_s3",
    "proposed_entropy",
    "estimate_by_name",
]

ESTIMATOR_NAMES: tuple[str, ...] = (
    "plug_in",
    "miller_madow",
    "chao_shen",
    "shrinkage",
    "proposed",
)


@dataclass(frozen=True)
class EstimatorConfig:
    """Tunables of the partition estimator.

    lam: largest count still treated as rare (the rare/frequent boundary).
    amplification_table: missing-mass -> amplification lookup rows.
    multiplicity: appearance threshold in the unseen-count extrapolation;
        the partition estimator itself always runs with 1.
    """

    lam: int = 3
    amplification_table: tuple[tuple[float, float], ...] = DEFAULT_AMPLIFICATION_TABLE
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.lam < 1:
            raise ValueError(f"rarity threshold must be >= 1, got {self.lam}")
        if self.multiplicity < 1:
            raise ValueError(f"multiplicity must be >= 1, got {self.multiplicity}")


@dataclass(frozen=True)
class PartitionSummary:
    """Support partition of a sample at rarity threshold lam.

    Subset probabilities are the normalised missing-mass estimates: p_unseen
    for the unobserved symbols, p_rare for symbols with count in [1, lam],
    p_frequent for counts above lam.  `masses` holds the per-count-class
    estimates m_0..m_lam the probabilities were derived from, pre-normalisation.
    """

    lam: int
    s2_size: int
    s3_size: int
    n_s3: int
    s3_counts: tuple[int, ...]
    p_s1: float
    p_s2: float
    p_s3: float
    masses: tuple[MassEstimate, ...] = field(repr=False)


def _require_sample(table: CountTable) -> None:
    if table.total == 0:
        raise ValueError("empty sample: no observations to estimate from")


def plug_in(table: CountTable) -> EntropyEstimate:
    """Maximum-likelihood estimate: entropy of the empirical distribution."""
    _require_sample(table)
    probs = table.values_array() / table.total
    return EntropyEstimate(entropy_kernel(probs))


def miller_madow(table: CountTable) -> EntropyEstimate:
    """Plug-in estimate plus the (K - 1) / 2N first-order bias correction."""
    _require_sample(table)
    correction = (table.distinct - 1) / (2.0 * table.total)
    return EntropyEstimate(plug_in(table).value + correction)


def chao_shen(table: CountTable) -> EntropyEstimate:
    """Coverage-adjusted Horvitz-Thompson estimate.

    Empirical probabilities are deflated by the Good-Turing sample coverage
    C = 1 - h_1/N, then each term is inflated by the inclusion probability
    1 - (1 - C p_i)^N of having seen the symbol at all.  When every symbol is
    a singleton the coverage collapses to 0 and the estimate degenerates; the
    guarded coverage C = 1 - h_1/(N + 1) is used instead and flagged in the
    diagnostics.
    """
    _require_sample(table)
    n = table.total
    counts = table.values_array()
    singletons = int(np.count_nonzero(counts == 1))
    coverage = 1.0 - singletons / n
    fallback = coverage == 0.0
    if fallback:
        coverage = 1.0 - singletons / (n + 1.0)
    adjusted = coverage * counts / n
    # 1 - (1 - p)^n via expm1 keeps the inclusion probability accurate for
    # rare symbols in large samples; p = 1 legitimately hits log1p(-1) = -inf
    with np.errstate(divide="ignore"):
        inclusion = -np.expm1(n * np.log1p(-adjusted))
    value = float(np.sum(-adjusted * np.log(adjusted) / inclusion)) + 0.0
    return EntropyEstimate(
        value, diagnostics={"coverage": coverage, "coverage_fallback": fallback}
    )


def shrinkage(table: CountTable, support_size: int) -> EntropyEstimate:
    """James-Stein shrinkage toward the uniform distribution on a known support.

    The cell probabilities q_i = w/S + (1 - w) p_i use the closed-form weight

        w = (1 - sum p_i^2) / ((N - 1) * sum (1/S - p_i)^2)

    clamped to [0, 1] and taken over all S cells, unobserved ones included.
    A single-observation sample forces w = 1 (the empirical vector carries no
    information); an exactly-uniform empirical vector has a vanishing
    denominator and also yields the uniform answer.

    Args:
        table: nonempty count table with at most support_size distinct symbols.
        support_size: known support size S >= 2.

    Raises:
        ValueError: if S < 2 or S is smaller than the number of distinct
            symbols observed.
    """
    _require_sample(table)
    k = table.distinct
    if support_size < 2:
        raise ValueError(f"support size must be >= 2, got {support_size}")
    if support_size < k:
        raise ValueError(
            f"support size {support_size} smaller than {k} distinct observed symbols"
        )
    n = table.total
    s = support_size
    target = 1.0 / s
    p_hat = table.values_array() / n
    if n == 1:
        weight = 1.0
    else:
        numerator = 1.0 - float(np.sum(p_hat**2))
        denominator = (n - 1.0) * (
            float(np.sum((target - p_hat) ** 2)) + (s - k) * target**2
        )
        weight = 1.0 if denominator <= 0.0 else min(max(numerator / denominator, 0.0), 1.0)
    q_observed = weight * target + (1.0 - weight) * p_hat
    q_empty = weight * target
    value = entropy_kernel(q_observed)
    if q_empty > 0.0 and s > k:
        value += -(s - k) * q_empty * math.log(q_empty)
    return EntropyEstimate(value, diagnostics={"shrinkage_weight": weight, "support": s})


def partition_counts(table: CountTable, lam: int = 3) -> PartitionSummary:
    """Partition the support by observed count and estimate subset probabilities.

    Count classes 1..lam supply the rare subset's mass, class 0 the unseen
    subset's, and the frequent subset receives the remainder.  Per-class mass
    estimates are clamped to [0, 1] before combination; then two normalisation
    rules keep the triple a distribution over subsets that can actually be
    nonempty: if the unseen and rare shares exceed 1 together they are scaled
    back proportionally and the frequent share is 0, and if no symbol was seen
    more than lam times any leftover share is folded back proportionally onto
    the other two (all of it onto the rare subset when both estimates are 0,
    since the rare subset is the only one known to be nonempty).
    """
    _require_sample(table)
    if lam < 1:
        raise ValueError(f"rarity threshold must be >= 1, got {lam}")
    profile = build_profile(table)
    n = table.total
    s2_size = sum(hi for i, hi in profile.h.items() if i <= lam)
    s3_counts = tuple(sorted(int(c) for c in table.counts.values() if c > lam))
    s3_size = len(s3_counts)
    n_s3 = sum(s3_counts)

    masses = []
    for k in range(lam + 1):
        if k > n:
            # count classes above the sample size are empty by construction
            masses.append(MassEstimate(k=k, raw=0.0, clamped=0.0, forced_zero=True))
        else:
            masses.append(estimate_total_mass(profile, k))
    p1 = masses[0].clamped
    p2 = math.fsum(m.clamped for m in masses[1:])
    if p1 + p2 > 1.0:
        total = p1 + p2
        p1, p2, p3 = p1 / total, p2 / total, 0.0
    else:
        p3 = 1.0 - (p1 + p2)
    if s3_size == 0 and p3 > 0.0:
        total = p1 + p2
        if total > 0.0:
            scale = 1.0 + p3 / total
            p1, p2 = p1 * scale, p2 * scale
        else:
            p2 = 1.0
        p3 = 0.0
    return PartitionSummary(
        lam=lam,
        s2_size=s2_size,
        s3_size=s3_size,
        n_s3=n_s3,
        s3_counts=s3_counts,
        p_s1=p1,
        p_s2=p2,
        p_s3=p3,
        masses=tuple(masses),
    )


def conditional_mm_s3(summary: PartitionSummary) -> float:
    """Bias-corrected entropy of the frequent subset, conditioned on membership.

    Plug-in entropy of the frequent counts renormalised to their own total,
    plus the Miller-Madow correction (|S3| - 1) / (2 n_S3).
    """
    if summary.s3_size == 0:
        raise ValueError("frequent subset is empty")
    probs = np.asarray(summary.s3_counts, dtype=float) / summary.n_s3
    return entropy_kernel(probs) + (summary.s3_size - 1) / (2.0 * summary.n_s3)


def proposed_entropy(
    table: CountTable, config: EstimatorConfig | None = None
) -> EntropyEstimate:
    """Partition estimator: decompose the entropy over unseen/rare/frequent subsets.

    The subset split and its probabilities come from partition_counts; the
    unseen conditional entropy is log of the extrapolated unseen-symbol count
    (floored at one symbol, so it is never negative), using an amplification
    factor looked up from the estimated missing mass; the rare conditional
    entropy is log of the rare-subset size; the frequent conditional entropy
    is the corrected plug-in of conditional_mm_s3.  Terms whose subset is
    empty or has zero estimated probability contribute exactly 0.

    Returns:
        EntropyEstimate whose value is the exact sum of the four terms in
        ``terms`` and whose diagnostics record the amplification, smoothing
        rate, per-class masses (raw and clamped), unseen count, and subset
        sizes.
    """
    config = config or EstimatorConfig()
    summary = partition_counts(table, config.lam)
    profile = build_profile(table)
    missing_mass = summary.masses[0].clamped
    amplification = lookup_amplification(missing_mass, config.amplification_table)
    unseen = estimate_unseen_count(profile, amplification, config.multiplicity)

    term_split = entropy_kernel([summary.p_s1, summary.p_s2, summary.p_s3])
    term_unseen = 0.0
    if summary.p_s1 > 0.0:
        term_unseen = summary.p_s1 * math.log(max(unseen.clamped, 1.0))
    term_rare = 0.0
    if summary.p_s2 > 0.0 and summary.s2_size > 0:
        term_rare = summary.p_s2 * math.log(summary.s2_size)
    term_frequent = 0.0
    if summary.p_s3 > 0.0 and summary.s3_size > 0:
        term_frequent = summary.p_s3 * conditional_mm_s3(summary)

    terms = TermBreakdown(
        subset_split=term_split,
        unseen=term_unseen,
        rare=term_rare,
        frequent=term_frequent,
    )
    diagnostics = {
        "lam": summary.lam,
        "amplification": amplification,
        "smoothing_r": unseen.r,
        "unseen_count_raw": unseen.raw,
        "unseen_count": unseen.clamped,
        "mass_raw": tuple(m.raw for m in summary.masses),
        "mass_clamped": tuple(m.clamped for m in summary.masses),
        "p_unseen": summary.p_s1,
        "p_rare": summary.p_s2,
        "p_frequent": summary.p_s3,
        "rare_size": summary.s2_size,
        "frequent_size": summary.s3_size,
    }
    return EntropyEstimate(terms.total(), terms=terms, diagnostics=diagnostics)


def estimate_by_name(
    name: str,
    table: CountTable,
    config: EstimatorConfig | None = None,
    support_size: int | None = None,
) -> EntropyEstimate:
    """Dispatch an estimator by its registry name.

    shrinkage is the only estimator that needs the true support size; asking
    for it without one raises ValueError.
    """
    if name == "plug_in":
        return plug_in(table)
    if name == "miller_madow":
        return miller_madow(table)
    if name == "chao_shen":
        return chao_shen(table)
    if name == "shrinkage":
        if support_size is None:
            raise ValueError("shrinkage requires the support size")
        return shrinkage(table, support_size)
    if name == "proposed":
        return proposed_entropy(table, config)
    raise ValueError(f"unknown estimator {name!r}: choose from {ESTIMATOR_NAMES}")
