"""Shared primitives for discrete entropy estimation.

Count tables map opaque symbols to observation counts; profiles collapse a
table to its frequency-of-frequencies form (how many symbols were seen exactly
i times), which is all the estimators in this package ever look at.  Entropies
are natural-log throughout; use :func:`nats_to_bits` at the presentation layer.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping

import numpy as np
from scipy.special import gammainc, gammaln

__all__ = [
    "CountTable",
    "Profile",
    "TruePmf",
    "TermBreakdown",
    "EntropyEstimate",
    "build_profile",
    "entropy_kernel",
    "log_binomial",
    "poisson_tail",
    "log_poisson_tail",
    "nats_to_bits",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class CountTable:
    """Multiset of observations: symbol -> count, plus the sample size.

    Counts are strictly positive; symbols never observed simply do not
    appear.  `total` is filled in automatically.
    """

    counts: Mapping[Hashable, int]
    total: int = field(init=False)

    def __post_init__(self) -> None:
        n = 0
        for symbol, count in self.counts.items():
            if not isinstance(count, (int, np.integer)) or isinstance(count, bool):
                raise ValueError(f"count for {symbol!r} is not an integer: {count!r}")
            if count < 1:
                raise ValueError(f"count for {symbol!r} must be >= 1, got {count}")
            n += int(count)
        object.__setattr__(self, "counts", dict(self.counts))
        object.__setattr__(self, "total", n)

    @classmethod
    def from_counts(cls, counts: Mapping[Hashable, int]) -> "CountTable":
        """Build a table from a symbol -> count mapping, dropping zero entries."""
        return cls({s: int(c) for s, c in counts.items() if c != 0})

    @classmethod
    def from_tokens(cls, tokens: Iterable[Hashable]) -> "CountTable":
        """Build a table by counting a token stream."""
        return cls(dict(Counter(tokens)))

    @property
    def distinct(self) -> int:
        return len(self.counts)

    def values_array(self) -> np.ndarray:
        """Counts as an integer vector (symbol identity discarded)."""
        return np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))


@dataclass(frozen=True)
class Profile:
    """Frequency of frequencies: h[i] = number of symbols observed exactly i times.

    Only nonzero entries are stored.  `n` is the sample size and must equal
    sum(i * h[i]); the empty profile (no observations) is representable but is
    rejected by anything that estimates from it.
    """

    h: Mapping[int, int]
    n: int

    def __post_init__(self) -> None:
        total = 0
        for i, hi in self.h.items():
            if i < 1 or hi < 1:
                raise ValueError(f"profile entry h[{i}] = {hi} is invalid")
            total += i * hi
        if total != self.n:
            raise ValueError(f"profile inconsistent: sum(i * h_i) = {total} != n = {self.n}")
        object.__setattr__(self, "h", dict(self.h))

    @property
    def distinct(self) -> int:
        return sum(self.h.values())

    @property
    def max_count(self) -> int:
        return max(self.h) if self.h else 0


def build_profile(table: CountTable) -> Profile:
    """Collapse a count table to its profile.

    Args:
        table: nonempty count table.

    Returns:
        Profile with sum(i * h_i) equal to the sample size.

    Raises:
        ValueError: if the table is empty.
    """
    if table.total == 0:
        raise ValueError("empty sample: cannot build a profile from no observations")
    return Profile(dict(Counter(table.counts.values())), table.total)


def entropy_kernel(probs: Iterable[float]) -> float:
    """Shannon entropy of a probability vector, in nats.

    Implements -sum(p * ln p) with the usual 0 * ln 0 = 0 convention, so
    zero entries are simply skipped.  The vector is not required to be
    normalised; callers own that invariant.

    Parameters
    ----------
    probs : array_like
        Probabilities, each in [0, 1].

    Returns
    -------
    float
        Entropy in nats (>= 0 for any sub-probability vector).

    Raises
    ------
    ValueError
        If any entry is negative.
    """
    p = np.asarray(probs, dtype=float)
    if p.size == 0:
        return 0.0
    if np.min(p) < 0.0:
        raise ValueError(f"negative probability entry: {np.min(p)}")
    nz = p[p > 0.0]
    if nz.size == 0:
        return 0.0
    # + 0.0 normalises the -0.0 produced when the vector is a point mass
    return float(-np.sum(nz * np.log(nz))) + 0.0


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) via log-gamma; exact enough for ratios of huge coefficients."""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"log_binomial undefined for n={n}, k={k}")
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def log_poisson_tail(rate: float, i: int) -> float:
    """ln Pr(Poisson(rate) >= i), stable far into the underflowing tail.

    For rate close to or above i the tail is order one and the regularised
    lower incomplete gamma identity Pr(Poisson(r) >= i) = P(i, r) is used
    directly.  Deep in the tail (rate << i) that identity underflows, so the
    pmf series is summed in log space instead:

        Pr(>= i) = e^-r * r^i / i! * (1 + r/(i+1) + r^2/((i+1)(i+2)) + ...)
    """
    if rate < 0:
        raise ValueError(f"Poisson rate must be >= 0, got {rate}")
    if i < 0:
        raise ValueError(f"tail index must be >= 0, got {i}")
    if i == 0:
        return 0.0
    if rate == 0.0:
        return -math.inf
    if rate >= 0.9 * i:
        return math.log(float(gammainc(i, rate)))
    # series branch: term ratio is rate/(i+m) <= 0.9, so convergence is fast
    series = 1.0
    term = 1.0
    m = 1
    while True:
        term *= rate / (i + m)
        series += term
        if term < series * 1e-18 or m > 1000:
            break
        m += 1
    return -rate + i * math.log(rate) - math.lgamma(i + 1) + math.log(series)


def poisson_tail(rate: float, i: int) -> float:
    """Pr(Poisson(rate) >= i).  See log_poisson_tail for the evaluation strategy."""
    if rate < 0:
        raise ValueError(f"Poisson rate must be >= 0, got {rate}")
    if i < 0:
        raise ValueError(f"tail index must be >= 0, got {i}")
    if i == 0:
        return 1.0
    if rate == 0.0:
        return 0.0
    if rate >= 0.9 * i:
        return float(gammainc(i, rate))
    return math.exp(log_poisson_tail(rate, i))


def nats_to_bits(value: float) -> float:
    """Convert an entropy from nats to bits."""
    return value / LN2


@dataclass(frozen=True)
class TruePmf:
    """A known source distribution over symbols 0..support_size-1."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float).copy()
        if p.ndim != 1 or p.size == 0:
            raise ValueError("pmf must be a nonempty 1-d vector")
        if np.min(p) < 0.0:
            raise ValueError(f"pmf has a negative entry: {np.min(p)}")
        if abs(float(np.sum(p)) - 1.0) > 1e-12:
            raise ValueError(f"pmf sums to {float(np.sum(p))!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def support_size(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True)
class TermBreakdown:
    """Additive decomposition of the partition estimator, in nats.

    subset_split: entropy of the (unseen, rare, frequent) probability split
    unseen:       unseen-subset share times its log unseen-symbol count
    rare:         rare-subset share times log |rare subset|
    frequent:     frequent-subset share times the within-subset corrected entropy
    """

    subset_split: float
    unseen: float
    rare: float
    frequent: float

    def total(self) -> float:
        return self.subset_split + self.unseen + self.rare + self.frequent


@dataclass(frozen=True)
class EntropyEstimate:
    """An entropy estimate in nats, with optional term breakdown and diagnostics."""

    value: float
    terms: TermBreakdown | None = None
    diagnostics: dict[str, Any] | None = None
