"""Synthetic discrete sources with known entropy, and seeded sampling.

Three source families cover the regimes the estimators are benchmarked on:
uniform (worst case for coverage at small N), symmetric Dirichlet draws with
small concentration (heavy skew, long tails of tiny-mass symbols), and Zipf
power laws.  A source is drawn once from its own seed and then held fixed;
samples are multinomial draws with independently derived seeds, so any trial
can be reproduced in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import CountTable, TruePmf, entropy_kernel

__all__ = ["SOURCE_KINDS", "SourceSpec", "make_source", "true_entropy", "draw_sample"]

SOURCE_KINDS: tuple[str, ...] = ("uniform", "dirichlet", "zipf")

Seed = "int | Sequence[int] | np.random.SeedSequence"


@dataclass(frozen=True)
class SourceSpec:
    """Recipe for one synthetic source.

    kind: one of uniform | dirichlet | zipf.
    support_size: number of symbols S >= 2.
    alpha: Dirichlet concentration (dirichlet only, > 0).
    exponent: Zipf decay exponent (zipf only, defaults to 1.0).
    seed: pmf draw seed; only the dirichlet kind is actually random.
    name: optional label used in reports; defaults to kind plus parameter.
    """

    kind: str
    support_size: int
    alpha: float | None = None
    exponent: float | None = None
    seed: int = 0
    name: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in SOURCE_KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}: choose from {SOURCE_KINDS}")
        if self.support_size < 2:
            raise ValueError(f"support size must be >= 2, got {self.support_size}")
        if self.kind == "dirichlet":
            if self.alpha is None or self.alpha <= 0:
                raise ValueError("dirichlet sources need a concentration alpha > 0")
            if self.exponent is not None:
                raise ValueError("exponent is meaningless for a dirichlet source")
        elif self.kind == "zipf":
            if self.alpha is not None:
                raise ValueError("alpha is meaningless for a zipf source")
            if self.exponent is None:
                object.__setattr__(self, "exponent", 1.0)
            elif self.exponent <= 0:
                raise ValueError(f"zipf exponent must be > 0, got {self.exponent}")
        else:
            if self.alpha is not None or self.exponent is not None:
                raise ValueError("uniform sources take no shape parameter")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.kind == "dirichlet":
            return f"dirichlet-{self.alpha:g}"
        if self.kind == "zipf":
            return f"zipf-{self.exponent:g}"
        return "uniform"

    @property
    def shape_parameter(self) -> float | None:
        """The alpha or exponent, whichever the kind uses (None for uniform)."""
        return self.alpha if self.kind == "dirichlet" else self.exponent


def make_source(spec: SourceSpec) -> TruePmf:
    """Materialise the source pmf.  Deterministic in spec.seed."""
    s = spec.support_size
    if spec.kind == "uniform":
        probs = np.full(s, 1.0 / s)
    elif spec.kind == "dirichlet":
        rng = np.random.default_rng(spec.seed)
        gammas = rng.gamma(spec.alpha, 1.0, size=s)
        total = float(gammas.sum())
        if total <= 0.0:
            raise ValueError(
                f"all Gamma({spec.alpha}) draws underflowed to zero; "
                "alpha is too small to represent"
            )
        probs = gammas / total
    else:
        ranks = np.arange(1, s + 1, dtype=float)
        weights = ranks ** -float(spec.exponent)
        probs = weights / weights.sum()
    return TruePmf(probs)


def true_entropy(pmf: TruePmf) -> float:
    """Exact entropy of a known pmf, in nats."""
    return entropy_kernel(pmf.probs)


def draw_sample(pmf: TruePmf, n: int, seed) -> CountTable:
    """Draw an n-observation multinomial sample from the pmf.

    Args:
        pmf: source distribution over symbols 0..S-1.
        n: sample size >= 1.
        seed: anything numpy's default_rng accepts; composite seeds such as
            (base_seed, source_index, size_index, trial_index) give every
            trial its own independent, schedule-free stream.

    Returns:
        CountTable keyed by integer symbol index (unseen symbols absent).
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n, pmf.probs)
    nonzero = np.nonzero(counts)[0]
    return CountTable({int(i): int(counts[i]) for i in nonzero})
