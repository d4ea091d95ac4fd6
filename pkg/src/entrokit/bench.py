"""Monte-Carlo benchmark harness for the entropy estimators.

A grid is (sources x sample sizes x estimators) evaluated over a number of
trials.  Each source pmf is drawn once from its own seed and held fixed across
the whole grid; each trial draws one sample that every estimator sees (paired
design, so estimator differences are not confounded by sampling noise).
Per-trial seeds are derived from (base_seed, source index, size index, trial
index), which makes every cell reproducible in isolation and the aggregate
results independent of scheduling: running with 1 worker or many yields
byte-identical output files.

Results aggregate to mean, bias, RMSE, and variance per cell, written as CSV
(schema below) and optionally as per-(source, metric) whitespace tables for
gnuplot.  Rendering of figures lives in `figures`; this module only emits data.

CSV schema:
    source,alpha_or_exponent,support,true_entropy_nats,n,estimator,trials,
    mean,bias,rmse,variance
"""

from __future__ import annotations

import configparser
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .core import TruePmf
from .datagen import SourceSpec, draw_sample, make_source, true_entropy
from .estimators import ESTIMATOR_NAMES, EstimatorConfig, estimate_by_name

__all__ = [
    "ExperimentGrid",
    "CellStats",
    "TrialFailure",
    "ExperimentResult",
    "ConfigError",
    "aggregate",
    "run_grid",
    "write_results",
    "write_gnuplot",
    "parse_config",
    "format_summary",
]

CSV_HEADER = (
    "source,alpha_or_exponent,support,true_entropy_nats,n,estimator,trials,"
    "mean,bias,rmse,variance"
)


class ConfigError(ValueError):
    """Malformed benchmark config; the message names the offending location."""


@dataclass(frozen=True)
class ExperimentGrid:
    """Full specification of one benchmark run."""

    sources: tuple[SourceSpec, ...]
    sample_sizes: tuple[int, ...] = (100, 200, 300, 500, 1000, 2000, 5000)
    estimators: tuple[str, ...] = ESTIMATOR_NAMES
    trials: int = 1000
    base_seed: int = 0
    estimator_config: EstimatorConfig = EstimatorConfig()
    keep_estimates: bool = False

    def __post_init__(self) -> None:
        if not self.sources:
            raise ValueError("grid needs at least one source")
        if not self.sample_sizes:
            raise ValueError("grid needs at least one sample size")
        if any(n < 1 for n in self.sample_sizes):
            raise ValueError("sample sizes must be >= 1")
        if list(self.sample_sizes) != sorted(set(self.sample_sizes)):
            raise ValueError("sample sizes must be strictly increasing")
        if not self.estimators:
            raise ValueError("grid needs at least one estimator")
        unknown = [e for e in self.estimators if e not in ESTIMATOR_NAMES]
        if unknown:
            raise ValueError(f"unknown estimators {unknown}: choose from {ESTIMATOR_NAMES}")
        if len(set(self.estimators)) != len(self.estimators):
            raise ValueError("duplicate estimator names in grid")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        labels = [s.label for s in self.sources]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate source labels: {labels}")


@dataclass(frozen=True)
class CellStats:
    """Aggregated estimates for one (source, sample size, estimator) cell."""

    source: str
    alpha_or_exponent: float | None
    support: int
    true_entropy: float
    n: int
    estimator: str
    trials: int
    mean: float
    bias: float
    rmse: float
    variance: float


@dataclass(frozen=True)
class TrialFailure:
    source: str
    n: int
    estimator: str
    trial: int
    message: str


@dataclass(frozen=True)
class ExperimentResult:
    grid: ExperimentGrid = field(repr=False)
    cells: tuple[CellStats, ...]
    failures: tuple[TrialFailure, ...] = ()
    estimates: Mapping[tuple[str, int, str], tuple[float, ...]] | None = None


def aggregate(values: Iterable[float], true_value: float) -> tuple[float, float, float, float]:
    """Reduce per-trial estimates to (mean, bias, rmse, variance).

    bias = mean - true, rmse = sqrt(mean squared error), and the variance is
    defined through the decomposition rmse^2 = bias^2 + variance.  Reduction
    order is the trial order handed in, so results do not depend on how the
    trials were scheduled.
    """
    vals = list(values)
    if not vals:
        raise ValueError("cannot aggregate an empty list of estimates")
    mean = math.fsum(vals) / len(vals)
    bias = mean - true_value
    rmse = math.sqrt(math.fsum((v - true_value) ** 2 for v in vals) / len(vals))
    variance = max(rmse * rmse - bias * bias, 0.0)
    return mean, bias, rmse, variance


def _run_cell(
    probs: np.ndarray,
    support: int,
    n: int,
    trials: int,
    base_seed: int,
    source_index: int,
    size_index: int,
    estimators: tuple[str, ...],
    config: EstimatorConfig,
) -> tuple[dict[str, list[float]], list[tuple[str, int, str]]]:
    """Per-trial estimates for one (source, n) cell.  Top level for pickling."""
    pmf = TruePmf(probs)
    values: dict[str, list[float]] = {name: [] for name in estimators}
    failures: list[tuple[str, int, str]] = []
    for trial in range(trials):
        sample = draw_sample(pmf, n, (base_seed, source_index, size_index, trial))
        for name in estimators:
            try:
                est = estimate_by_name(name, sample, config=config, support_size=support)
            except ValueError as exc:
                failures.append((name, trial, str(exc)))
                continue
            values[name].append(est.value)
    return values, failures


def run_grid(grid: ExperimentGrid, workers: int = 1) -> ExperimentResult:
    """Run the whole grid and aggregate every cell.

    Args:
        grid: what to run.
        workers: process count for cell-level parallelism; any value yields
            identical results because seeds are index-derived.

    Estimator precondition failures inside a trial are recorded in
    ``failures`` and excluded from that estimator's aggregate; they never
    abort the run.  A cell with no surviving trials reports NaN statistics.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    pmfs = [make_source(spec) for spec in grid.sources]
    true_h = [true_entropy(pmf) for pmf in pmfs]

    tasks = [
        (si, ni)
        for si in range(len(grid.sources))
        for ni in range(len(grid.sample_sizes))
    ]
    args = [
        (
            np.asarray(pmfs[si].probs),
            grid.sources[si].support_size,
            grid.sample_sizes[ni],
            grid.trials,
            grid.base_seed,
            si,
            ni,
            grid.estimators,
            grid.estimator_config,
        )
        for si, ni in tasks
    ]
    if workers == 1 or len(tasks) == 1:
        outputs = [_run_cell(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_cell, *zip(*args)))

    cells: list[CellStats] = []
    failures: list[TrialFailure] = []
    estimates: dict[tuple[str, int, str], tuple[float, ...]] = {}
    for (si, ni), (values, cell_failures) in zip(tasks, outputs):
        spec = grid.sources[si]
        n = grid.sample_sizes[ni]
        for name, trial, message in cell_failures:
            failures.append(TrialFailure(spec.label, n, name, trial, message))
        for name in grid.estimators:
            vals = values[name]
            if vals:
                mean, bias, rmse, variance = aggregate(vals, true_h[si])
            else:
                mean = bias = rmse = variance = math.nan
            cells.append(
                CellStats(
                    source=spec.label,
                    alpha_or_exponent=spec.shape_parameter,
                    support=spec.support_size,
                    true_entropy=true_h[si],
                    n=n,
                    estimator=name,
                    trials=len(vals),
                    mean=mean,
                    bias=bias,
                    rmse=rmse,
                    variance=variance,
                )
            )
            if grid.keep_estimates:
                estimates[(spec.label, n, name)] = tuple(vals)
    return ExperimentResult(
        grid=grid,
        cells=tuple(cells),
        failures=tuple(failures),
        estimates=estimates if grid.keep_estimates else None,
    )


def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.6g}"


def write_results(result: ExperimentResult, path: str | Path) -> Path:
    """Write the aggregate cells as CSV (UTF-8, comma separated, 6 significant digits)."""
    path = Path(path)
    lines = [CSV_HEADER]
    for c in result.cells:
        lines.append(
            ",".join(
                [
                    c.source,
                    _fmt(c.alpha_or_exponent),
                    str(c.support),
                    _fmt(c.true_entropy),
                    str(c.n),
                    c.estimator,
                    str(c.trials),
                    _fmt(c.mean),
                    _fmt(c.bias),
                    _fmt(c.rmse),
                    _fmt(c.variance),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9.]+", "-", label).strip("-")


def write_gnuplot(result: ExperimentResult, stem: str | Path) -> list[Path]:
    """Emit one whitespace-separated table per (source, metric) for gnuplot.

    Each file has a commented header and one row per sample size, first column
    n, then one column per estimator in grid order.  File names follow
    ``<stem>.<source>.<metric>.dat``.
    """
    stem = Path(stem)
    grid = result.grid
    by_key = {(c.source, c.n, c.estimator): c for c in result.cells}
    written: list[Path] = []
    for spec in grid.sources:
        for metric in ("rmse", "bias"):
            path = stem.with_name(f"{stem.name}.{_slug(spec.label)}.{metric}.dat")
            lines = [f"# {spec.label}: {metric} by sample size, one column per estimator"]
            lines.append("# n " + " ".join(grid.estimators))
            for n in grid.sample_sizes:
                row = [str(n)]
                for name in grid.estimators:
                    cell = by_key[(spec.label, n, name)]
                    row.append(_fmt(getattr(cell, metric)))
                lines.append(" ".join(row))
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            written.append(path)
    return written


def format_summary(result: ExperimentResult) -> str:
    """Human-readable RMSE table per source, for terminal output."""
    grid = result.grid
    by_key = {(c.source, c.n, c.estimator): c for c in result.cells}
    width = max(len(name) for name in grid.estimators) + 2
    out: list[str] = []
    for spec in grid.sources:
        true_h = by_key[(spec.label, grid.sample_sizes[0], grid.estimators[0])].true_entropy
        out.append(f"{spec.label}  (S={spec.support_size}, H={true_h:.4f} nats, "
                   f"{grid.trials} trials)  RMSE in nats:")
        header = f"{'n':>6} " + "".join(f"{name:>{width}}" for name in grid.estimators)
        out.append(header)
        for n in grid.sample_sizes:
            row = f"{n:>6} "
            for name in grid.estimators:
                row += f"{by_key[(spec.label, n, name)].rmse:>{width}.4f}"
            out.append(row)
        out.append("")
    return "\n".join(out).rstrip() + "\n"


# --- config file parsing -----------------------------------------------------
#
# INI grammar (see README for the full description):
#
#   [grid]                      optional, all keys optional
#   sample_sizes = 100 200 500  ints, space or comma separated, increasing
#   estimators = plug_in proposed
#   trials = 200
#   base_seed = 7
#   rarity_threshold = 3
#
#   [source:NAME]               one section per source, at least one
#   kind = uniform|dirichlet|zipf
#   support = 1000
#   alpha = 0.2                 dirichlet only
#   exponent = 1.0              zipf only
#   seed = 11
#
# Unknown sections or keys are errors, as are malformed values.

_GRID_KEYS = {"sample_sizes", "estimators", "trials", "base_seed", "rarity_threshold"}
_SOURCE_KEYS = {"kind", "support", "alpha", "exponent", "seed"}


def _split_list(raw: str) -> list[str]:
    return [tok for tok in re.split(r"[,\s]+", raw.strip()) if tok]


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected an integer, got {raw!r}") from None


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {raw!r}") from None


def parse_config(path: str | Path) -> ExperimentGrid:
    """Parse a benchmark config file into an ExperimentGrid.

    Raises:
        ConfigError: on unknown sections/keys or malformed values; the message
            names the section and key.
        OSError: if the file cannot be read.
    """
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    grid_kwargs: dict = {}
    if parser.has_section("grid"):
        section = parser["grid"]
        for key in section:
            if key not in _GRID_KEYS:
                raise ConfigError(f"[grid]: unknown key {key!r}")
        if "sample_sizes" in section:
            grid_kwargs["sample_sizes"] = tuple(
                _parse_int(tok, "[grid] sample_sizes") for tok in _split_list(section["sample_sizes"])
            )
        if "estimators" in section:
            grid_kwargs["estimators"] = tuple(_split_list(section["estimators"]))
        if "trials" in section:
            grid_kwargs["trials"] = _parse_int(section["trials"], "[grid] trials")
        if "base_seed" in section:
            grid_kwargs["base_seed"] = _parse_int(section["base_seed"], "[grid] base_seed")
        if "rarity_threshold" in section:
            lam = _parse_int(section["rarity_threshold"], "[grid] rarity_threshold")
            try:
                grid_kwargs["estimator_config"] = EstimatorConfig(lam=lam)
            except ValueError as exc:
                raise ConfigError(f"[grid] rarity_threshold: {exc}") from None

    sources: list[SourceSpec] = []
    for section_name in parser.sections():
        if section_name == "grid":
            continue
        if not section_name.startswith("source:"):
            raise ConfigError(f"unknown section [{section_name}]")
        label = section_name[len("source:"):].strip()
        if not label:
            raise ConfigError(f"[{section_name}]: empty source name")
        section = parser[section_name]
        for key in section:
            if key not in _SOURCE_KEYS:
                raise ConfigError(f"[{section_name}]: unknown key {key!r}")
        if "kind" not in section:
            raise ConfigError(f"[{section_name}]: missing required key 'kind'")
        if "support" not in section:
            raise ConfigError(f"[{section_name}]: missing required key 'support'")
        where = f"[{section_name}]"
        try:
            sources.append(
                SourceSpec(
                    kind=section["kind"].strip(),
                    support_size=_parse_int(section["support"], f"{where} support"),
                    alpha=_parse_float(section["alpha"], f"{where} alpha")
                    if "alpha" in section
                    else None,
                    exponent=_parse_float(section["exponent"], f"{where} exponent")
                    if "exponent" in section
                    else None,
                    seed=_parse_int(section["seed"], f"{where} seed") if "seed" in section else 0,
                    name=label,
                )
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{where}: {exc}") from None
    if not sources:
        raise ConfigError(f"{path}: no [source:NAME] sections found")
    try:
        return ExperimentGrid(sources=tuple(sources), **grid_kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
