"""Render benchmark results as figures, one file per (source, metric).

Companion to the CSV/gnuplot emitters in `bench`: RMSE and absolute bias
against sample size, one line per estimator, log-log axes.  Written for
headless use; files land next to the delimited output.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bench import ExperimentResult, _slug

__all__ = ["render_figures"]

_MARKERS = ("o", "s", "^", "d", "v", "x")


def render_figures(result: ExperimentResult, stem: str | Path, dpi: int = 150) -> list[Path]:
    """Write one PNG per (source, metric in {rmse, bias}).

    File names follow ``<stem>.<source>.<metric>.png``, matching the gnuplot
    table names.  Bias is plotted in absolute value so it fits a log axis;
    zero/NaN points are dropped from the curve.
    """
    stem = Path(stem)
    grid = result.grid
    by_key = {(c.source, c.n, c.estimator): c for c in result.cells}
    written: list[Path] = []
    for spec in grid.sources:
        true_h = by_key[(spec.label, grid.sample_sizes[0], grid.estimators[0])].true_entropy
        for metric in ("rmse", "bias"):
            fig, ax = plt.subplots(figsize=(6.0, 4.2))
            for name, marker in zip(grid.estimators, _MARKERS * 4):
                xs, ys = [], []
                for n in grid.sample_sizes:
                    value = getattr(by_key[(spec.label, n, name)], metric)
                    if metric == "bias":
                        value = abs(value)
                    if value > 0 and value == value:
                        xs.append(n)
                        ys.append(value)
                ax.plot(xs, ys, marker=marker, markersize=4, label=name)
            ax.set_xscale("log")
            ax.set_yscale("log")
            ax.set_xlabel("sample size N")
            ax.set_ylabel("RMSE (nats)" if metric == "rmse" else "|bias| (nats)")
            ax.set_title(f"{spec.label}  (S={spec.support_size}, H={true_h:.3f} nats)")
            ax.grid(True, which="both", alpha=0.3)
            ax.legend(fontsize=8)
            fig.tight_layout()
            path = stem.with_name(f"{stem.name}.{_slug(spec.label)}.{metric}.png")
            fig.savefig(path, dpi=dpi)
            plt.close(fig)
            written.append(path)
    return written
