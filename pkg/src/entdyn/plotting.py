"""Matplotlib figure rendering for the report path.

Each exported dataset gets a PNG next to its CSV: concurrence estimates
on a log scale plus, when available, the eigenvalue curves of rho(t)
(the crossing of the two largest eigenvalues marks the end of the
quasi-pure validity window).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .scenarios import BundleResult, TimeSeries  # noqa: E402


def render_series(series: TimeSeries, path, logscale: bool = True) -> Path:
    """One panel of c(t) per estimator, one of eigenvalues if present."""
    has_mu = series.records and series.records[0].eigenvalues.size > 0
    nrows = 2 if has_mu else 1
    fig, axes = plt.subplots(nrows, 1, figsize=(6.4, 3.2 * nrows), sharex=True)
    axes = axes if has_mu else [axes]
    ax = axes[0]
    t = series.t
    for est in series.estimators:
        c = series.column(est)
        mask = series.valid_mask(est)
        ax.plot(t[mask], c[mask], label=est)
        if (~mask).any():
            ax.plot(t[~mask], c[~mask], ".", ms=2, alpha=0.4)
    if logscale:
        ax.set_yscale("log")
    ax.set_ylabel("concurrence")
    ax.set_title(series.name)
    ax.legend(fontsize=8)
    if has_mu:
        axm = axes[1]
        n_mu = series.records[0].eigenvalues.size
        mus = [[r.eigenvalues[i] for r in series.records] for i in range(min(n_mu, 6))]
        for i, mu in enumerate(mus):
            axm.plot(t, mu, label=f"mu_{i + 1}")
        axm.set_ylabel("eigenvalues")
        axm.legend(fontsize=7, ncol=3)
    axes[-1].set_xlabel("t")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_bundle_overlay(bundle: BundleResult, path, title: str = "") -> Path:
    """All member series on one log-scale axis (figure-reproduction view)."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for series in bundle.series:
        t = series.t
        for est in series.estimators:
            mask = series.valid_mask(est)
            style = "--" if est == "analytic" else "-"
            ax.plot(t[mask], series.column(est)[mask], style,
                    label=f"{series.name}:{est}")
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("concurrence")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
