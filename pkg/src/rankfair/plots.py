"""Figure rendering for audit reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def plot_distance_curve(report: dict, path: str):
    """Render the distance curve d(param) with the fairness threshold and
    any viable parameter region shaded."""
    result = report["result"]
    config = result["config"]
    curve = result["curve"]
    params = [row[0] for row in curve]
    dists = [row[1] for row in curve]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(params, dists, color="#1f77b4", lw=1.5, label="distance")
    ax.axhline(
        config["delta_max"], color="#d62728", ls="--", lw=1.0,
        label=f"delta_max = {config['delta_max']:g}",
    )
    for lo, hi in result["viable_intervals"]:
        ax.axvspan(lo, hi, color="#2ca02c", alpha=0.15)
    if result["curve"] and result["argmin_param"] > 0:
        ax.plot(
            [result["argmin_param"]], [result["min_distance"]],
            "o", color="#2ca02c", ms=6, label="minimum",
        )
    if len(params) > 1 and params[0] > 0:
        ax.set_xscale("log")
    ax.set_xlabel(f"{config['family']} parameter")
    ax.set_ylabel(f"distance ({config['metric']})")
    ax.set_title(f"verdict: {result['verdict']}")
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
