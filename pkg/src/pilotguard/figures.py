"""Figure rendering for experiment results.

Each experiment kind gets a single PNG rendered next to its CSV: empirical
curves with markers, closed-form companions as dashed lines.  Matplotlib is
imported lazily with the non-interactive Agg backend so headless runs work,
and PNG metadata is stripped so reruns stay byte-identical.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

from .harness import ExperimentSpec, ResultRow

__all__ = ["render_figure", "figure_path"]

_AXIS_LABELS = {
    "m_antennas": "transmit antennas",
    "n_pilot": "pilot bits",
    "n_random": "random-phase bits",
    "n_train": "training bits per phase",
    "p_b": "training power (linear)",
    "p_e": "spoofing power (linear)",
    "p_er": "random-phase attack power (linear)",
    "p_a": "downlink power (linear)",
}

_Y_LABELS = {
    "snr_curves": "average receive SNR",
    "roc": "rate",
    "pd_vs_n": "detection probability",
    "pd_vs_m": "detection probability",
    "pd_vs_pe": "detection probability",
    "mse_vs_n": "normalized MSE",
    "secrecy_vs_pa": "ergodic secrecy rate (bits/s/Hz)",
    "theory_table": "average receive SNR",
}

# Sweeps spanning decades read better on a log axis.
_LOG_X_PARAMS = {"p_e", "p_er", "p_a"}
_LOG_Y_KINDS = {"mse_vs_n"}


def figure_path(csv_path: str) -> str:
    """PNG path corresponding to a CSV output path."""
    if csv_path.lower().endswith(".csv"):
        return csv_path[: -len(".csv")] + ".png"
    return csv_path + ".png"


def _group_by_metric(rows: Sequence[ResultRow]) -> Dict[str, List[ResultRow]]:
    groups: Dict[str, List[ResultRow]] = {}
    for row in rows:
        groups.setdefault(row.metric, []).append(row)
    return groups


def _positive(values: Sequence[float]) -> bool:
    return all(v > 0.0 for v in values)


def render_figure(
    rows: Sequence[ResultRow],
    spec: ExperimentSpec,
    csv_path: str,
) -> str:
    """Render the rows of one experiment to a PNG next to ``csv_path``.

    Returns the figure path.  For detector experiments the curves are one
    per false-alarm target; for the roc kind the detection rate is drawn
    against the false-alarm target itself.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_path = figure_path(csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    groups = _group_by_metric(rows)

    if spec.kind == "roc":
        _plot_roc(ax, spec, groups)
    else:
        _plot_sweep(ax, spec, groups)

    ax.grid(True, which="both", alpha=0.3)
    ax.set_ylabel(_Y_LABELS[spec.kind])
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return out_path


def _plot_roc(ax, spec: ExperimentSpec, groups: Dict[str, List[ResultRow]]) -> None:
    """Detection rate versus false-alarm target at calibrated thresholds."""
    points: List[Tuple[float, float, Optional[float]]] = []
    for metric, rows in groups.items():
        if not metric.startswith("pd@target="):
            continue
        target = float(metric.split("=", 1)[1])
        for row in rows:
            points.append((target, row.empirical, row.theoretical))
    points.sort(key=lambda p: p[0])
    targets = [p[0] for p in points]
    empirical = [p[1] for p in points]
    theoretical = [p[2] for p in points]
    ax.plot(targets, empirical, "o-", label="empirical")
    if all(t is not None for t in theoretical):
        ax.plot(targets, theoretical, "k--", label="closed form")
    if _positive(targets):
        ax.set_xscale("log")
    ax.set_xlabel("false-alarm target")


def _plot_sweep(ax, spec: ExperimentSpec, groups: Dict[str, List[ResultRow]]) -> None:
    """Metric curves against the swept parameter."""
    drew_theory_label = False
    for metric in sorted(groups):
        rows = sorted(groups[metric], key=lambda r: r.sweep_value)
        x = [r.sweep_value for r in rows]
        y = [r.empirical for r in rows]
        theory = [r.theoretical for r in rows]
        line = ax.plot(x, y, "o-", label=metric)[0]
        if spec.kind != "theory_table" and all(t is not None for t in theory):
            label = None if drew_theory_label else "closed form"
            ax.plot(x, theory, "--", color=line.get_color(), alpha=0.8, label=label)
            drew_theory_label = True
    x_values = list(spec.sweep_values)
    if spec.sweep_param in _LOG_X_PARAMS and _positive(x_values) and len(set(x_values)) > 1:
        span = max(x_values) / min(x_values)
        if span >= 100.0:
            ax.set_xscale("log")
    if spec.kind in _LOG_Y_KINDS:
        ax.set_yscale("log")
    ax.set_xlabel(_AXIS_LABELS[spec.sweep_param])
