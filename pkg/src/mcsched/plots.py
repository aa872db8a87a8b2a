"""Figure rendering for benchmark sweeps and scheduling tables.

matplotlib is imported lazily with the Agg backend so the rest of the package
stays usable on display-less machines.
"""
from __future__ import annotations

from typing import Optional, Sequence

from .bench import BenchRecord
from .sched import SchedPolicy, ScheduleTable

_POLICY_STYLE = {
    SchedPolicy.LLF: dict(color="tab:red", marker="*", label="G-ALAP-LLF"),
    SchedPolicy.EDF: dict(color="tab:green", marker="^", label="G-ALAP-EDF"),
}


def _mpl():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def save_acceptance_figure(records: Sequence[BenchRecord], path: str,
                           title: Optional[str] = None) -> None:
    """Acceptance rate vs normalized utilization, one series per policy."""
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(6, 4))
    records = sorted(records, key=lambda r: r.u_norm)
    xs = [float(r.u_norm) for r in records]
    for policy in (SchedPolicy.LLF, SchedPolicy.EDF):
        if not all(policy in r.per_policy for r in records):
            continue
        ys = [r.acceptance(policy) for r in records]
        ax.plot(xs, ys, linestyle="--", **_POLICY_STYLE[policy])
    ax.set_xlabel("normalized utilization")
    ax.set_ylabel("acceptance rate")
    ax.set_ylim(-0.02, 1.05)
    ax.grid(True, alpha=0.4)
    ax.legend(loc="lower left")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_gantt_figure(tables: Sequence[ScheduleTable], path: str) -> None:
    """Horizontal bar chart of the tables, one panel per table, one row per
    core, colored by dag."""
    plt = _mpl()
    fig, axes = plt.subplots(len(tables), 1, figsize=(10, 2.2 * len(tables)),
                             squeeze=False)
    cmap = plt.get_cmap("tab10")
    for ax, table in zip(axes[:, 0], tables):
        for core, start, length, d, v, k in table.runs:
            ax.broken_barh([(start, length)], (core - 0.4, 0.8),
                           facecolors=cmap(d % 10), edgecolor="black",
                           linewidth=0.3)
        ax.set_xlim(0, table.horizon)
        ax.set_ylim(-0.6, table.cores - 0.4)
        ax.set_yticks(range(table.cores))
        ax.set_yticklabels([f"core {c}" for c in range(table.cores)])
        ax.set_title(f"{table.mode.value} mode")
        ax.set_xlabel("slot")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
