"""Figures written next to the CSV/JSON reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}
COLORS = {"M1": "#1f77b4", "M2": "#d62728", "before": "#bbbbbb"}


def plot_run(results, path):
    """Wires before and after recycling, one group of bars per circuit."""
    with plt.rc_context(STYLE):
        names = [r.name for r in results]
        heuristics = sorted({s.heuristic for r in results for s in r.stats})
        width = 0.8 / (len(heuristics) + 1)
        fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(names) + 2), 3))
        xs = range(len(names))
        ax.bar([x for x in xs], [r.qubits for r in results], width, label="original",
               color=COLORS["before"])
        for k, h in enumerate(heuristics, start=1):
            wires = [next((s.final_wires for s in r.stats if s.heuristic == h), 0) for r in results]
            ax.bar([x + k * width for x in xs], wires, width, label=h, color=COLORS.get(h))
        ax.set_xticks([x + width * len(heuristics) / 2 for x in xs])
        ax.set_xticklabels(names, rotation=45, ha="right")
        ax.set_ylabel("wires")
        ax.yaxis.set_major_locator(MaxNLocator(integer=True))
        ax.legend(frameon=False)
        fig.savefig(path)
        plt.close(fig)


def plot_regression(report, path):
    """Measured vs reference recycled-wire counts, plus the ratio per circuit."""
    rows = report.processed
    with plt.rc_context(STYLE):
        fig, (left, right) = plt.subplots(1, 2, figsize=(8, 3.5))
        top = 1
        for h, attr in (("M1", "m1"), ("M2", "m2")):
            ref = [getattr(r.expected, attr) for r in rows]
            got = [getattr(r, attr) for r in rows]
            top = max([top] + ref + got)
            left.scatter(ref, got, s=12, label=h, color=COLORS[h], alpha=0.8)
        left.plot([0, top], [0, top], color="k", lw=0.6, ls="--")
        left.fill_between([0, top], [0, 0.9 * top], [0, 1.1 * top], color="k", alpha=0.06, lw=0)
        left.set_xlabel("reference recycled wires")
        left.set_ylabel("measured recycled wires")
        left.legend(frameon=False)

        ordered = sorted(rows, key=lambda r: r.expected.qubits)
        ratio = [100.0 * r.m1 / r.qubits if r.qubits else 0.0 for r in ordered]
        ref_ratio = [100.0 * r.expected.m1 / r.expected.qubits for r in ordered]
        xs = range(len(ordered))
        right.plot(xs, ref_ratio, "o", ms=3, color="k", label="reference M1")
        right.plot(xs, ratio, "x", ms=4, color=COLORS["M1"], label="measured M1")
        right.set_xticks(list(xs))
        right.set_xticklabels([r.expected.circuit for r in ordered], rotation=90, fontsize=6)
        right.set_ylabel("% wires recycled")
        right.legend(frameon=False)
        fig.savefig(path)
        plt.close(fig)
