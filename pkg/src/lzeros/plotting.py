"""Figures for CLI reports, drawn off-screen with the Agg canvas."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .lfunc import hardy_Z_many

RC = {"figsize": (7.0, 3.6), "dpi": 120}


def _new(ncols=1):
    fig = Figure(figsize=(RC["figsize"][0] * ncols, RC["figsize"][1]), dpi=RC["dpi"])
    FigureCanvasAgg(fig)
    axes = [fig.add_subplot(1, ncols, k + 1) for k in range(ncols)]
    return fig, axes


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    return path


def plot_hardy_z(chi, zl, path, points: int = 2000) -> Path:
    """Z(t) across the window with the located ordinates marked."""
    lo = max(zl.t1, 1e-4)
    t = np.linspace(lo, zl.t2, points)
    z = hardy_Z_many(chi, t)
    fig, (ax,) = _new()
    ax.axhline(0, color="0.6", lw=0.7)
    ax.plot(t, z, lw=1.0, color="C0")
    g = zl.gammas
    if len(g):
        ax.plot(g, np.zeros_like(g), "o", ms=3.5, color="C3",
                label=f"{zl.count} zeros" + ("" if zl.certified else " (uncertified)"))
        ax.legend(frameon=False, loc="upper left")
    ax.set_xlabel("t")
    ax.set_ylabel("Z(t)")
    ax.set_title(f"Hardy Z for {zl.label}")
    return _save(fig, path)


def plot_landau_ratios(reports, path, threshold: float | None = None) -> Path:
    """|S - M|/E for each report, grouped by character and coloured by T2."""
    fig, (ax,) = _new()
    t2s = sorted({r.t2 for r in reports})
    cells = sorted({(r.label, r.x) for r in reports},
                   key=lambda c: (tuple(int(v) for v in c[0].split(".")), c[1]))
    pos = {c: k for k, c in enumerate(cells)}
    for k, t2 in enumerate(t2s):
        sub = [r for r in reports if r.t2 == t2]
        ax.plot([pos[(r.label, r.x)] for r in sub], [r.ratio for r in sub], "o",
                ms=3.5, color=f"C{k}", label=f"T2 = {t2:g}")
    if threshold is not None:
        ax.axhline(threshold, color="C3", ls="--", lw=0.8, label="threshold")
    ax.set_yscale("log")
    ax.set_xticks(range(len(cells)))
    ax.set_xticklabels([f"{lab} x={x}" for lab, x in cells], rotation=90, fontsize=5)
    ax.set_ylabel("|S - M| / E")
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)


def plot_witnesses(scan, burgess_rows, path) -> Path:
    """Smallest witness prime against q, and Burgess ratios against q."""
    fig, (ax1, ax2) = _new(ncols=2)
    qs = [int(w.label.split(".")[0]) for w in scan.rows if w.found]
    ps = [w.p0 for w in scan.rows if w.found]
    ax1.plot(qs, ps, ".", color="C0", label="p0")
    if scan.rows:
        q_all = np.array(sorted({int(w.label.split(".")[0]) for w in scan.rows}))
        ax1.plot(q_all, scan.c3 * q_all**scan.theta, color="C1", lw=0.8, label="c3 q^theta")
    ax1.set_xlabel("q")
    ax1.set_ylabel("smallest witness prime")
    ax1.legend(frameon=False)
    bq = [int(r.label.split(".")[0]) for r in burgess_rows]
    ax2.plot(bq, [r.ratio for r in burgess_rows], ".", color="C2")
    ax2.set_xlabel("q")
    ax2.set_ylabel("|S| / Burgess rhs")
    return _save(fig, path)
