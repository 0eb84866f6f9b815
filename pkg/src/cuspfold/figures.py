"""Matplotlib figure emitters used by the CLI report paths.

These complement the SVG diagram emitter: `simulate` and `unfold` write
a rendered figure next to their delimited outputs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bifurcation import BifurcationReport
from .dynamics import Regime, Trajectory
from .fields import SignVector, WorkingBox
from .regions import sector_layout
from .render import DEFAULT_STYLE

_REGIME_COLORS = {Regime.UPPER: "tab:red", Regime.LOWER: "tab:blue",
                  Regime.SLIDING: "tab:green"}


def save_trajectory_figure(traj: Trajectory, path: str) -> None:
    """3D view plus the switching-coordinate history, colored by regime."""
    fig = plt.figure(figsize=(10, 4.5))
    ax3d = fig.add_subplot(1, 2, 1, projection="3d")
    axz = fig.add_subplot(1, 2, 2)
    seen = set()
    for seg in traj.segments:
        ts = [t for t, _ in seg.samples]
        xs = [p.x for _, p in seg.samples]
        ys = [p.y for _, p in seg.samples]
        zs = [p.z for _, p in seg.samples]
        color = _REGIME_COLORS[seg.regime]
        label = seg.regime.value if seg.regime not in seen else None
        seen.add(seg.regime)
        ax3d.plot(xs, ys, zs, color=color, lw=1.2, label=label)
        axz.plot(ts, zs, color=color, lw=1.2)
    for ev in traj.events:
        axz.axvline(ev.t, color="0.75", lw=0.6, zorder=0)
    ax3d.set_xlabel("x")
    ax3d.set_ylabel("y")
    ax3d.set_zlabel("z")
    if seen:
        ax3d.legend(loc="upper left", fontsize=8)
    axz.axhline(0.0, color="k", lw=0.8)
    axz.set_xlabel("t")
    axz.set_ylabel("z")
    axz.set_title("distance to switching plane")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_scan_figure(report: BifurcationReport, path: str) -> None:
    """Fold-fold point location and type across the lambda sweep."""
    fig, ax = plt.subplots(figsize=(6.5, 4))
    lams = [r.lam for r in report.records]
    ys = [r.singular_point.y for r in report.records]
    ax.plot(lams, ys, "k-", lw=1)
    for r in report.records:
        if r.cusp_fold:
            ax.plot(r.lam, 0.0, "r*", ms=14, label="cusp-fold")
        else:
            ax.plot(r.lam, r.singular_point.y, "ko", ms=5)
            ax.annotate(
                "".join(w[0] for w in r.fold_fold.value.split("-")).upper(),
                (r.lam, r.singular_point.y),
                textcoords="offset points", xytext=(0, 8), fontsize=8,
                ha="center",
            )
    ax.axhline(0.0, color="0.8", lw=0.8, zorder=0)
    ax.set_xlabel("lambda")
    ax.set_ylabel("singular point y")
    ax.set_title(f"unfolding of {report.sv.pretty()}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_region_figure(sv: SignVector, lam: float, path: str,
                       box: WorkingBox | None = None) -> None:
    """Matplotlib rendition of the sector layout on the switching plane."""
    box = box or WorkingBox()
    layout = sector_layout(sv, lam, epsilon=max(2.0 * abs(lam), 0.5) + 1e-9)
    yb = layout.lower_line_y
    x0, x1 = box.center.x - box.rx, box.center.x + box.rx
    y0, y1 = box.center.y - box.ry, box.center.y + box.ry
    fig, ax = plt.subplots(figsize=(5, 5))
    for (sx, sy), label in layout.sectors.items():
        xs = (0.0, x1) if sx > 0 else (x0, 0.0)
        ys = (yb, y1) if sy > 0 else (y0, yb)
        if xs[0] >= xs[1] or ys[0] >= ys[1]:
            continue
        ax.fill([xs[0], xs[1], xs[1], xs[0]], [ys[0], ys[0], ys[1], ys[1]],
                color=DEFAULT_STYLE[label], alpha=0.5)
        ax.annotate(label.value, (0.5 * (xs[0] + xs[1]), 0.5 * (ys[0] + ys[1])),
                    ha="center", fontsize=9)
    ax.axvline(0.0, color="k", lw=1.2)
    ax.axhline(yb, color="b", lw=1.2)
    ax.plot([0.0], [yb], "ko", ms=6)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{sv.pretty()}  lambda={lam:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
