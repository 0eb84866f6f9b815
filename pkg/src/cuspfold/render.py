"""Static SVG diagrams of the switching plane and delimited data exports.

Diagrams use a straight top-down orthographic view of the switching
plane (x right, y up): four filled sectors, the two tangency lines, the
singular point, and optionally the projected fold arcs, the cusp orbit
and sample trajectories.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from xml.etree import ElementTree as ET

from .dynamics import Trajectory
from .fields import SignVector, WorkingBox
from .regions import RegionLabel, sector_layout

DEFAULT_STYLE: dict[RegionLabel, str] = {
    RegionLabel.SLIDING: "cyan",
    RegionLabel.ESCAPING: "red",
    RegionLabel.CROSSING_UP: "gray",
    RegionLabel.CROSSING_DOWN: "white",
}


@dataclass(frozen=True)
class ShowFlags:
    regions: bool = True
    tangency_lines: bool = True
    fold_arcs: bool = False
    cusp_orbit: bool = False
    sample_trajectories: bool = False


@dataclass(frozen=True)
class DiagramSpec:
    sv: SignVector
    lam: float = 0.0
    box: WorkingBox = field(default_factory=WorkingBox)
    show: ShowFlags = field(default_factory=ShowFlags)
    style: dict = field(default_factory=lambda: dict(DEFAULT_STYLE))

    def __post_init__(self):
        missing = [lbl for lbl in DEFAULT_STYLE if lbl not in self.style]
        if missing:
            raise ValueError(f"style map missing region labels: {missing}")


_SIZE = 420.0
_MARGIN = 20.0


class _Canvas:
    """World (x, y) on the switching plane to SVG pixel mapping (y flipped)."""

    def __init__(self, box: WorkingBox):
        self.x0 = box.center.x - box.rx
        self.x1 = box.center.x + box.rx
        self.y0 = box.center.y - box.ry
        self.y1 = box.center.y + box.ry
        self.inner = _SIZE - 2.0 * _MARGIN

    def px(self, x: float) -> float:
        return _MARGIN + self.inner * (x - self.x0) / (self.x1 - self.x0)

    def py(self, y: float) -> float:
        return _MARGIN + self.inner * (self.y1 - y) / (self.y1 - self.y0)

    def pt(self, x: float, y: float) -> str:
        return f"{self.px(x):.3f},{self.py(y):.3f}"


def draw_sigma_diagram(spec: DiagramSpec) -> bytes:
    """Render the switching-plane diagram as an SVG 1.1 byte string."""
    sv, lam, box = spec.sv, spec.lam, spec.box
    cv = _Canvas(box)
    layout = sector_layout(sv, lam, epsilon=max(2.0 * abs(lam), 0.5) + 1e-9)
    yb = layout.lower_line_y

    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "width": str(int(_SIZE)),
        "height": str(int(_SIZE)),
        "viewBox": f"0 0 {int(_SIZE)} {int(_SIZE)}",
    })
    ET.SubElement(svg, "rect", {
        "class": "frame",
        "x": str(_MARGIN), "y": str(_MARGIN),
        "width": str(_SIZE - 2 * _MARGIN), "height": str(_SIZE - 2 * _MARGIN),
        "fill": "none", "stroke": "black", "stroke-width": "1",
    })

    if spec.show.regions:
        for (sx, sy), label in sorted(layout.sectors.items()):
            xs = (0.0, cv.x1) if sx > 0 else (cv.x0, 0.0)
            ys = (yb, cv.y1) if sy > 0 else (cv.y0, yb)
            if xs[0] >= xs[1] or ys[0] >= ys[1]:
                continue  # sector clipped away by the box
            pts = " ".join([
                cv.pt(xs[0], ys[0]), cv.pt(xs[1], ys[0]),
                cv.pt(xs[1], ys[1]), cv.pt(xs[0], ys[1]),
            ])
            ET.SubElement(svg, "polygon", {
                "class": "sector",
                "data-label": label.value,
                "data-sector": f"{'+' if sx > 0 else '-'}{'+' if sy > 0 else '-'}",
                "points": pts,
                "fill": spec.style[label],
                "fill-opacity": "0.5",
                "stroke": "none",
            })

    if spec.show.fold_arcs:
        _add_fold_arcs(svg, cv, sv, lam, yb)
    if spec.show.cusp_orbit:
        _add_cusp_orbit(svg, cv, sv)
    if spec.show.sample_trajectories:
        _add_sample_trajectories(svg, cv, sv, lam, box)

    if spec.show.tangency_lines:
        ET.SubElement(svg, "line", {
            "class": "tangency", "data-line": "upper",
            "x1": f"{cv.px(0.0):.3f}", "y1": f"{cv.py(cv.y0):.3f}",
            "x2": f"{cv.px(0.0):.3f}", "y2": f"{cv.py(cv.y1):.3f}",
            "stroke": "black", "stroke-width": "1.5",
        })
        ET.SubElement(svg, "line", {
            "class": "tangency", "data-line": "lower",
            "x1": f"{cv.px(cv.x0):.3f}", "y1": f"{cv.py(yb):.3f}",
            "x2": f"{cv.px(cv.x1):.3f}", "y2": f"{cv.py(yb):.3f}",
            "stroke": "blue", "stroke-width": "1.5",
        })
        ET.SubElement(svg, "circle", {
            "class": "singular-point",
            "cx": f"{cv.px(0.0):.3f}", "cy": f"{cv.py(yb):.3f}",
            "r": "4", "fill": "black",
        })

    return ET.tostring(svg, encoding="utf-8", xml_declaration=True)


def _add_fold_arcs(svg, cv, sv, lam, yb):
    # short projections of the quadratic tangent arcs at sample fold points
    group = ET.SubElement(svg, "g", {"class": "fold-arcs"})
    for y0 in (-0.6, 0.6):  # upper fold points (0, y0)
        pts = []
        for i in range(21):
            t = -0.25 + 0.5 * i / 20.0
            x = sv.a * (y0 * t + sv.b * t * t / 2.0)
            y = y0 + sv.b * t
            pts.append(cv.pt(x, y))
        visible = sv.a * sv.g * y0 > 0
        ET.SubElement(group, "polyline", {
            "class": "fold-arc", "data-side": "upper",
            "points": " ".join(pts), "fill": "none", "stroke": "darkred",
            "stroke-width": "1",
            **({} if visible else {"stroke-dasharray": "4 3"}),
        })
    for x0 in (-0.6, 0.6):  # lower fold points (x0, yb)
        pts = []
        for i in range(21):
            t = -0.25 + 0.5 * i / 20.0
            y = yb + sv.m * t
            pts.append(cv.pt(x0, y))
        visible = sv.m * sv.t < 0
        ET.SubElement(group, "polyline", {
            "class": "fold-arc", "data-side": "lower",
            "points": " ".join(pts), "fill": "none", "stroke": "darkblue",
            "stroke-width": "1",
            **({} if visible else {"stroke-dasharray": "4 3"}),
        })


def _add_cusp_orbit(svg, cv, sv):
    from .tangency import cusp_orbit

    pts = []
    for i in range(41):
        t = -1.3 + 2.6 * i / 40.0
        p = cusp_orbit(sv, t)
        pts.append(cv.pt(p.x, p.y))
    ET.SubElement(svg, "polyline", {
        "class": "cusp-orbit", "points": " ".join(pts),
        "fill": "none", "stroke": "purple", "stroke-width": "1.5",
    })


def _add_sample_trajectories(svg, cv, sv, lam, box):
    from .dynamics import IntegratorOptions, integrate
    from .fields import unfolded_form
    from .poly import Point3

    psvf = unfolded_form(sv, lam, epsilon=max(2.0 * abs(lam), 0.5) + 1e-9)
    opts = IntegratorOptions(t_max=3.0, step=5e-3, box=box)
    group = ET.SubElement(svg, "g", {"class": "trajectories"})
    for q0 in (Point3(0.4, -0.7, 0.2), Point3(-0.5, 0.4, -0.2), Point3(-0.6, 0.6, 0.0)):
        traj = integrate(psvf, q0, opts, exact_hint=(sv, lam))
        for seg in traj.segments:
            pts = " ".join(cv.pt(p.x, p.y) for _, p in seg.samples[:: max(1, len(seg.samples) // 200)])
            ET.SubElement(group, "polyline", {
                "class": "trajectory", "data-regime": seg.regime.value,
                "points": pts, "fill": "none", "stroke": "green",
                "stroke-width": "0.8",
            })


# ---------------------------------------------------------------------------
# Delimited exports
# ---------------------------------------------------------------------------


def export_trajectory_csv(traj: Trajectory) -> bytes:
    """CSV with columns t,x,y,z,regime; one row per stored sample."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["t", "x", "y", "z", "regime"])
    for seg in traj.segments:
        for t, p in seg.samples:
            writer.writerow([repr(t), repr(p.x), repr(p.y), repr(p.z),
                             seg.regime.value])
    return buf.getvalue().encode("utf-8")


def export_events_json(traj: Trajectory) -> bytes:
    records = [
        {"t": ev.t, "point": list(ev.point.as_tuple()), "kind": ev.kind.value}
        for ev in traj.events
    ]
    return json.dumps(records, indent=2).encode("utf-8")


def parse_trajectory_csv(data: bytes) -> list[tuple[float, float, float, float, str]]:
    """Round-trip reader for export_trajectory_csv output."""
    text = data.decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != ["t", "x", "y", "z", "regime"]:
        raise ValueError(f"unexpected header: {header}")
    return [(float(r[0]), float(r[1]), float(r[2]), float(r[3]), r[4])
            for r in reader if r]
