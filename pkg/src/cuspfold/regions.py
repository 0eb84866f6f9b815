"""Sliding / escaping / crossing classification on the switching manifold.

With a = Z+f(q) and b = Z-f(q): both positive means both fields point
with the gradient of f (upward crossing); both negative, downward
crossing; the upper field arriving (a < 0) while the lower arrives
(b > 0) is sliding; the reverse is escaping.  Points where either sign
vanishes within tolerance sit on a tangency line and are reported as
boundary, never tie-broken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .fields import PSVF, EPSILON_UNFOLD, SignVector
from .poly import Point3
from .tangency import ON_SIGMA_TOL, lie_derivative

REGION_TOL = 1e-9


class RegionLabel(Enum):
    SLIDING = "sliding"
    ESCAPING = "escaping"
    CROSSING_UP = "crossing_up"
    CROSSING_DOWN = "crossing_down"
    BOUNDARY = "boundary"


def label_from_lie_signs(a_sign: int, b_sign: int) -> RegionLabel:
    """Region label from the strict signs of (Z+f, Z-f)."""
    if a_sign > 0 and b_sign > 0:
        return RegionLabel.CROSSING_UP
    if a_sign < 0 and b_sign < 0:
        return RegionLabel.CROSSING_DOWN
    if a_sign < 0 and b_sign > 0:
        return RegionLabel.SLIDING
    return RegionLabel.ESCAPING


def classify_region(psvf: PSVF, q: Point3, tol: float = REGION_TOL) -> RegionLabel:
    if abs(psvf.f.eval(q)) >= ON_SIGMA_TOL:
        raise ValueError("point not on switching manifold")
    a = lie_derivative(psvf.zplus, psvf.f).eval(q)
    b = lie_derivative(psvf.zminus, psvf.f).eval(q)
    if abs(a) <= tol or abs(b) <= tol:
        return RegionLabel.BOUNDARY
    return label_from_lie_signs(1 if a > 0 else -1, 1 if b > 0 else -1)


@dataclass(frozen=True)
class SectorLayout:
    """Labels of the four open sectors cut out of the switching plane.

    Sectors are keyed by the sign pair (sign x, sign(y - t*lambda)), i.e.
    position relative to the upper tangency line (the y-axis) and the
    translated lower tangency line y = t*lambda.
    """

    sv: SignVector
    lam: float
    sectors: dict = field(default_factory=dict)

    @property
    def lower_line_y(self) -> float:
        return self.sv.t * self.lam

    def label_at(self, q: Point3) -> RegionLabel:
        sx = _strict_sign(q.x)
        sy = _strict_sign(q.y - self.lower_line_y)
        if sx == 0 or sy == 0:
            return RegionLabel.BOUNDARY
        return self.sectors[(sx, sy)]


def _strict_sign(v: float, tol: float = REGION_TOL) -> int:
    if v > tol:
        return 1
    if v < -tol:
        return -1
    return 0


def sector_layout(sv: SignVector, lam: float = 0.0,
                  epsilon: float = EPSILON_UNFOLD) -> SectorLayout:
    """Analytic layout: sector (sx, sy) has Lie signs (g*sx, t*sy)."""
    if abs(lam) >= epsilon:
        raise ValueError("lambda outside unfolding window")
    sectors = {
        (sx, sy): label_from_lie_signs(sv.g * sx, sv.t * sy)
        for sx in (1, -1)
        for sy in (1, -1)
    }
    return SectorLayout(sv=sv, lam=lam, sectors=sectors)
