"""Iterated Lie derivatives and pointwise contact classification.

Conventions pinned here, since they are the most error-prone part of the
whole package:

* First Lie derivative nonzero -> transversal, tagged with its sign.
* Quadratic contact (L1 = 0, L2 != 0) is a fold.  A fold is *visible*
  when the tangent arc stays in its own field's zone: for the upper
  field that means L2 > 0, for the lower field L2 < 0.
* Cubic contact (L1 = L2 = 0, L3 != 0) is a cusp.  The distinguished
  orbit through an upper cusp evolves into the upper zone iff L3 > 0;
  the lower-side rule mirrors it under the reflection z -> -z.
* Anything with the chain vanishing through order 3 is reported as
  degenerate, never silently classified.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .fields import PSVF, SignVector, SmoothField3
from .poly import Point3, Poly3

LIE_TOL = 1e-9
ON_SIGMA_TOL = 1e-9
MAX_CHAIN = 6

SIGMA_PLUS = "sigma+"
SIGMA_MINUS = "sigma-"


class Side(Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class ContactClass:
    """Tagged contact type of one field with the switching manifold at a point.

    kind is one of "transversal", "fold_visible", "fold_invisible",
    "cusp", "degenerate".  `sign` carries the transversal sign, `arrival`
    the cusp arrival zone (sigma+/sigma-), `order` the first nonvanishing
    chain order of a degenerate contact (or "all-vanish").
    """

    kind: str
    sign: int | None = None
    arrival: str | None = None
    order: int | str | None = None

    @property
    def is_fold(self) -> bool:
        return self.kind in ("fold_visible", "fold_invisible")

    @property
    def is_cusp(self) -> bool:
        return self.kind == "cusp"


def lie_derivative(v: SmoothField3, g: Poly3) -> Poly3:
    """Vg = fx * dg/dx + fy * dg/dy + fz * dg/dz, exact."""
    gx, gy, gz = g.gradient()
    return v.fx * gx + v.fy * gy + v.fz * gz


def lie_chain(v: SmoothField3, g: Poly3, k: int) -> list[Poly3]:
    """[Vg, V^2 g, ..., V^k g]; k is capped to guard against degree blowup."""
    if k < 1:
        raise ValueError("chain length must be positive")
    if k > MAX_CHAIN:
        raise ValueError("chain depth exceeded")
    out = []
    cur = g
    for _ in range(k):
        cur = lie_derivative(v, cur)
        out.append(cur)
    return out


def classify_contact(v: SmoothField3, f: Poly3, q: Point3, side: Side,
                     tol: float = LIE_TOL) -> ContactClass:
    """Contact type of the field v with {f=0} at the on-manifold point q."""
    if abs(f.eval(q)) >= ON_SIGMA_TOL:
        raise ValueError("point not on switching manifold")
    chain = lie_chain(v, f, 3)
    l1, l2, l3 = (p.eval(q) for p in chain)
    if abs(l1) > tol:
        return ContactClass("transversal", sign=1 if l1 > 0 else -1)
    if abs(l2) > tol:
        visible = l2 > 0 if side is Side.UPPER else l2 < 0
        return ContactClass("fold_visible" if visible else "fold_invisible")
    if abs(l3) > tol:
        to_upper = l3 > 0 if side is Side.UPPER else l3 < 0
        return ContactClass("cusp", arrival=SIGMA_PLUS if to_upper else SIGMA_MINUS)
    # chase the first nonvanishing higher order, up to the chain cap
    deeper = lie_chain(v, f, MAX_CHAIN)
    for order in range(4, MAX_CHAIN + 1):
        if abs(deeper[order - 1].eval(q)) > tol:
            return ContactClass("degenerate", order=order)
    return ContactClass("degenerate", order="all-vanish")


def cusp_orbit(sv: SignVector, t: float) -> Point3:
    """The distinguished upper orbit through the origin:
    (a*b*t^2/2, b*t, a*b*g*t^3/6)."""
    return Point3(
        0.5 * t * t * sv.a * sv.b,
        t * sv.b,
        t**3 * sv.a * sv.b * sv.g / 6.0,
    )


@dataclass(frozen=True)
class TangencyLine:
    """A straight tangency locus on the switching plane."""

    point: Point3
    direction: tuple[float, float, float]


def tangency_line(psvf: PSVF, side: Side) -> TangencyLine | None:
    """The fold/cusp line of one field on the plane z=0, when it is affine.

    Returns None ("non-linear") when the switching function is not the
    plain z coordinate or the restricted first Lie derivative is not
    affine; callers then fall back to numeric sampling.
    """
    if psvf.f != Poly3.variable("z"):
        return None
    v = psvf.zplus if side is Side.UPPER else psvf.zminus
    l1 = lie_derivative(v, psvf.f)
    restricted = Poly3({e: c for e, c in l1.terms.items() if e[2] == 0})
    allowed = {(0, 0, 0), (1, 0, 0), (0, 1, 0)}
    if any(e not in allowed for e in restricted.terms):
        return None
    c0 = restricted.terms.get((0, 0, 0), 0.0)
    cx = restricted.terms.get((1, 0, 0), 0.0)
    cy = restricted.terms.get((0, 1, 0), 0.0)
    if cx == 0.0 and cy == 0.0:
        return None
    # zero set of c0 + cx x + cy y; direction normalized with the first
    # nonzero component positive
    norm = (cx * cx + cy * cy) ** 0.5
    dx, dy = -cy / norm, cx / norm
    if dx < 0 or (dx == 0 and dy < 0):
        dx, dy = -dx, -dy
    if abs(cx) >= abs(cy):
        point = Point3(-c0 / cx, 0.0, 0.0)
    else:
        point = Point3(0.0, -c0 / cy, 0.0)
    return TangencyLine(point=point, direction=(dx, dy, 0.0))
