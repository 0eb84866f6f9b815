"""The five-sign invariant of a cusp-fold singularity.

A cusp-fold configuration is pinned, up to the equivalence implemented
here, by five independent signs:

* which zone the distinguished cusp orbit arrives in        (a*b*g)
* which branch of the upper tangency line is visible        (a*g)
* which side of that line has the upper field departing     (g)
* whether the lower tangency line is visible or invisible   (m*t)
* which side of it has the lower field departing            (t)

The map from sign vectors to signatures is a bijection, which is the
executable content of the 32-form distinctness claim.  For an arbitrary
field the same data is extracted numerically by probing a small circle
around the singular point on the switching manifold; any inconsistency
among the probes is an error, never resolved by majority vote.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fields import PSVF, SignVector, all_sign_vectors
from .poly import Point3
from .regions import classify_region
from .tangency import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    ContactClass,
    Side,
    classify_contact,
    lie_derivative,
)

POSITIVE_Y = "positive-y"
NEGATIVE_Y = "negative-y"
VISIBLE = "visible"
INVISIBLE = "invisible"


class NotCuspFoldError(ValueError):
    """The probed point is not an upper-cusp / lower-fold configuration."""


class ProbeError(ValueError):
    """The probe circle could not be resolved consistently."""


@dataclass(frozen=True)
class CuspFoldSignature:
    cusp_arrival: str        # sigma+ / sigma-
    visible_branch: str      # positive-y / negative-y
    zplus_layout: int        # +1 / -1
    sminus_type: str         # visible / invisible
    zminus_layout: int       # +1 / -1

    def to_json_dict(self) -> dict:
        return {
            "cusp_arrival": self.cusp_arrival,
            "visible_branch": self.visible_branch,
            "zplus_layout": "+1" if self.zplus_layout > 0 else "-1",
            "sminus_type": self.sminus_type,
            "zminus_layout": "+1" if self.zminus_layout > 0 else "-1",
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "CuspFoldSignature":
        return cls(
            cusp_arrival=d["cusp_arrival"],
            visible_branch=d["visible_branch"],
            zplus_layout=int(d["zplus_layout"]),
            sminus_type=d["sminus_type"],
            zminus_layout=int(d["zminus_layout"]),
        )


def signature_of_sign_vector(sv: SignVector) -> CuspFoldSignature:
    return CuspFoldSignature(
        cusp_arrival=SIGMA_PLUS if sv.a * sv.b * sv.g > 0 else SIGMA_MINUS,
        visible_branch=POSITIVE_Y if sv.a * sv.g > 0 else NEGATIVE_Y,
        zplus_layout=sv.g,
        sminus_type=INVISIBLE if sv.m * sv.t > 0 else VISIBLE,
        zminus_layout=sv.t,
    )


def sign_vector_of_signature(sig: CuspFoldSignature) -> SignVector:
    """Inverse of signature_of_sign_vector (each field recovers one sign)."""
    g = sig.zplus_layout
    a = g if sig.visible_branch == POSITIVE_Y else -g
    abg = 1 if sig.cusp_arrival == SIGMA_PLUS else -1
    b = abg * a * g
    t = sig.zminus_layout
    m = t if sig.sminus_type == INVISIBLE else -t
    return SignVector(a=a, b=b, g=g, m=m, t=t)


def weak_equivalent(s1: CuspFoldSignature, s2: CuspFoldSignature) -> bool:
    return s1 == s2


@dataclass(frozen=True)
class TheoremOneReport:
    count_distinct: int
    collisions: list


def verify_theorem_one() -> TheoremOneReport:
    """Signatures of all 32 forms, with any pairwise collisions."""
    seen: dict[CuspFoldSignature, SignVector] = {}
    collisions = []
    for sv in all_sign_vectors():
        sig = signature_of_sign_vector(sv)
        if sig in seen:
            collisions.append((seen[sig], sv, sig))
        else:
            seen[sig] = sv
    return TheoremOneReport(count_distinct=len(seen), collisions=collisions)


# ---------------------------------------------------------------------------
# Numeric signature extraction
# ---------------------------------------------------------------------------


def _vec_sub(u, v):
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def _vec_scale(u, s):
    return (u[0] * s, u[1] * s, u[2] * s)


def _vec_norm(u):
    return math.sqrt(u[0] ** 2 + u[1] ** 2 + u[2] ** 2)


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _project_to_sigma(psvf: PSVF, q, max_iter=50) -> Point3:
    """Newton projection of a nearby point onto {f = 0} along the gradient."""
    gx, gy, gz = psvf.f.gradient()
    p = tuple(q)
    for _ in range(max_iter):
        val = psvf.f.eval(p)
        if abs(val) < 1e-14:
            break
        grad = (gx.eval(p), gy.eval(p), gz.eval(p))
        g2 = grad[0] ** 2 + grad[1] ** 2 + grad[2] ** 2
        if g2 == 0.0:
            raise ProbeError("probe radius unresolvable")
        p = _vec_sub(p, _vec_scale(grad, val / g2))
    return Point3(*p)


def _tangent_basis(psvf: PSVF, p: Point3):
    gx, gy, gz = psvf.f.gradient()
    n = (gx.eval(p), gy.eval(p), gz.eval(p))
    nn = _vec_norm(n)
    if nn == 0.0:
        raise ProbeError("probe radius unresolvable")
    n = _vec_scale(n, 1.0 / nn)
    seed = (1.0, 0.0, 0.0) if abs(n[0]) < 0.9 else (0.0, 1.0, 0.0)
    d = seed[0] * n[0] + seed[1] * n[1] + seed[2] * n[2]
    e1 = _vec_sub(seed, _vec_scale(n, d))
    e1 = _vec_scale(e1, 1.0 / _vec_norm(e1))
    e2 = _cross(n, e1)
    return e1, e2


def _circle_roots(values, angles):
    """Angles where a sampled periodic function changes sign."""
    n = len(angles)
    brackets = []
    for i in range(n):
        a, b = values[i], values[(i + 1) % n]
        if a == 0.0:
            brackets.append((angles[i], angles[i]))
        elif a * b < 0.0:
            hi = angles[(i + 1) % n]
            if i + 1 == n:
                hi = angles[0] + 2.0 * math.pi
            brackets.append((angles[i], hi))
    return brackets


def signature_of_psvf(psvf: PSVF, p: Point3, probe_radius: float,
                      samples: int = 720) -> CuspFoldSignature:
    """Numeric five-sign extraction at an upper-cusp / lower-fold point.

    Orientation convention: the frame is the tangent basis of the
    switching manifold at p (for f = z, the ambient x and y axes), so
    signatures of general fields are reported relative to the supplied
    coordinates.
    """
    upper_contact = classify_contact(psvf.zplus, psvf.f, p, Side.UPPER)
    lower_contact = classify_contact(psvf.zminus, psvf.f, p, Side.LOWER)
    if not (upper_contact.is_cusp and lower_contact.is_fold):
        raise NotCuspFoldError("not a cusp-fold configuration")

    e1, e2 = _tangent_basis(psvf, p)
    lplus = lie_derivative(psvf.zplus, psvf.f)
    lminus = lie_derivative(psvf.zminus, psvf.f)

    def circle_point(phi: float) -> Point3:
        c, s = math.cos(phi), math.sin(phi)
        q = (
            p.x + probe_radius * (c * e1[0] + s * e2[0]),
            p.y + probe_radius * (c * e1[1] + s * e2[1]),
            p.z + probe_radius * (c * e1[2] + s * e2[2]),
        )
        return _project_to_sigma(psvf, q)

    angles = [2.0 * math.pi * i / samples for i in range(samples)]
    points = [circle_point(phi) for phi in angles]
    vplus = [lplus.eval(q) for q in points]
    vminus = [lminus.eval(q) for q in points]

    def refine(lie_poly, lo, hi):
        if hi == lo:
            return lo
        flo = lie_poly.eval(circle_point(lo))
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fm = lie_poly.eval(circle_point(mid))
            if fm == 0.0 or hi - lo < 1e-14:
                return mid
            if flo * fm < 0.0:
                hi = mid
            else:
                lo, flo = mid, fm
        return 0.5 * (lo + hi)

    plus_angles = [refine(lplus, lo, hi) for lo, hi in _circle_roots(vplus, angles)]
    minus_angles = [refine(lminus, lo, hi) for lo, hi in _circle_roots(vminus, angles)]
    if len(plus_angles) != 2 or len(minus_angles) != 2:
        raise ProbeError("probe radius unresolvable")

    # upper tangency directions must be transversal to e1, lower ones to e2
    if any(abs(math.sin(phi)) < 0.1 for phi in plus_angles):
        raise ProbeError("probe radius unresolvable")
    if any(abs(math.cos(phi)) < 0.1 for phi in minus_angles):
        raise ProbeError("probe radius unresolvable")

    upper_probe = [
        (phi, classify_contact(psvf.zplus, psvf.f, circle_point(phi), Side.UPPER))
        for phi in plus_angles
    ]
    kinds = sorted(cc.kind for _, cc in upper_probe)
    if kinds != ["fold_invisible", "fold_visible"]:
        raise ProbeError("probe radius unresolvable")
    visible_phi = next(phi for phi, cc in upper_probe if cc.kind == "fold_visible")
    visible_branch = POSITIVE_Y if math.sin(visible_phi) > 0 else NEGATIVE_Y

    lower_probe = [
        classify_contact(psvf.zminus, psvf.f, circle_point(phi), Side.LOWER)
        for phi in minus_angles
    ]
    lower_kinds = {cc.kind for cc in lower_probe}
    if lower_kinds == {"fold_visible"}:
        sminus_type = VISIBLE
    elif lower_kinds == {"fold_invisible"}:
        sminus_type = INVISIBLE
    else:
        raise ProbeError("probe radius unresolvable")

    vplus_e1 = lplus.eval(circle_point(0.0))
    vminus_e2 = lminus.eval(circle_point(0.5 * math.pi))
    if abs(vplus_e1) < 1e-12 or abs(vminus_e2) < 1e-12:
        raise ProbeError("probe radius unresolvable")
    zplus_layout = 1 if vplus_e1 > 0 else -1
    zminus_layout = 1 if vminus_e2 > 0 else -1

    _check_probe_coherence(psvf, circle_point, plus_angles, minus_angles,
                           lplus, lminus)

    return CuspFoldSignature(
        cusp_arrival=upper_contact.arrival,
        visible_branch=visible_branch,
        zplus_layout=zplus_layout,
        sminus_type=sminus_type,
        zminus_layout=zminus_layout,
    )


def _check_probe_coherence(psvf, circle_point, plus_angles, minus_angles,
                           lplus, lminus):
    """Eight compass probes must carry arc-coherent Lie signs and
    consistent region labels; any disagreement is an error."""
    compass = [k * math.pi / 4.0 for k in range(8)]
    guard = 0.15  # skip compass points sitting nearly on a tangency direction

    def arc_signs(lie_poly, root_angles):
        signs = {}
        for phi in compass:
            if any(_angle_dist(phi, r) < guard for r in root_angles):
                continue
            val = lie_poly.eval(circle_point(phi))
            side = _arc_index(phi, root_angles)
            sgn = 1 if val > 0 else -1
            if side in signs and signs[side] != sgn:
                raise ProbeError("probe radius unresolvable")
            signs[side] = sgn
        if len(signs) == 2 and signs[0] == signs[1]:
            raise ProbeError("probe radius unresolvable")
        return signs

    splus = arc_signs(lplus, plus_angles)
    sminus = arc_signs(lminus, minus_angles)
    # the region label at each usable compass point must match the two signs
    from .regions import label_from_lie_signs

    for phi in compass:
        if any(_angle_dist(phi, r) < guard for r in plus_angles + minus_angles):
            continue
        q = circle_point(phi)
        expect = label_from_lie_signs(
            splus[_arc_index(phi, plus_angles)],
            sminus[_arc_index(phi, minus_angles)],
        )
        if classify_region(psvf, q) is not expect:
            raise ProbeError("probe radius unresolvable")


def _angle_dist(a: float, b: float) -> float:
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def _arc_index(phi: float, roots) -> int:
    """0 or 1 depending on which arc between the two root angles phi is on."""
    r0, r1 = sorted(r % (2.0 * math.pi) for r in roots)
    phi = phi % (2.0 * math.pi)
    return 0 if r0 < phi < r1 else 1
