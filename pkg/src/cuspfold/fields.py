"""Two-zone piecewise-smooth vector fields and their canonical cusp-fold family.

The canonical family is indexed by five signs (a, b, g, m, t): the upper
field is (a*y, b, g*x), the lower field is (0, m, t*y), and the switching
function is z.  The one-parameter deformation replaces the lower field's
z-component by t*y - lambda, which translates the lower tangency line and
splits the cusp-fold at the origin into a fold-fold point.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .poly import Point3, Poly3

#: Default half-width of the deformation window for the lambda parameter.
EPSILON_UNFOLD = 0.5

_SIGN_CHARS = {"+": 1, "-": -1, "−": -1, "–": -1}


@dataclass(frozen=True, order=True)
class SignVector:
    """The five signs (a, b, g, m, t) selecting one of the 32 canonical forms."""

    a: int
    b: int
    g: int
    m: int
    t: int

    def __post_init__(self):
        for name in ("a", "b", "g", "m", "t"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"SignVector.{name} must be +1 or -1")

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        """Parse '+++++', '+-+-+' or the grouped style '(+++,++)'."""
        chars = [ch for ch in text if ch not in "() ,\t"]
        if len(chars) != 5:
            raise ValueError(f"expected 5 sign characters, got {text!r}")
        try:
            signs = [_SIGN_CHARS[ch] for ch in chars]
        except KeyError as exc:
            raise ValueError(f"bad sign character in {text!r}") from exc
        return cls(*signs)

    def compact(self) -> str:
        return "".join("+" if s > 0 else "-" for s in (self.a, self.b, self.g, self.m, self.t))

    def pretty(self) -> str:
        c = self.compact()
        return f"({c[:3]},{c[3:]})"

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.g, self.m, self.t)


def all_sign_vectors() -> list[SignVector]:
    """The 32 sign vectors, lexicographic with + before -."""
    return [SignVector(*c) for c in itertools.product((1, -1), repeat=5)]


@dataclass(frozen=True)
class SmoothField3:
    """A smooth polynomial vector field on R^3."""

    fx: Poly3
    fy: Poly3
    fz: Poly3

    def eval(self, q) -> tuple[float, float, float]:
        return (self.fx.eval(q), self.fy.eval(q), self.fz.eval(q))

    def components(self) -> tuple[Poly3, Poly3, Poly3]:
        return (self.fx, self.fy, self.fz)


@dataclass(frozen=True)
class WorkingBox:
    """Axis-aligned box bounding all sampling, probing and integration."""

    rx: float = 1.0
    ry: float = 1.0
    rz: float = 1.0
    center: Point3 = field(default_factory=lambda: Point3(0.0, 0.0, 0.0))

    def __post_init__(self):
        if min(self.rx, self.ry, self.rz) <= 0:
            raise ValueError("box half-widths must be positive")

    def contains(self, q: Point3, slack: float = 0.0) -> bool:
        return (
            abs(q.x - self.center.x) <= self.rx + slack
            and abs(q.y - self.center.y) <= self.ry + slack
            and abs(q.z - self.center.z) <= self.rz + slack
        )


@dataclass(frozen=True)
class PSVF:
    """Switching polynomial f with the upper field (f >= 0) and lower field (f <= 0)."""

    f: Poly3
    zplus: SmoothField3
    zminus: SmoothField3

    def validate_regular_value(self, box: WorkingBox | None = None, n: int = 9,
                               near_tol: float = 1e-3, grad_tol: float = 1e-9) -> None:
        """Sampled check that 0 is a regular value of f inside the box.

        Every grid point close to the zero set must carry a nonzero gradient.
        """
        box = box or WorkingBox()
        gx, gy, gz = self.f.gradient()
        seen_near = False
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    q = Point3(
                        self.center_coord(box.center.x, box.rx, i, n),
                        self.center_coord(box.center.y, box.ry, j, n),
                        self.center_coord(box.center.z, box.rz, k, n),
                    )
                    if abs(self.f.eval(q)) < near_tol:
                        seen_near = True
                        g2 = gx.eval(q) ** 2 + gy.eval(q) ** 2 + gz.eval(q) ** 2
                        if g2 <= grad_tol**2:
                            raise ValueError(
                                "switching function fails sampled regular-value check "
                                f"at {q}"
                            )
        if not seen_near:
            raise ValueError("switching manifold does not meet the sampled box")

    @staticmethod
    def center_coord(c: float, r: float, i: int, n: int) -> float:
        return c - r + 2.0 * r * i / (n - 1)


def canonical_form(sv: SignVector) -> PSVF:
    """The canonical cusp-fold field for a sign vector: f=z, upper (a*y, b, g*x), lower (0, m, t*y)."""
    return unfolded_form(sv, 0.0)


def unfolded_form(sv: SignVector, lam: float, epsilon: float = EPSILON_UNFOLD) -> PSVF:
    """The lambda-deformed field; at lambda=0 this is exactly the canonical form."""
    if abs(lam) >= epsilon:
        raise ValueError("lambda outside unfolding window")
    x = Poly3.variable("x")
    y = Poly3.variable("y")
    z = Poly3.variable("z")
    zplus = SmoothField3(sv.a * y, Poly3.constant(sv.b), sv.g * x)
    zminus_z = sv.t * y
    if lam != 0.0:
        zminus_z = zminus_z - Poly3.constant(lam)
    zminus = SmoothField3(Poly3.zero(), Poly3.constant(sv.m), zminus_z)
    return PSVF(f=z, zplus=zplus, zminus=zminus)


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def _poly_to_records(p: Poly3) -> list[dict]:
    return [{"exp": list(e), "coef": c} for e, c in sorted(p.terms.items())]


def _poly_from_records(records) -> Poly3:
    return Poly3({tuple(r["exp"]): r["coef"] for r in records})


def _field_to_dict(v: SmoothField3) -> dict:
    return {
        "x": _poly_to_records(v.fx),
        "y": _poly_to_records(v.fy),
        "z": _poly_to_records(v.fz),
    }


def _field_from_dict(d) -> SmoothField3:
    return SmoothField3(
        _poly_from_records(d["x"]),
        _poly_from_records(d["y"]),
        _poly_from_records(d["z"]),
    )


def psvf_to_dict(psvf: PSVF) -> dict:
    return {
        "f": _poly_to_records(psvf.f),
        "zplus": _field_to_dict(psvf.zplus),
        "zminus": _field_to_dict(psvf.zminus),
    }


def psvf_from_dict(d) -> PSVF:
    return PSVF(
        f=_poly_from_records(d["f"]),
        zplus=_field_from_dict(d["zplus"]),
        zminus=_field_from_dict(d["zminus"]),
    )


def dumps_psvf(psvf: PSVF, indent: int | None = 2) -> str:
    return json.dumps(psvf_to_dict(psvf), indent=indent)


def loads_psvf(text: str) -> PSVF:
    return psvf_from_dict(json.loads(text))
