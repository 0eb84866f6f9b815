"""Sparse polynomial arithmetic in three variables.

Every vector-field component, switching function and iterated Lie
derivative handled by this package is a low-degree polynomial in
(x, y, z).  Keeping them as exact term maps makes all sign computations
exact for unit coefficients, and the closed-form flows of the canonical
fields reduce event detection to real-root isolation of polynomials of
degree <= 3 in time.

No epsilon pruning is applied to coefficients: only exact 0.0 is
dropped, so iterated derivatives are never silently corrupted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

VARS = ("x", "y", "z")
_VAR_INDEX = {"x": 0, "y": 1, "z": 2}

ROOT_ABS_TOL = 1e-12
ROOT_DEDUP_TOL = 1e-10


class DegenerateEventError(ValueError):
    """Raised when an event polynomial vanishes identically on its interval."""


@dataclass(frozen=True)
class Point3:
    """A phase-space point. All coordinates must be finite."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate in Point3: {v!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


ORIGIN = Point3(0.0, 0.0, 0.0)


class Poly3:
    """Polynomial in (x, y, z), stored as {(i, j, k): coefficient}.

    Canonical sparse form: no stored coefficient is zero, and equality is
    equality of term maps. Instances are immutable; all operations return
    new polynomials.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for exp, coef in dict(terms).items():
                i, j, k = exp
                if i < 0 or j < 0 or k < 0:
                    raise ValueError(f"negative exponent in {exp}")
                c = float(coef)
                if c != 0.0:
                    clean[(int(i), int(j), int(k))] = clean.get((i, j, k), 0.0) + c
        # re-prune in case of merged cancellation
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0.0})

    def __setattr__(self, name, value):
        raise AttributeError("Poly3 is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly3":
        return cls()

    @classmethod
    def constant(cls, c: float) -> "Poly3":
        return cls({(0, 0, 0): c})

    @classmethod
    def variable(cls, name: str) -> "Poly3":
        exp = [0, 0, 0]
        exp[_VAR_INDEX[name]] = 1
        return cls({tuple(exp): 1.0})

    @classmethod
    def monomial(cls, exp: tuple[int, int, int], coef: float = 1.0) -> "Poly3":
        return cls({tuple(exp): coef})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(i + j + k for (i, j, k) in self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly3):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "Poly3(0)"
        parts = []
        for (i, j, k), c in sorted(self.terms.items()):
            mono = "".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(VARS, (i, j, k))
                if e > 0
            )
            parts.append(f"{c:g}{mono}" if mono else f"{c:g}")
        return f"Poly3({' + '.join(parts)})"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Poly3") -> "Poly3":
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, 0.0) + c
        return Poly3(out)

    def __neg__(self) -> "Poly3":
        return Poly3({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly3") -> "Poly3":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Poly3({e: c * other for e, c in self.terms.items()})
        out: dict[tuple[int, int, int], float] = {}
        for (i1, j1, k1), c1 in self.terms.items():
            for (i2, j2, k2), c2 in other.terms.items():
                exp = (i1 + i2, j1 + j2, k1 + k2)
                out[exp] = out.get(exp, 0.0) + c1 * c2
        return Poly3(out)

    __rmul__ = __mul__

    def partial(self, var: str) -> "Poly3":
        """Formal partial derivative with respect to 'x', 'y' or 'z'."""
        idx = _VAR_INDEX[var]
        out = {}
        for exp, c in self.terms.items():
            e = exp[idx]
            if e == 0:
                continue
            new = list(exp)
            new[idx] = e - 1
            out[tuple(new)] = c * e
        return Poly3(out)

    def eval(self, q) -> float:
        """Numeric value at a Point3 or any 3-sequence."""
        if isinstance(q, Point3):
            px, py, pz = q.x, q.y, q.z
        else:
            px, py, pz = q
        total = 0.0
        for (i, j, k), c in self.terms.items():
            total += c * px**i * py**j * pz**k
        return total

    def gradient(self) -> tuple["Poly3", "Poly3", "Poly3"]:
        return (self.partial("x"), self.partial("y"), self.partial("z"))


# ---------------------------------------------------------------------------
# Real roots of univariate polynomials on an interval
# ---------------------------------------------------------------------------


def _horner(coeffs, t):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _derivative_coeffs(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _newton_polish(coeffs, dcoeffs, t, span):
    # Guarded polish; never allowed to wander far from the isolated root.
    for _ in range(4):
        v = _horner(coeffs, t)
        dv = _horner(dcoeffs, t)
        if dv == 0.0:
            break
        step = v / dv
        if abs(step) > 0.1 * span + 1e-6:
            break
        t -= step
    return t


def _quadratic_roots(c0, c1, c2):
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    # numerically stable pairing
    if c1 >= 0.0:
        qq = -0.5 * (c1 + sq)
    else:
        qq = -0.5 * (c1 - sq)
    roots = []
    if qq != 0.0:
        roots.append(c0 / qq)
    if c2 != 0.0 and qq != 0.0:
        roots.append(qq / c2)
    elif c2 != 0.0:
        roots.extend([0.0, -c1 / c2])
    return roots


def _cubic_roots(c0, c1, c2, c3):
    try:
        return _cubic_roots_closed(c0, c1, c2, c3)
    except OverflowError:
        # a negligibly small leading coefficient sends one root to
        # roughly -c2/c3; the remaining pair behaves quadratically
        roots = _quadratic_roots(c0, c1, c2)
        if c2 != 0.0:
            roots.append(-c2 / c3)
        return roots


def _cubic_roots_closed(c0, c1, c2, c3):
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    p = c - b * b / 3.0
    q = d - b * c / 3.0 + 2.0 * b**3 / 27.0
    shift = -b / 3.0
    if abs(p) < 1e-13 and abs(q) < 1e-13:
        return [shift]
    disc = -4.0 * p**3 - 27.0 * q * q
    if disc >= 0.0 and p < 0.0:
        # three real roots (trigonometric form)
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = max(-1.0, min(1.0, arg))
        theta = math.acos(arg)
        return [
            m * math.cos((theta - 2.0 * math.pi * k) / 3.0) + shift
            for k in range(3)
        ]
    # one real root (Cardano)
    half_q = q / 2.0
    rad = math.sqrt(max(half_q * half_q + p**3 / 27.0, 0.0))
    u = math.copysign(abs(-half_q + rad) ** (1.0 / 3.0), -half_q + rad)
    v = math.copysign(abs(-half_q - rad) ** (1.0 / 3.0), -half_q - rad)
    return [u + v + shift]


def roots_univariate(coeffs, t_lo: float, t_hi: float) -> list[float]:
    """All real roots of sum(coeffs[i] t^i) in [t_lo, t_hi].

    Degrees <= 3 are handled in closed form (trig/Cardano for the cubic);
    higher degrees fall back to sign-change bracketing plus bisection over
    a subdivision of the interval.  Every returned root is polished by a
    guarded Newton step, sorted ascending, and deduplicated within 1e-10.

    Raises DegenerateEventError if the polynomial is identically zero.
    """
    if t_hi < t_lo:
        raise ValueError("empty interval")
    c = [float(v) for v in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    if not c:
        raise DegenerateEventError("degenerate event function")
    deg = len(c) - 1
    span = t_hi - t_lo

    if deg == 0:
        return []
    if deg == 1:
        cand = [-c[0] / c[1]]
    elif deg == 2:
        cand = _quadratic_roots(c[0], c[1], c[2])
    elif deg == 3:
        cand = _cubic_roots(c[0], c[1], c[2], c[3])
    else:
        cand = _bracketed_roots(c, t_lo, t_hi)

    dcoeffs = _derivative_coeffs(c)
    polished = []
    slack = max(1e-9, 1e-12 * max(1.0, span))
    for r in cand:
        r = _newton_polish(c, dcoeffs, r, span if span > 0 else 1.0)
        if not (t_lo - slack <= r <= t_hi + slack):
            continue
        r = min(max(r, t_lo), t_hi)
        # reject candidates that are not actually roots (possible when a
        # closed form degrades on badly scaled coefficients)
        term_scale = max(abs(ci) * max(1.0, abs(r)) ** i for i, ci in enumerate(c))
        if abs(_horner(c, r)) <= 1e-9 * term_scale:
            polished.append(r)
    polished.sort()
    out: list[float] = []
    for r in polished:
        if not out or abs(r - out[-1]) > ROOT_DEDUP_TOL:
            out.append(r)
    return out


def _bracketed_roots(c, t_lo, t_hi, subdivisions=256):
    dcoeffs = _derivative_coeffs(c)
    ts = [t_lo + (t_hi - t_lo) * i / subdivisions for i in range(subdivisions + 1)]
    vs = [_horner(c, t) for t in ts]
    if all(abs(v) < ROOT_ABS_TOL for v in vs):
        raise DegenerateEventError("degenerate event function")
    roots = []
    for i in range(subdivisions):
        a, b = ts[i], ts[i + 1]
        fa, fb = vs[i], vs[i + 1]
        if abs(fa) < ROOT_ABS_TOL:
            roots.append(a)
            continue
        if fa * fb < 0.0:
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = _horner(c, m)
                if fm == 0.0 or (b - a) < 1e-15:
                    break
                if fa * fm < 0.0:
                    b, fb = m, fm
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))
    if abs(vs[-1]) < ROOT_ABS_TOL:
        roots.append(t_hi)
    # even-multiplicity roots: local minima of |p| that touch zero
    crit = []
    if len(dcoeffs) >= 2:
        try:
            crit = roots_univariate(dcoeffs, t_lo, t_hi)
        except DegenerateEventError:
            crit = []
    for r in crit:
        if abs(_horner(c, r)) < ROOT_ABS_TOL:
            roots.append(r)
    return roots
