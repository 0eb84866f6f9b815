"""Hybrid trajectory integration with event detection and Filippov sliding.

Zone motion uses either the exact polynomial flow of the canonical
family (event times are then real roots of a degree <= 3 polynomial) or
fixed-step RK4 with bisection refinement of the switching-time.  Hits on
the switching manifold are resolved by region label: crossings pass
through, sliding hands over to the Filippov convex combination, escaping
stops with an explicit event, and tangency hits follow the fold
continuation rule (visible fold of the tangent field continues in that
field's zone; an invisible fold defers to the region just ahead; a cusp
stops).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum

from .fields import PSVF, SignVector, SmoothField3, WorkingBox
from .poly import DegenerateEventError, Point3, roots_univariate
from .regions import RegionLabel, classify_region
from .tangency import ON_SIGMA_TOL, Side, classify_contact, lie_derivative

EVENT_TIME_TOL = 1e-10
JUNCTION_TOL = 1e-8
_T_SKIP = 1e-9  # ignore the root at departure when starting on the manifold


class Regime(Enum):
    UPPER = "upper"
    LOWER = "lower"
    SLIDING = "sliding"


class EventKind(Enum):
    CROSS_UP = "cross_up"
    CROSS_DOWN = "cross_down"
    SLIDE_ENTER = "slide_enter"
    SLIDE_EXIT = "slide_exit"
    TANGENCY_HIT = "tangency_hit"
    STOP = "stop"
    ESCAPE_START = "escape_start"  # ambiguous forward start logged, not resolved


@dataclass(frozen=True)
class Event:
    t: float
    point: Point3
    kind: EventKind


@dataclass
class TrajectorySegment:
    regime: Regime
    t_start: float
    t_end: float
    samples: list  # ordered list of (t, Point3)


@dataclass
class Trajectory:
    segments: list
    events: list

    def end_point(self) -> Point3 | None:
        if not self.segments or not self.segments[-1].samples:
            return None
        return self.segments[-1].samples[-1][1]

    def end_time(self) -> float:
        return self.segments[-1].t_end if self.segments else 0.0


@dataclass(frozen=True)
class IntegratorOptions:
    t_max: float
    max_events: int = 64
    step: float = 1e-3
    box: WorkingBox = dc_field(default_factory=WorkingBox)

    def __post_init__(self):
        if self.t_max <= 0 or self.max_events <= 0 or self.step <= 0:
            raise ValueError("integrator options must be positive")


# ---------------------------------------------------------------------------
# Exact flows of the canonical family
# ---------------------------------------------------------------------------


def flow_exact(sv: SignVector, lam: float, side: Side, q0: Point3, t: float) -> Point3:
    """Closed-form zone flow (constant-plus-nilpotent fields are polynomial in t)."""
    x0, y0, z0 = q0.x, q0.y, q0.z
    if side is Side.UPPER:
        x = x0 + sv.a * (y0 * t + sv.b * t * t / 2.0)
        y = y0 + sv.b * t
        z = z0 + sv.g * (x0 * t + sv.a * (y0 * t * t / 2.0 + sv.b * t**3 / 6.0))
    else:
        x = x0
        y = y0 + sv.m * t
        z = z0 + sv.t * (y0 * t + sv.m * t * t / 2.0) - lam * t
    return Point3(x, y, z)


def flow_z_coeffs(sv: SignVector, lam: float, side: Side, q0: Point3) -> list[float]:
    """Coefficients (ascending in t) of the z-component of the exact flow."""
    x0, y0, z0 = q0.x, q0.y, q0.z
    if side is Side.UPPER:
        return [z0, sv.g * x0, sv.g * sv.a * y0 / 2.0, sv.g * sv.a * sv.b / 6.0]
    return [z0, sv.t * y0 - lam, sv.t * sv.m / 2.0]


# ---------------------------------------------------------------------------
# Filippov sliding
# ---------------------------------------------------------------------------


def sliding_field(psvf: PSVF, q) -> tuple[float, float, float]:
    """Convex combination s*Z+ + (1-s)*Z- with s = Z-f / (Z-f - Z+f).

    Its Lie derivative of f vanishes at q, so the motion is tangent to
    the switching manifold.
    """
    a = lie_derivative(psvf.zplus, psvf.f).eval(q)
    b = lie_derivative(psvf.zminus, psvf.f).eval(q)
    if abs(b - a) < 1e-12:
        raise ValueError("sliding combination degenerate")
    s = b / (b - a)
    vp = psvf.zplus.eval(q)
    vm = psvf.zminus.eval(q)
    return tuple(s * vp[i] + (1.0 - s) * vm[i] for i in range(3))


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------


def _rk4_step(fun, q, h):
    k1 = fun(q)
    k2 = fun(tuple(q[i] + 0.5 * h * k1[i] for i in range(3)))
    k3 = fun(tuple(q[i] + 0.5 * h * k2[i] for i in range(3)))
    k4 = fun(tuple(q[i] + h * k3[i] for i in range(3)))
    return tuple(
        q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        for i in range(3)
    )


class _Run:
    """Mutable integration state shared by the regime advancers."""

    def __init__(self, psvf, q0, opts, exact_hint, initial_regime):
        self.psvf = psvf
        self.opts = opts
        self.exact_hint = exact_hint
        self.q = q0
        self.t = 0.0
        self.segments: list[TrajectorySegment] = []
        self.events: list[Event] = []
        self.done = False
        self.regime = self._initial_regime(initial_regime)

    # -- helpers -----------------------------------------------------------

    def f_at(self, q) -> float:
        return self.psvf.f.eval(q)

    def field_for(self, regime: Regime) -> SmoothField3:
        return self.psvf.zplus if regime is Regime.UPPER else self.psvf.zminus

    def emit(self, kind: EventKind, t=None, q=None):
        self.events.append(Event(self.t if t is None else t,
                                 self.q if q is None else q, kind))

    def budget_left(self) -> bool:
        return (
            not self.done
            and self.t < self.opts.t_max - 1e-12
            and len(self.events) < self.opts.max_events
            and self.opts.box.contains(self.q, slack=1e-9)
        )

    def _initial_regime(self, initial_regime) -> Regime:
        fv = self.f_at(self.q)
        if abs(fv) >= ON_SIGMA_TOL:
            return Regime.UPPER if fv > 0 else Regime.LOWER
        label = classify_region(self.psvf, self.q)
        if label is RegionLabel.SLIDING:
            return Regime.SLIDING
        if label is RegionLabel.CROSSING_UP:
            return Regime.UPPER
        if label is RegionLabel.CROSSING_DOWN:
            return Regime.LOWER
        if label is RegionLabel.ESCAPING:
            # forward uniqueness already lost at the start: take the
            # caller's zone (defaulting to upper) and log the ambiguity
            self.emit(EventKind.ESCAPE_START)
            return initial_regime or Regime.UPPER
        # starting on a tangency line
        nxt = self._after_tangency(log_hit=False)
        if nxt is None:
            self.done = True
            return initial_regime or Regime.UPPER
        return nxt

    # -- manifold hit resolution ------------------------------------------

    def _after_tangency(self, log_hit=True) -> Regime | None:
        """Continuation regime after a tangency hit, or None to stop."""
        if log_hit:
            self.emit(EventKind.TANGENCY_HIT)
        a = lie_derivative(self.psvf.zplus, self.psvf.f).eval(self.q)
        b = lie_derivative(self.psvf.zminus, self.psvf.f).eval(self.q)
        upper_tangent = abs(a) <= 1e-9
        lower_tangent = abs(b) <= 1e-9
        if upper_tangent and lower_tangent:
            self.emit(EventKind.STOP)
            return None
        tangent_side = Side.UPPER if upper_tangent else Side.LOWER
        tangent_field = self.psvf.zplus if upper_tangent else self.psvf.zminus
        contact = classify_contact(tangent_field, self.psvf.f, self.q, tangent_side)
        if contact.kind == "fold_visible":
            return Regime.UPPER if upper_tangent else Regime.LOWER
        if contact.kind == "fold_invisible":
            return self._regime_from_probe_ahead(tangent_field)
        # cusp or degenerate: distinguished arc, not a through-route
        self.emit(EventKind.STOP)
        return None

    def _regime_from_probe_ahead(self, tangent_field) -> Regime | None:
        # probe the region label infinitesimally ahead along the tangent
        # field's motion, which runs along the switching manifold here
        v = tangent_field.eval(self.q)
        nv = math.sqrt(sum(c * c for c in v))
        if nv == 0.0:
            self.emit(EventKind.STOP)
            return None
        h = 1e-5
        from .signature import _project_to_sigma

        ahead = _project_to_sigma(
            self.psvf,
            tuple(self.q.as_tuple()[i] + h * v[i] / nv for i in range(3)),
        )
        label = classify_region(self.psvf, ahead)
        if label is RegionLabel.SLIDING:
            self.emit(EventKind.SLIDE_ENTER)
            return Regime.SLIDING
        if label is RegionLabel.CROSSING_UP:
            return Regime.UPPER
        if label is RegionLabel.CROSSING_DOWN:
            return Regime.LOWER
        self.emit(EventKind.STOP)
        return None

    def resolve_hit(self) -> Regime | None:
        label = classify_region(self.psvf, self.q)
        if label is RegionLabel.CROSSING_UP:
            if self.regime is not Regime.UPPER:
                self.emit(EventKind.CROSS_UP)
            return Regime.UPPER
        if label is RegionLabel.CROSSING_DOWN:
            if self.regime is not Regime.LOWER:
                self.emit(EventKind.CROSS_DOWN)
            return Regime.LOWER
        if label is RegionLabel.SLIDING:
            self.emit(EventKind.SLIDE_ENTER)
            return Regime.SLIDING
        if label is RegionLabel.ESCAPING:
            self.emit(EventKind.STOP)
            return None
        return self._after_tangency()

    # -- zone advance ------------------------------------------------------

    def advance_zone(self):
        side = Side.UPPER if self.regime is Regime.UPPER else Side.LOWER
        t_rem = self.opts.t_max - self.t
        if self.exact_hint is not None:
            hit_t = self._exact_hit_time(side, t_rem)
            sampler = self._exact_sampler(side)
        else:
            hit_t = None  # located on the fly while stepping
            sampler = None
        seg = TrajectorySegment(self.regime, self.t, self.t, [(self.t, self.q)])
        if sampler is not None:
            self._march_exact(seg, sampler, hit_t, t_rem)
        else:
            self._march_rk4(seg, side, t_rem)
        self.segments.append(seg)

    def _exact_hit_time(self, side, t_rem):
        sv, lam = self.exact_hint
        coeffs = flow_z_coeffs(sv, lam, side, self.q)
        if abs(coeffs[0]) <= 1e-15:
            # departure from the manifold: the constant term is roundoff,
            # so deflate the exact root at t = 0 instead of re-finding it
            coeffs = coeffs[1:]
        try:
            roots = [r for r in roots_univariate(coeffs, 0.0, t_rem) if r > _T_SKIP]
        except DegenerateEventError:
            return None
        return roots[0] if roots else None

    def _exact_sampler(self, side):
        sv, lam = self.exact_hint
        q0 = self.q

        def sampler(dt):
            return flow_exact(sv, lam, side, q0, dt)

        return sampler

    def _march_exact(self, seg, sampler, hit_t, t_rem):
        horizon = hit_t if hit_t is not None else t_rem
        dt = self.opts.step
        n = int(horizon / dt)
        for i in range(1, n + 1):
            tau = i * dt
            if tau >= horizon - 1e-15:
                break
            q = sampler(tau)
            if not self.opts.box.contains(q, slack=1e-9):
                self._finish_at(seg, tau, q, boxed_out=True)
                return
            seg.samples.append((self.t + tau, q))
        q_end = sampler(horizon)
        if not self.opts.box.contains(q_end, slack=1e-9):
            self._finish_at(seg, horizon, q_end, boxed_out=True)
            return
        seg.samples.append((self.t + horizon, q_end))
        seg.t_end = self.t + horizon
        self.t, self.q = seg.t_end, q_end
        if hit_t is None:
            self.done = True
        else:
            self.regime = self._handle_hit_or_stop()

    def _march_rk4(self, seg, side, t_rem):
        fun = self.field_for(self.regime).eval
        # zone sign: upper regime requires f >= -tol, lower f <= tol
        zone_sign = 1.0 if side is Side.UPPER else -1.0
        q = self.q.as_tuple()
        tau = 0.0
        left_zone = False
        while tau < t_rem - 1e-15:
            h = min(self.opts.step, t_rem - tau)
            q_new = _rk4_step(fun, q, h)
            if any(not math.isfinite(c) for c in q_new):
                raise FloatingPointError("integration step produced non-finite values")
            f_new = self.f_at(q_new)
            if zone_sign * f_new < -ON_SIGMA_TOL and tau + h > _T_SKIP:
                h_cross = self._bisect_crossing(fun, q, h, zone_sign)
                q_new = _rk4_step(fun, q, h_cross)
                tau += h_cross
                seg.samples.append((self.t + tau, Point3(*q_new)))
                seg.t_end = self.t + tau
                self.t, self.q = seg.t_end, Point3(*q_new)
                left_zone = True
                break
            tau += h
            q = q_new
            pt = Point3(*q)
            if not self.opts.box.contains(pt, slack=1e-9):
                self._finish_at(seg, tau, pt, boxed_out=True)
                return
            seg.samples.append((self.t + tau, pt))
        if left_zone:
            self.regime = self._handle_hit_or_stop()
        else:
            seg.t_end = self.t + tau
            self.t = seg.t_end
            self.q = Point3(*q)
            self.done = True

    def _bisect_crossing(self, fun, q, h, zone_sign):
        f0 = self.f_at(q)
        # the previous accepted sample may already sit on the manifold
        if abs(f0) <= ON_SIGMA_TOL or zone_sign * f0 < 0.0:
            return 0.0
        lo, hi = 0.0, h
        while hi - lo > EVENT_TIME_TOL:
            mid = 0.5 * (lo + hi)
            fm = self.f_at(_rk4_step(fun, q, mid))
            if zone_sign * fm <= 0.0:
                hi = mid
            else:
                lo = mid
        return hi

    def _finish_at(self, seg, tau, q, boxed_out=False):
        # a box exit ends the run without an event: event points are
        # required to lie on the switching manifold, and this one does not
        del boxed_out
        seg.samples.append((self.t + tau, q))
        seg.t_end = self.t + tau
        self.t, self.q = seg.t_end, q
        self.done = True

    def _handle_hit_or_stop(self):
        nxt = self.resolve_hit()
        if nxt is None:
            self.done = True
            return self.regime
        return nxt

    # -- sliding advance ---------------------------------------------------

    def advance_sliding(self):
        from .signature import _project_to_sigma

        psvf = self.psvf
        lp = lie_derivative(psvf.zplus, psvf.f)
        lm = lie_derivative(psvf.zminus, psvf.f)

        def fun(q):
            return sliding_field(psvf, q)

        seg = TrajectorySegment(Regime.SLIDING, self.t, self.t, [(self.t, self.q)])
        q = self.q.as_tuple()
        tau = 0.0
        t_rem = self.opts.t_max - self.t
        exited = False
        while tau < t_rem - 1e-15:
            h = min(self.opts.step, t_rem - tau)
            q_new = _rk4_step(fun, q, h)
            q_new = _project_to_sigma(psvf, q_new).as_tuple()
            a, b = lp.eval(q_new), lm.eval(q_new)
            if a >= -1e-12 or b <= 1e-12:
                h_exit, q_exit, exit_upper = self._bisect_slide_exit(fun, q, h, lp, lm)
                tau += h_exit
                pt = Point3(*q_exit)
                seg.samples.append((self.t + tau, pt))
                seg.t_end = self.t + tau
                self.t, self.q = seg.t_end, pt
                self.emit(EventKind.SLIDE_EXIT)
                self.regime = Regime.UPPER if exit_upper else Regime.LOWER
                exited = True
                break
            tau += h
            q = q_new
            pt = Point3(*q)
            if not self.opts.box.contains(pt, slack=1e-9):
                self._finish_at(seg, tau, pt, boxed_out=True)
                self.segments.append(seg)
                return
            seg.samples.append((self.t + tau, pt))
        if not exited:
            seg.t_end = self.t + tau
            self.t = seg.t_end
            self.q = Point3(*q)
            self.done = True
        self.segments.append(seg)

    def _bisect_slide_exit(self, fun, q, h, lp, lm):
        from .signature import _project_to_sigma

        def probe(step):
            qq = _project_to_sigma(self.psvf, _rk4_step(fun, q, step)).as_tuple()
            return qq, lp.eval(qq), lm.eval(qq)

        lo, hi = 0.0, h
        while hi - lo > EVENT_TIME_TOL:
            mid = 0.5 * (lo + hi)
            _, a, b = probe(mid)
            if a >= -1e-12 or b <= 1e-12:
                hi = mid
            else:
                lo = mid
        q_exit, a, b = probe(hi)
        exit_upper = abs(a) <= abs(b)  # the field that just turned tangent departs
        return hi, q_exit, exit_upper


def integrate(psvf: PSVF, q0: Point3, opts: IntegratorOptions,
              exact_hint: tuple[SignVector, float] | None = None,
              initial_regime: Regime | None = None) -> Trajectory:
    """Event-driven hybrid integration from q0 until t_max, event budget
    exhaustion, or box exit."""
    run = _Run(psvf, q0, opts, exact_hint, initial_regime)
    while run.budget_left():
        if run.regime is Regime.SLIDING:
            run.advance_sliding()
        else:
            run.advance_zone()
    return Trajectory(segments=run.segments, events=run.events)


def residual_check(traj: Trajectory, psvf: PSVF) -> float:
    """Max |finite-difference velocity - governing field| over interior samples."""
    worst = 0.0
    for seg in traj.segments:
        samples = seg.samples
        if len(samples) < 3:
            continue
        if seg.regime is Regime.SLIDING:
            def gov(q):
                return sliding_field(psvf, q)
        else:
            fld = psvf.zplus if seg.regime is Regime.UPPER else psvf.zminus
            gov = fld.eval
        for i in range(1, len(samples) - 1):
            t0, p0 = samples[i - 1]
            t1, p1 = samples[i]
            t2, p2 = samples[i + 1]
            dt = t2 - t0
            if dt <= 0:
                continue
            # central differencing needs symmetric spacing; the partial
            # step next to a refined event time would swamp the estimate
            if abs((t1 - t0) - (t2 - t1)) > 1e-9 * dt:
                continue
            vel = tuple((b - a) / dt for a, b in zip(p0.as_tuple(), p2.as_tuple()))
            ref = gov(p1)
            worst = max(worst, max(abs(vel[j] - ref[j]) for j in range(3)))
    return worst
