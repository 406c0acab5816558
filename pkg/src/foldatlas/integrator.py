"""Event-located numerical integration: the independent ground truth.

Free flights in either half-space use an explicit adaptive Dormand-Prince
5(4) pair with PI step-size control; surface hits are localized by sign
bracketing plus a hybrid secant/bisection refinement whose candidate states
are re-integrated (not interpolated), down to ``event_tol`` in |z|.

The fold maps and the first-return map realized here are compared against
their closed-form counterparts by the verification suites; nothing in this
module consults those formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebra import lie_derivative
from .errors import IntegrationFailure, PreconditionError
from .system import DEFAULT_BOX

# Dormand-Prince 5(4) tableau (FSAL).
_DP_A = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_DP_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_DP_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    event_tol: float = 1e-12
    max_time: float = 100.0
    box: object = DEFAULT_BOX
    max_steps: int = 50000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "event_tol", "max_time"):
            if getattr(self, name) <= 0.0:
                raise PreconditionError(f"{name} must be positive")
        if self.max_steps <= 0:
            raise PreconditionError("max_steps must be positive")


class FlightStatus(Enum):
    HIT_SIGMA = "hit-sigma"
    LEFT_BOX = "left-box"
    TIME_OUT = "time-out"
    NO_RETURN = "no-return"
    STEP_LIMIT = "step-limit"


@dataclass
class FlightResult:
    status: FlightStatus
    point: tuple | None = None
    time: float = 0.0
    samples: list | None = None

    def ok(self):
        return self.status is FlightStatus.HIT_SIGMA


# ---------------------------------------------------------------------------
# Core stepper


def _stage(y, h, ks, coeffs):
    return tuple(
        yi + h * sum(c * k[i] for c, k in zip(coeffs, ks))
        for i, yi in enumerate(y)
    )


def _rk_step(f, y, h, k1):
    """One Dormand-Prince step: returns (y_new, k_last, error_vector)."""
    ks = [k1]
    for row in _DP_A:
        ks.append(f(*_stage(y, h, ks, row)))
    y_new = _stage(y, h, ks, _DP_B)
    ks.append(f(*y_new))
    err = tuple(
        h * sum(e * k[i] for e, k in zip(_DP_E, ks)) for i in range(len(y))
    )
    return y_new, ks[6], err


def _error_norm(err, y, y_new, atol, rtol):
    acc = 0.0
    for e, a, b in zip(err, y, y_new):
        scale = atol + rtol * max(abs(a), abs(b))
        r = e / scale
        acc += r * r
    return math.sqrt(acc / len(err))


class _Event:
    """Terminal event g(y) = 0 detected by sign change between steps.

    Arming suppresses the trivial root at the start of a flight: the event
    only fires after |g| once exceeded ``arm_eps`` (with the sign of
    ``expected_sign`` when given).  For excursions whose peak |g| stays below
    the arming threshold, a value on the far side (opposite to
    ``expected_sign``) still fires, so unresolvably shallow arcs terminate at
    the correct crossing instead of escaping.
    """

    __slots__ = ("name", "fn", "arm_eps", "expected_sign", "armed", "last")

    def __init__(self, name, fn, arm_eps, expected_sign=0):
        self.name = name
        self.fn = fn
        self.arm_eps = arm_eps
        self.expected_sign = expected_sign
        self.armed = False
        self.last = 0.0

    def observe_initial(self, y):
        v = self.fn(y)
        self.last = v
        self.armed = abs(v) > self.arm_eps and (
            self.expected_sign == 0 or v * self.expected_sign > 0
        )


def _eval_within_step(f, y_left, k_left, dt, atol, rtol, depth=0):
    """State at offset ``dt`` from the bracket start, by error-controlled
    re-integration (split recursively until the embedded estimate passes)."""
    y_new, _, err = _rk_step(f, y_left, dt, k_left)
    if depth >= 18 or dt < 1e-15:
        return y_new
    if _error_norm(err, y_left, y_new, atol, rtol) <= 1.0:
        return y_new
    mid = _eval_within_step(f, y_left, k_left, dt / 2.0, atol, rtol, depth + 1)
    return _eval_within_step(f, mid, f(*mid), dt / 2.0, atol, rtol, depth + 1)


def _refine_event(f, event, y_left, k_left, h, g_right, cfg):
    """Locate the event inside an accepted step by secant/bisection.

    Every candidate is an actual re-integrated state; the interpolation-free
    scheme keeps |g| at the located point near machine level, well inside
    ``event_tol``.
    """
    lo, hi = 0.0, h
    g_lo, g_hi = event.last, g_right
    if g_lo > 0.0:
        lo_sign = 1.0
    elif g_lo < 0.0:
        lo_sign = -1.0
    else:
        lo_sign = float(event.expected_sign) or -math.copysign(1.0, g_right)
    # First candidate from the secant through the bracket endpoints.
    dt = h * g_lo / (g_lo - g_hi) if g_lo != g_hi else 0.5 * h
    best = None
    prev = (0.0, g_lo)
    target = cfg.event_tol
    stretch_goal = 1e-3 * cfg.event_tol
    for it in range(80):
        dt = min(max(dt, lo + 0.02 * (hi - lo)), hi - 0.02 * (hi - lo))
        y_c = _eval_within_step(f, y_left, k_left, dt, cfg.abs_tol, cfg.rel_tol)
        v = event.fn(y_c)
        if best is None or abs(v) < abs(best[2]):
            best = (dt, y_c, v)
        if abs(v) <= stretch_goal:
            break
        if v * lo_sign > 0.0:
            lo, g_lo = dt, v
        else:
            hi, g_hi = dt, v
        if hi - lo <= 1e-16 * max(1.0, h):
            break
        if v != prev[1]:
            cand = dt - v * (dt - prev[0]) / (v - prev[1])
        else:
            cand = 0.5 * (lo + hi)
        prev = (dt, v)
        if not (lo < cand < hi) or it % 4 == 3:
            cand = 0.5 * (lo + hi)
        dt = cand
    if best is None or abs(best[2]) > target:
        # Fall back to pure bisection until the target is met.
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            y_c = _eval_within_step(f, y_left, k_left, mid, cfg.abs_tol, cfg.rel_tol)
            v = event.fn(y_c)
            if best is None or abs(v) < abs(best[2]):
                best = (mid, y_c, v)
            if abs(v) <= target or hi - lo <= 1e-16 * max(1.0, h):
                break
            if v * lo_sign > 0.0:
                lo, g_lo = mid, v
            else:
                hi, g_hi = mid, v
    return best


@dataclass
class _Outcome:
    status: str  # "event" | "left-box" | "time-out" | "step-limit"
    t: float
    y: tuple
    event: str | None = None


def _integrate(f, y0, cfg, events, t_limit, outside=None, h0=None, collect=None):
    """Drive the stepper until an event, a guard violation, or the horizon."""
    y = tuple(float(v) for v in y0)
    k1 = f(*y)
    t = 0.0
    h = h0 if h0 else min(1e-4, 0.25 * t_limit)
    err_prev = 1.0
    for ev in events:
        ev.observe_initial(y)
    if collect is not None:
        collect.append((t, y))
    steps = 0
    while True:
        if t_limit - t <= 1e-15 * max(1.0, t_limit):
            return _Outcome("time-out", t, y)
        steps += 1
        if steps > cfg.max_steps:
            return _Outcome("step-limit", t, y)
        h = min(h, t_limit - t)
        if h < 1e-15:
            return _Outcome("time-out", t, y)
        y_new, k_last, err = _rk_step(f, y, h, k1)
        err_norm = _error_norm(err, y, y_new, cfg.abs_tol, cfg.rel_tol)
        if err_norm > 1.0:
            h *= max(0.2, 0.9 * err_norm ** -0.2)
            continue
        # Event scan on the accepted step.
        hit = None
        for ev in events:
            v = ev.fn(y_new)
            if not ev.armed:
                aligned = ev.expected_sign == 0 or v * ev.expected_sign > 0
                if abs(v) > ev.arm_eps and aligned:
                    ev.armed = True
                    ev.last = v
                elif ev.expected_sign != 0 and v * ev.expected_sign < 0 and v != 0.0:
                    # shallow arc crossed the surface without ever arming
                    found = _refine_event(f, ev, y, k1, h, v, cfg)
                    if found is not None and (hit is None or found[0] < hit[1]):
                        hit = (ev, found[0], found[1])
                else:
                    ev.last = v
                continue
            if ev.last * v <= 0.0 and (ev.last != 0.0 or v != 0.0):
                found = _refine_event(f, ev, y, k1, h, v, cfg)
                if found is not None and (hit is None or found[0] < hit[1]):
                    hit = (ev, found[0], found[1])
            ev.last = v
        if hit is not None:
            ev, dt, y_ev = hit
            t_ev = t + dt
            if collect is not None:
                collect.append((t_ev, y_ev))
            return _Outcome("event", t_ev, y_ev, event=ev.name)
        if outside is not None and outside(y_new):
            if collect is not None:
                collect.append((t + h, y_new))
            return _Outcome("left-box", t + h, y_new)
        t += h
        y = y_new
        k1 = k_last
        if collect is not None:
            collect.append((t, y))
        # PI controller on the accepted step.
        factor = 0.9 * err_norm ** -0.14 * err_prev ** 0.08 if err_norm > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
        err_prev = max(err_norm, 1e-10)


# ---------------------------------------------------------------------------
# Flights to the switching plane


def _guard_outside(center, radius):
    cx, cy, cz = center

    def outside(y):
        return (
            abs(y[0] - cx) > radius
            or abs(y[1] - cy) > radius
            or abs(y[2] - cz) > radius
        )

    return outside


def integrate_to_sigma(field, q0, direction, cfg=None, collect=False, h0=None):
    """First return of the orbit through ``q0`` (on {z=0}) to the plane.

    ``direction`` is +1 for an excursion into {z > 0}, -1 for {z < 0}.  If
    the field points into the opposite half-space at ``q0`` (judged by the
    z-component, or by its derivative along the field when that is zero) the
    flight fails with NO_RETURN.  LEFT_BOX and TIME_OUT report orbits that
    escape or stall without returning.
    """
    cfg = cfg or IntegratorConfig()
    scale = 1.0 + field.coeff_scale()
    tol = 1e-9 * scale
    if abs(q0[2]) > tol:
        raise PreconditionError("flight must start on the switching plane")
    s = field.cz.eval_at(q0)
    if s * direction < -tol:
        return FlightResult(FlightStatus.NO_RETURN, time=0.0)
    if abs(s) <= tol:
        s2 = lie_derivative(field, field.cz).eval_at(q0)
        if s2 * direction < tol:
            return FlightResult(FlightStatus.NO_RETURN, time=0.0)
    f = field.compiled()
    ev = _Event("sigma", lambda y: y[2], arm_eps=1e-13, expected_sign=direction)
    samples = [] if collect else None
    radius = 1.5 * max(cfg.box.scale(), 1e-6)
    out = _integrate(
        f,
        (q0[0], q0[1], 0.0),
        cfg,
        [ev],
        t_limit=cfg.max_time,
        outside=_guard_outside((q0[0], q0[1], 0.0), radius),
        h0=h0,
        collect=samples,
    )
    if out.status == "event":
        return FlightResult(FlightStatus.HIT_SIGMA, out.y, out.t, samples)
    status = {
        "left-box": FlightStatus.LEFT_BOX,
        "time-out": FlightStatus.TIME_OUT,
        "step-limit": FlightStatus.STEP_LIMIT,
    }[out.status]
    return FlightResult(status, out.y, out.t, samples)


def _fold_side(system, side):
    if side == "X":
        return system.X, system.x2f, +1
    if side == "Y":
        return system.Y, system.y2f, -1
    raise PreconditionError("side must be 'X' or 'Y'")


def fold_map_numeric(system, side, q, cfg=None):
    """Numeric fold involution on the plane for the chosen field.

    Points on the field's tangency line map to themselves; elsewhere the
    orbit arc through the field's half-space is integrated, forwards or
    backwards in time depending on which side of the tangency line ``q``
    lies.  Failures (visible-fold side, escaping orbits) raise
    :class:`IntegrationFailure`.
    """
    cfg = cfg or IntegratorConfig()
    field, second, halfspace = _fold_side(system, side)
    x, y = float(q[0]), float(q[1])
    point = (x, y, 0.0)
    s = field.cz.eval_at(point)
    tol = 1e-9 * (1.0 + field.coeff_scale())
    if abs(s) <= tol:
        return (x, y)
    forward = (s > 0.0) if side == "X" else (s < 0.0)
    use = field if forward else field.negated()
    s2 = second.eval_at(point)
    h0 = None
    if abs(s2) > 1e-12:
        h0 = max(abs(s) / abs(s2) / 4.0, 1e-12)
    res = integrate_to_sigma(use, point, halfspace, cfg, h0=h0)
    if not res.ok():
        raise IntegrationFailure(
            res.status, f"fold map {side} failed at ({x:.6g}, {y:.6g}): {res.status}"
        )
    return (res.point[0], res.point[1])


def return_map_numeric(system, q, cfg=None):
    """First-return map: fold map of Y followed by fold map of X."""
    cfg = cfg or IntegratorConfig()
    mid = fold_map_numeric(system, "Y", q, cfg)
    return fold_map_numeric(system, "X", mid, cfg)


def inverse_return_map_numeric(system, q, cfg=None):
    """Inverse of the first-return map (the folds applied in reverse order)."""
    cfg = cfg or IntegratorConfig()
    mid = fold_map_numeric(system, "X", q, cfg)
    return fold_map_numeric(system, "Y", mid, cfg)


def jacobian_numeric(map_fn, q, h=1e-3):
    """Central-difference Jacobian of a planar map at ``q``."""
    x, y = float(q[0]), float(q[1])
    fxp = map_fn((x + h, y))
    fxm = map_fn((x - h, y))
    fyp = map_fn((x, y + h))
    fym = map_fn((x, y - h))
    return np.array(
        [
            [(fxp[0] - fxm[0]) / (2 * h), (fyp[0] - fym[0]) / (2 * h)],
            [(fxp[1] - fxm[1]) / (2 * h), (fyp[1] - fym[1]) / (2 * h)],
        ]
    )


# ---------------------------------------------------------------------------
# Filippov trajectories


class Mode(Enum):
    FLOW_PLUS = "flow+"
    FLOW_MINUS = "flow-"
    SLIDING = "sliding"


class SegmentEnd(Enum):
    HIT_SIGMA = "hit-sigma"
    MODE_SWITCH = "mode-switch"
    LEFT_BOX = "left-box"
    TIME_OUT = "time-out"
    REACHED_TANGENCY = "reached-tangency"
    DENOMINATOR_BLOWUP = "denominator-blowup"
    UNSTABLE_SLIDING = "unstable-sliding"
    STEP_LIMIT = "step-limit"


@dataclass
class TrajectorySegment:
    mode: Mode
    times: np.ndarray
    points: np.ndarray  # (n, 3)
    terminal: SegmentEnd


@dataclass
class Trajectory:
    segments: list = field(default_factory=list)
    status: str = ""
    total_time: float = 0.0

    def final_point(self):
        if not self.segments:
            return None
        return tuple(self.segments[-1].points[-1])


_TERMINAL_ENDS = {
    SegmentEnd.LEFT_BOX,
    SegmentEnd.TIME_OUT,
    SegmentEnd.REACHED_TANGENCY,
    SegmentEnd.DENOMINATOR_BLOWUP,
    SegmentEnd.UNSTABLE_SLIDING,
    SegmentEnd.STEP_LIMIT,
}


def _tangency_exit(system, q3, tol):
    """Continuation out of a sliding-boundary point.

    A forward sliding orbit can only leave through a fold line where the
    corresponding field's fold is visible; the exit arc is tangent to the
    plane and belongs to that field.  Anything else (cusp contact, fold-fold
    corner, invisible fold) terminates the trajectory.
    """
    xf = system.xf.eval_at(q3)
    yf = system.yf.eval_at(q3)
    if abs(xf) <= tol and abs(yf) <= tol:
        return None
    if abs(xf) <= tol:
        if system.x2f.eval_at(q3) > tol:
            return Mode.FLOW_PLUS
        return None
    if abs(yf) <= tol:
        if system.y2f.eval_at(q3) < -tol:
            return Mode.FLOW_MINUS
        return None
    return None


def _initial_mode(system, p0, tol):
    z = p0[2]
    if z > tol:
        return Mode.FLOW_PLUS, None
    if z < -tol:
        return Mode.FLOW_MINUS, None
    xf = system.xf.eval_at(p0)
    yf = system.yf.eval_at(p0)
    if abs(xf) <= tol or abs(yf) <= tol:
        mode = _tangency_exit(system, p0, tol)
        return mode, SegmentEnd.REACHED_TANGENCY if mode is None else None
    if xf > tol and yf > tol:
        return Mode.FLOW_PLUS, None
    if xf < -tol and yf < -tol:
        return Mode.FLOW_MINUS, None
    if xf < -tol and yf > tol:
        return Mode.SLIDING, None
    return None, SegmentEnd.UNSTABLE_SLIDING


def filippov_trajectory(system, p0, horizon, cfg=None, max_segments=2000):
    """Piecewise trajectory with free flights, crossings and sliding.

    A negative ``horizon`` integrates the time-reversed system (this is the
    only way unstable sliding is ever entered, matching the forward-time
    convention that trajectories never slide on the unstable side).
    """
    cfg = cfg or IntegratorConfig()
    if horizon < 0:
        rev = filippov_trajectory(
            system.time_reversed(), p0, -horizon, cfg, max_segments
        )
        for seg in rev.segments:
            seg.times = -seg.times
        rev.total_time = -rev.total_time
        return rev

    tol = 1e-9 * (1.0 + system.coeff_scale())
    box = cfg.box
    den_floor = 1e-9 * (1.0 + system.coeff_scale())
    traj = Trajectory()
    p = (float(p0[0]), float(p0[1]), float(p0[2]))
    mode, stop = _initial_mode(system, p, tol)
    if mode is None:
        traj.status = (stop or SegmentEnd.REACHED_TANGENCY).value
        traj.segments.append(
            TrajectorySegment(
                Mode.SLIDING if stop is SegmentEnd.UNSTABLE_SLIDING else Mode.FLOW_PLUS,
                np.array([0.0]),
                np.array([p]),
                stop or SegmentEnd.REACHED_TANGENCY,
            )
        )
        return traj

    t_now = 0.0
    xf_fn = system.xf.compiled()
    yf_fn = system.yf.compiled()
    x_fn = system.X.compiled()
    y_fn = system.Y.compiled()

    def outside_box(y):
        return not box.contains(y)

    while len(traj.segments) < max_segments:
        remaining = horizon - t_now
        if remaining <= 1e-14 * max(1.0, horizon):
            _append_marker(traj, t_now, p, mode, SegmentEnd.TIME_OUT)
            break
        if mode in (Mode.FLOW_PLUS, Mode.FLOW_MINUS):
            fld = system.X if mode is Mode.FLOW_PLUS else system.Y
            samples = []
            side = 1 if mode is Mode.FLOW_PLUS else -1
            ev = _Event("sigma", lambda y: y[2], arm_eps=1e-13, expected_sign=side)
            out = _integrate(
                fld.compiled(),
                p,
                cfg,
                [ev],
                t_limit=remaining,
                outside=outside_box,
                collect=samples,
            )
            seg_end, next_mode = _flight_outcome(system, out, tol)
            _append_segment(traj, t_now, samples, mode, seg_end)
            t_now += out.t
            p = (out.y[0], out.y[1], 0.0 if seg_end is SegmentEnd.MODE_SWITCH else out.y[2])
            if next_mode is None:
                break
            mode = next_mode
        else:  # sliding on {z = 0}
            def f2(u, v):
                xf = xf_fn(u, v, 0.0)
                yf = yf_fn(u, v, 0.0)
                den = yf - xf
                xv = x_fn(u, v, 0.0)
                yv = y_fn(u, v, 0.0)
                return (
                    (yf * xv[0] - xf * yv[0]) / den,
                    (yf * xv[1] - xf * yv[1]) / den,
                )

            arm = 10.0 * max(cfg.event_tol, tol)
            events = [
                _Event("sx", lambda y: xf_fn(y[0], y[1], 0.0), arm_eps=arm),
                _Event("sy", lambda y: yf_fn(y[0], y[1], 0.0), arm_eps=arm),
                _Event(
                    "den",
                    lambda y: yf_fn(y[0], y[1], 0.0) - xf_fn(y[0], y[1], 0.0) - den_floor,
                    arm_eps=0.0,
                ),
            ]
            samples = []
            out = _integrate(
                f2,
                (p[0], p[1]),
                cfg,
                events,
                t_limit=remaining,
                outside=lambda y: not box.contains((y[0], y[1], 0.0)),
                collect=samples,
            )
            samples3 = [(t, (y[0], y[1], 0.0)) for t, y in samples]
            q3 = (out.y[0], out.y[1], 0.0)
            seg_end, next_mode = _sliding_outcome(system, out, q3, tol)
            _append_segment(traj, t_now, samples3, Mode.SLIDING, seg_end)
            t_now += out.t
            p = q3
            if next_mode is None:
                break
            mode = next_mode
    else:
        traj.status = SegmentEnd.STEP_LIMIT.value
        traj.total_time = t_now
        return traj

    traj.status = traj.segments[-1].terminal.value
    traj.total_time = t_now
    return traj


def _flight_outcome(system, out, tol):
    if out.status == "left-box":
        return SegmentEnd.LEFT_BOX, None
    if out.status == "time-out":
        return SegmentEnd.TIME_OUT, None
    if out.status == "step-limit":
        return SegmentEnd.STEP_LIMIT, None
    q3 = (out.y[0], out.y[1], 0.0)
    xf = system.xf.eval_at(q3)
    yf = system.yf.eval_at(q3)
    if abs(xf) <= tol or abs(yf) <= tol:
        exit_mode = _tangency_exit(system, q3, tol)
        if exit_mode is None:
            return SegmentEnd.REACHED_TANGENCY, None
        return SegmentEnd.MODE_SWITCH, exit_mode
    if xf > 0.0 and yf > 0.0:
        return SegmentEnd.MODE_SWITCH, Mode.FLOW_PLUS
    if xf < 0.0 and yf < 0.0:
        return SegmentEnd.MODE_SWITCH, Mode.FLOW_MINUS
    if xf < 0.0 < yf:
        return SegmentEnd.MODE_SWITCH, Mode.SLIDING
    # Unstable sliding cannot be reached by a forward flight; defensive stop.
    return SegmentEnd.UNSTABLE_SLIDING, None


def _sliding_outcome(system, out, q3, tol):
    if out.status == "left-box":
        return SegmentEnd.LEFT_BOX, None
    if out.status == "time-out":
        return SegmentEnd.TIME_OUT, None
    if out.status == "step-limit":
        return SegmentEnd.STEP_LIMIT, None
    if out.event == "den":
        xf = system.xf.eval_at(q3)
        yf = system.yf.eval_at(q3)
        near_tangency = abs(xf) <= 10 * tol and abs(yf) <= 10 * tol
        return (
            SegmentEnd.REACHED_TANGENCY if near_tangency else SegmentEnd.DENOMINATOR_BLOWUP,
            None,
        )
    exit_mode = _tangency_exit(system, q3, tol)
    if exit_mode is None:
        return SegmentEnd.REACHED_TANGENCY, None
    return SegmentEnd.MODE_SWITCH, exit_mode


def _append_segment(traj, t_offset, samples, mode, terminal):
    if not samples:
        return
    times = np.array([t_offset + t for t, _ in samples])
    points = np.array([list(y) for _, y in samples])
    traj.segments.append(TrajectorySegment(mode, times, points, terminal))


def _append_marker(traj, t_now, p, mode, terminal):
    traj.segments.append(
        TrajectorySegment(
            mode or Mode.FLOW_PLUS,
            np.array([t_now]),
            np.array([list(p)]),
            terminal,
        )
    )
