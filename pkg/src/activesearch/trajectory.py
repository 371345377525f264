"""Closed-form quintic (minimum-jerk) trajectories for one axis.

A segment is fully determined by boundary position/velocity/acceleration at
both ends and a horizon T.  The three top polynomial coefficients come from
a 3x3 matrix applied to the boundary deltas; the lower coefficients are the
initial conditions themselves.  Limit checking locates velocity and
acceleration extrema by bracketing the roots of the next derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveHorizon, NumericalFailure, OutOfHorizon, Unreachable

ROOT_SAMPLES = 1000
ROOT_TOL = 1e-10
RESCALE_REL_TOL = 0.01


@dataclass(frozen=True)
class AxisBoundary:
    """Boundary conditions for one axis: start/end position, velocity,
    acceleration, and the horizon T in seconds."""

    p0: float
    v0: float
    a0: float
    pf: float
    vf: float
    af: float
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise NonPositiveHorizon(f"horizon must be positive, got {self.T}")
        for name in ("p0", "v0", "a0", "pf", "vf", "af", "T"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"boundary value {name} must be finite")

    def with_horizon(self, T: float) -> "AxisBoundary":
        return AxisBoundary(self.p0, self.v0, self.a0, self.pf, self.vf, self.af, T)


@dataclass(frozen=True)
class TrajectorySegment:
    """Quintic s(t) = alpha/120 t^5 + kappa/24 t^4 + eta/6 t^3
    + a0/2 t^2 + v0 t + p0, valid on [0, T]."""

    alpha: float
    kappa: float
    eta: float
    a0: float
    v0: float
    p0: float
    T: float

    def position_coeffs(self) -> np.ndarray:
        """Highest-power-first coefficients of s(t)."""
        return np.array(
            [self.alpha / 120.0, self.kappa / 24.0, self.eta / 6.0, self.a0 / 2.0, self.v0, self.p0]
        )

    def velocity_coeffs(self) -> np.ndarray:
        return np.array([self.alpha / 24.0, self.kappa / 6.0, self.eta / 2.0, self.a0, self.v0])

    def acceleration_coeffs(self) -> np.ndarray:
        return np.array([self.alpha / 6.0, self.kappa / 2.0, self.eta, self.a0])

    def jerk_coeffs(self) -> np.ndarray:
        return np.array([self.alpha / 2.0, self.kappa, self.eta])


@dataclass(frozen=True)
class AxisState:
    position: float
    velocity: float
    acceleration: float
    jerk: float


@dataclass(frozen=True)
class LimitReport:
    feasible: bool
    worst_v: float
    worst_a: float


def solve_quintic(b: AxisBoundary) -> TrajectorySegment:
    """Closed-form quintic through the boundary conditions.

    The deltas strip off the free-drift contribution of the initial state;
    the matrix then maps them to the three highest jerk-profile coefficients.
    """
    T = b.T
    dp = b.pf - b.p0 - b.v0 * T - 0.5 * b.a0 * T**2
    dv = b.vf - b.v0 - b.a0 * T
    da = b.af - b.a0
    m = np.array(
        [
            [720.0, -360.0 * T, 60.0 * T**2],
            [-360.0 * T, 168.0 * T**2, -24.0 * T**3],
            [60.0 * T**2, -24.0 * T**3, 3.0 * T**4],
        ]
    )
    alpha, kappa, eta = (m @ np.array([dp, dv, da])) / T**5
    return TrajectorySegment(
        alpha=float(alpha), kappa=float(kappa), eta=float(eta), a0=b.a0, v0=b.v0, p0=b.p0, T=T
    )


def evaluate(seg: TrajectorySegment, t) -> AxisState:
    """Analytic position/velocity/acceleration/jerk at time t (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < -1e-12) or np.any(t_arr > seg.T + 1e-12):
        raise OutOfHorizon(f"t={t} outside [0, {seg.T}]")
    t_arr = np.clip(t_arr, 0.0, seg.T)
    pos = np.polyval(seg.position_coeffs(), t_arr)
    vel = np.polyval(seg.velocity_coeffs(), t_arr)
    acc = np.polyval(seg.acceleration_coeffs(), t_arr)
    jrk = np.polyval(seg.jerk_coeffs(), t_arr)
    if t_arr.ndim == 0:
        return AxisState(float(pos), float(vel), float(acc), float(jrk))
    return AxisState(pos, vel, acc, jrk)


def _bracket_roots(coeffs: np.ndarray, T: float) -> list[float]:
    """Roots of a polynomial on [0, T] by dense sampling plus bisection.

    Sign-change brackets are refined to ROOT_TOL; exact zeros at sample
    points are kept as-is.  Tangential (non-crossing) roots can be missed,
    but those are saddle points of the integral curve, never strict extrema.
    """
    ts = np.linspace(0.0, T, ROOT_SAMPLES + 1)
    vals = np.polyval(coeffs, ts)
    roots: list[float] = []
    for i in range(len(ts) - 1):
        lo, hi = ts[i], ts[i + 1]
        flo, fhi = vals[i], vals[i + 1]
        if flo == 0.0:
            roots.append(float(lo))
            continue
        if flo * fhi < 0.0:
            while hi - lo > ROOT_TOL:
                mid = 0.5 * (lo + hi)
                fmid = float(np.polyval(coeffs, mid))
                if fmid == 0.0:
                    lo = hi = mid
                    break
                if flo * fmid < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            roots.append(0.5 * (lo + hi))
    if vals[-1] == 0.0:
        roots.append(float(ts[-1]))
    return roots


def check_limits(seg: TrajectorySegment, v_max: float, a_max: float) -> LimitReport:
    """Worst |velocity| and |acceleration| on [0, T] versus the limits.

    Velocity extrema sit at acceleration roots, acceleration extrema at jerk
    roots; endpoints are always candidates.  A dense sample of each profile
    is folded in as a safety net against missed brackets.
    """
    if v_max <= 0 or a_max <= 0:
        raise ValueError("limits must be positive")
    ts = np.linspace(0.0, seg.T, ROOT_SAMPLES + 1)

    v_candidates = [0.0, seg.T] + _bracket_roots(seg.acceleration_coeffs(), seg.T)
    worst_v = max(abs(float(np.polyval(seg.velocity_coeffs(), t))) for t in v_candidates)
    worst_v = max(worst_v, float(np.max(np.abs(np.polyval(seg.velocity_coeffs(), ts)))))

    a_candidates = [0.0, seg.T] + _bracket_roots(seg.jerk_coeffs(), seg.T)
    worst_a = max(abs(float(np.polyval(seg.acceleration_coeffs(), t))) for t in a_candidates)
    worst_a = max(worst_a, float(np.max(np.abs(np.polyval(seg.acceleration_coeffs(), ts)))))

    return LimitReport(feasible=(worst_v <= v_max and worst_a <= a_max), worst_v=worst_v, worst_a=worst_a)


def rescale_time(b: AxisBoundary, v_max: float, a_max: float) -> TrajectorySegment:
    """Stretch the horizon until the segment respects both limits.

    Feasible input is returned unchanged.  Otherwise T doubles until
    feasible, then bisection narrows to within 1% of the minimal feasible
    horizon.  Boundary states exceeding the limits are unreachable at any T.
    """
    for v in (b.v0, b.vf):
        if abs(v) > v_max:
            raise Unreachable(f"boundary velocity {v} exceeds limit {v_max}")
    for a in (b.a0, b.af):
        if abs(a) > a_max:
            raise Unreachable(f"boundary acceleration {a} exceeds limit {a_max}")

    seg = solve_quintic(b)
    if check_limits(seg, v_max, a_max).feasible:
        return seg

    t_lo = b.T
    t_hi = b.T
    for _ in range(64):
        t_hi *= 2.0
        seg = solve_quintic(b.with_horizon(t_hi))
        if check_limits(seg, v_max, a_max).feasible:
            break
        t_lo = t_hi
    else:
        raise NumericalFailure("rescale_time found no feasible horizon")

    while (t_hi - t_lo) > RESCALE_REL_TOL * t_hi:
        mid = 0.5 * (t_lo + t_hi)
        if check_limits(solve_quintic(b.with_horizon(mid)), v_max, a_max).feasible:
            t_hi = mid
        else:
            t_lo = mid
    return solve_quintic(b.with_horizon(t_hi))


def wrap_angle(theta: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = theta % (2.0 * math.pi)
    if w > math.pi:
        w -= 2.0 * math.pi
    return w


def minimal_horizon(distance: float, v_max: float, a_max: float) -> float:
    """Heuristic starting horizon for a rest-to-rest move of given length.

    The rest-to-rest quintic peaks at 1.875 d/T velocity and 10/sqrt(3) d/T^2
    acceleration, so this value is already near-minimal and rescale_time
    typically accepts it directly.
    """
    d = abs(distance)
    if d == 0.0:
        return 1e-3
    t_v = 1.875 * d / v_max
    t_a = math.sqrt(10.0 / math.sqrt(3.0) * d / a_max)
    return max(t_v, t_a, 1e-3)


def plan_leg(start, goal, v_max: float, a_max: float) -> tuple[TrajectorySegment, TrajectorySegment, float]:
    """Rest-to-rest x/y segments sharing one horizon.

    The shared horizon is the larger of the two per-axis rescaled horizons;
    stretching a rest-to-rest axis never raises its peaks, so both axes stay
    feasible at the shared value.
    """
    sx, sy = float(start[0]), float(start[1])
    gx, gy = float(goal[0]), float(goal[1])
    horizons = []
    for p0, pf in ((sx, gx), (sy, gy)):
        t0 = minimal_horizon(pf - p0, v_max, a_max)
        seg = rescale_time(AxisBoundary(p0, 0.0, 0.0, pf, 0.0, 0.0, t0), v_max, a_max)
        horizons.append(seg.T)
    shared_t = max(horizons)
    seg_x = solve_quintic(AxisBoundary(sx, 0.0, 0.0, gx, 0.0, 0.0, shared_t))
    seg_y = solve_quintic(AxisBoundary(sy, 0.0, 0.0, gy, 0.0, 0.0, shared_t))
    return seg_x, seg_y, shared_t
