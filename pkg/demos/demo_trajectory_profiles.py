"""
Smooth legs from closed-form quintics
=====================================

Each flight leg is a fifth-order polynomial per axis: position, velocity,
and acceleration are all continuous, and the coefficients come from one
3x3 solve instead of an optimizer. This script plans a leg, shows its
speed profile, and demonstrates horizon rescaling when a leg would break
the vehicle limits.
"""

import numpy as np

from activesearch import (
    AxisBoundary,
    check_limits,
    evaluate,
    minimal_horizon,
    plan_leg,
    rescale_time,
)

# Plan a rest-to-rest leg from (0, 0) to (80, 35) under 10 m/s and 5 m/s^2.
# Both axes share one horizon so the vehicle arrives in a straight motion
# profile on each axis simultaneously.
seg_x, seg_y, horizon = plan_leg((0.0, 0.0), (80.0, 35.0), v_max=10.0, a_max=5.0)
print(f"shared horizon: {horizon:.2f} s")

# Limits are enforced per axis, matching the per-axis planning model.
ts = np.linspace(0.0, horizon, 9)
print("\n  t      x       y      vx      vy")
for t in ts:
    sx = evaluate(seg_x, t)
    sy = evaluate(seg_y, t)
    print(f"{t:5.1f}  {sx.position:6.1f}  {sy.position:6.1f}  {sx.velocity:6.2f}  {sy.velocity:6.2f}")

for name, seg in (("x", seg_x), ("y", seg_y)):
    report = check_limits(seg, 10.0, 5.0)
    print(f"{name} axis worst |v| = {report.worst_v:.2f} m/s, worst |a| = {report.worst_a:.2f} m/s^2")

# Ask for the same move in an impossibly short horizon and let the library
# stretch it until the limits hold again.
rushed = AxisBoundary(p0=0.0, v0=0.0, a0=0.0, pf=80.0, vf=0.0, af=0.0, T=2.0)
fixed = rescale_time(rushed, v_max=10.0, a_max=5.0)
peak = check_limits(fixed, 10.0, 5.0)
print(f"\nrushed 2.0 s request stretched to {fixed.T:.2f} s")
print(f"after rescale: worst |v| = {peak.worst_v:.2f}, worst |a| = {peak.worst_a:.2f}")

# The minimal feasible horizon is available in closed form as well.
t_min = minimal_horizon(80.0, v_max=10.0, a_max=5.0)
print(f"closed-form minimal horizon for the same 80 m move: {t_min:.2f} s")
