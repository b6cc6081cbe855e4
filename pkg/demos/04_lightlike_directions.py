#!/usr/bin/env python3
"""Admissible approach directions at a lightlike singular point.

For a graph surface z = f(u, v) in R^{2,1}, a point where |grad f| = 1
has a lightlike tangent plane and the induced metric degenerates.  A
curve can reach such a point with a well-defined tangent only along
finitely many directions, determined by the gradient and Hessian of f
there: at most six angles, always including the lightlike pair.

``admissible_directions`` computes them from the local jet;
``maximal_enneper_lightlike_data`` extracts such a jet from the maximal
Enneper surface, whose singular set is the chart circle u^2 + v^2 = 1.
"""

import math

from magsurf import (
    LightlikePointData,
    direction_report,
    maximal_enneper_lightlike_data,
    normalize_frame,
)


def show(label: str, data: LightlikePointData) -> None:
    rep = direction_report(data)
    degs = ", ".join(f"{math.degrees(a):7.2f}" for a in rep.angles)
    print(f"{label}")
    print(f"  case            {rep.case}")
    print(f"  angles (deg)    [{degs}]")
    pair = ", ".join(f"{math.degrees(a):7.2f}" for a in rep.lightlike_pair)
    print(f"  lightlike pair  [{pair}]")


# Worked jets (gradient already unit length, frame already normalized).
show("pure mixed Hessian f_uv = 1",
     LightlikePointData(point=(0, 0), gradient=(1, 0), hessian=(0, 1, 0)))
show("\ndefinite Hessian (no transversal roots)",
     LightlikePointData(point=(0, 0), gradient=(1, 0), hessian=(1, 0, 1)))
show("\nindefinite Hessian (full count of six)",
     LightlikePointData(point=(0, 0), gradient=(1, 0), hessian=(-1, 0.3, 1)))

# The answer is frame-covariant: expressing the same jet in a rotated
# parameter frame rotates the lightlike pair but leaves the
# normalized-frame angles unchanged.
alpha = 0.7
ca, sa = math.cos(alpha), math.sin(alpha)
fuu, fuv, fvv = -1.0, 0.3, 1.0
# gradient and Hessian transformed by the rotation (u,v) -> R(u,v)
grad_rot = (ca, sa)
hess_rot = (
    ca * ca * fuu - 2 * ca * sa * fuv + sa * sa * fvv,
    ca * sa * (fuu - fvv) + (ca * ca - sa * sa) * fuv,
    sa * sa * fuu + 2 * ca * sa * fuv + ca * ca * fvv,
)
data = LightlikePointData(point=(0, 0), gradient=grad_rot, hessian=hess_rot)
phi, normalized = normalize_frame(data)
print(f"\nrotated input frame: normalize_frame undoes phi = {phi:+.4f} rad")
show("same jet seen from a frame rotated by 0.7 rad", data)

# A genuine surface: the maximal Enneper graph at the singular circle.
# Second derivatives blow up there, so the jet uses a finite-scale
# least-squares fit; the directions are an empirical, scale-tagged answer.
data = maximal_enneper_lightlike_data(chart_point=(1.0, 0.0))
print(f"\nmaximal Enneper at chart point (1, 0):")
print(f"  fitted gradient  ({data.gradient[0]:+.6f}, {data.gradient[1]:+.6f})")
print(f"  fitted Hessian   f_uu = {data.hessian[0]:+.4e}, "
      f"f_uv = {data.hessian[1]:+.4e}, f_vv = {data.hessian[2]:+.4e}")
show("directions from the fitted jet", data)
