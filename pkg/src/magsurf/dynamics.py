"""Magnetic geodesic right-hand sides in parameter space.

The governing equation (prescribed geodesic curvature) is resolved to
explicit accelerations (u'', v'') by projecting the ambient equation
onto the tangent vector and its 90-degree rotate: the tangential
projection says the speed is conserved, the rotated projection carries
the curvature forcing

    <gamma'', gamma' x n> / |n| = kappa * |gamma'|^2 ,   n = S_u x S_v.

For conformal charts (<S_u,S_v> = 0, |S_u|^2 = |S_v|^2 = f) the solve
collapses to a rotation-like 2x2 system with determinant u'^2 + v'^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ambient import Signature, cross, dot, norm
from .errors import ConformalDegenerateError, SingularSystemError
from .surfaces import KappaField, SurfaceJet, SurfaceSpec, first_fundamental

__all__ = [
    "ParamState",
    "rhs_general",
    "rhs_conformal",
    "rhs",
    "speed_sq",
    "kappa_residual",
]


@dataclass(frozen=True)
class ParamState:
    """Integration state (t, u, v, u', v') in parameter space."""

    t: float
    u: float
    v: float
    du: float
    dv: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.du, self.dv])


def speed_sq(spec: SurfaceSpec, s: ParamState) -> float:
    """Squared ambient speed E u'^2 + 2F u'v' + G v'^2 (conserved)."""
    jet = spec.jet(s.u, s.v)
    E, F, G = first_fundamental(jet, spec.signature)
    return E * s.du * s.du + 2.0 * F * s.du * s.dv + G * s.dv * s.dv


def _gamma_prime(jet: SurfaceJet, s: ParamState) -> np.ndarray:
    return jet.S_u * s.du + jet.S_v * s.dv


def _q_term(jet: SurfaceJet, s: ParamState) -> np.ndarray:
    """Velocity-quadratic part of gamma'': S_uu u'^2 + 2 S_uv u'v' + S_vv v'^2."""
    return jet.S_uu * s.du**2 + 2.0 * jet.S_uv * s.du * s.dv + jet.S_vv * s.dv**2


def rhs_general(spec: SurfaceSpec, kappa: KappaField, s: ParamState) -> tuple[float, float]:
    """Accelerations (u'', v'') from the signature-aware ambient system.

    Raises SingularSystemError at degenerate or lightlike points; this
    is how trajectories refuse to continue into singular sets.
    """
    # Fully scalar evaluation: this is the integrator's innermost call,
    # and length-3 numpy temporaries dominate its cost otherwise.
    sig = spec.signature
    eps = -1.0 if sig is Signature.LORENTZIAN else 1.0
    jet = spec.jet(s.u, s.v)
    du, dv = s.du, s.dv
    sux, suy, suz = jet.S_u
    svx, svy, svz = jet.S_v
    gx = sux * du + svx * dv
    gy = suy * du + svy * dv
    gz = suz * du + svz * dv
    uu, uv, vv = du * du, 2.0 * du * dv, dv * dv
    qx = jet.S_uu[0] * uu + jet.S_uv[0] * uv + jet.S_vv[0] * vv
    qy = jet.S_uu[1] * uu + jet.S_uv[1] * uv + jet.S_vv[1] * vv
    qz = jet.S_uu[2] * uu + jet.S_uv[2] * uv + jet.S_vv[2] * vv
    # n = S_u x S_v and w = gamma' x n; the Lorentzian cross product
    # flips the third component relative to the Euclidean one.
    nx = suy * svz - suz * svy
    ny = suz * svx - sux * svz
    nz = eps * (sux * svy - suy * svx)
    n_norm = math.sqrt(abs(nx * nx + ny * ny + eps * nz * nz))
    wx = gy * nz - gz * ny
    wy = gz * nx - gx * nz
    wz = eps * (gx * ny - gy * nx)

    c = gx * gx + gy * gy + eps * gz * gz
    a11 = sux * gx + suy * gy + eps * suz * gz
    a12 = svx * gx + svy * gy + eps * svz * gz
    a21 = sux * wx + suy * wy + eps * suz * wz
    a22 = svx * wx + svy * wy + eps * svz * wz
    b1 = -(qx * gx + qy * gy + eps * qz * gz)
    b2 = kappa(s.u, s.v) * c * n_norm - (qx * wx + qy * wy + eps * qz * wz)
    det = a11 * a22 - a12 * a21
    scale = max(abs(a11), abs(a12), abs(a21), abs(a22)) ** 2
    if abs(det) < 1e-12 * max(scale, 1e-300):
        raise SingularSystemError(
            f"acceleration solve singular at (u, v) = ({s.u}, {s.v}): |det| = {abs(det):.3e}"
        )
    ddu = (b1 * a22 - b2 * a12) / det
    ddv = (a11 * b2 - a21 * b1) / det
    return float(ddu), float(ddv)


def rhs_conformal(spec: SurfaceSpec, kappa: KappaField, s: ParamState) -> tuple[float, float]:
    """Fast path for conformal charts.

    Row (i) differentiates the conserved speed c = (u'^2+v'^2) f;
    row (ii) is the curvature equation rearranged to u''v' - v''u' = P.
    In the Lorentzian signature the triple-product identity behind P
    flips sign, so the curvature row is negated there.
    """
    cf = spec.conformal
    if cf is None:
        raise ValueError(f"surface {spec.name!r} has no conformal metadata")
    u, v, du, dv = s.u, s.v, s.du, s.dv
    f = cf.f(u, v)
    if f <= 1e-14:
        raise ConformalDegenerateError(
            f"conformal factor {f:.3e} at (u, v) = ({u}, {v})"
        )
    fu = cf.f_u(u, v)
    fv = cf.f_v(u, v)
    vel2 = du * du + dv * dv
    if vel2 == 0.0:
        raise SingularSystemError("zero parameter velocity")
    c = vel2 * f
    q0 = -vel2 * (fu * du + fv * dv) / (2.0 * f)
    # The magnetic forcing couples through gamma' x n, whose conformal
    # expansion flips sign under the Lorentzian cross product; the
    # geodesic part depends only on the intrinsic metric f and does not.
    kappa_sign = -1.0 if spec.signature is Signature.LORENTZIAN else 1.0
    p = (
        kappa_sign * c * kappa(u, v)
        + du**3 * cf.sv_suu(u, v)
        - dv**3 * cf.su_svv(u, v)
        + 0.5 * du * du * dv * fu
        - 0.5 * dv * dv * du * fv
    ) / f
    ddu = (q0 * du + p * dv) / vel2
    ddv = (q0 * dv - p * du) / vel2
    return float(ddu), float(ddv)


def rhs(spec: SurfaceSpec, kappa: KappaField, s: ParamState) -> tuple[float, float]:
    """Conformal path when metadata is available, general otherwise."""
    if spec.conformal is not None:
        return rhs_conformal(spec, kappa, s)
    return rhs_general(spec, kappa, s)


def kappa_residual(spec: SurfaceSpec, kappa: KappaField, s: ParamState,
                   ddu: float, ddv: float) -> float:
    """Defect of the curvature equation for a proposed acceleration.

    Vanishes (to roundoff) for the output of rhs_general/rhs_conformal;
    used as a per-step validation diagnostic along trajectories.
    """
    sig = spec.signature
    jet = spec.jet(s.u, s.v)
    gp = _gamma_prime(jet, s)
    gpp = _q_term(jet, s) + jet.S_u * ddu + jet.S_v * ddv
    n = cross(sig, jet.S_u, jet.S_v)
    n_norm = norm(sig, n)
    c = dot(sig, gp, gp)
    return dot(sig, gpp, cross(sig, gp, n)) / (n_norm * c) - kappa(s.u, s.v)
