"""Admissible approach directions at lightlike points of graph surfaces.

At a non-flat point of a Lorentzian graph z = f(u, v) whose tangent
plane is lightlike, a magnetic geodesic with bounded curvature can meet
the point only along directions where the Hessian quadratic form

    f_uu cos^2(theta) + 2 f_uv cos(theta) sin(theta) + f_vv sin^2(theta)

vanishes, plus the two lightlike directions themselves: at most six
angles in [0, 2pi).  The closed-form roots are computed after rotating
the frame so the gradient is (1, 0); a sweep oracle lives in the tests.

The fan experiment provides the matching empirical diagnostic: rays
aimed at a degenerate point stop (the conformal factor collapses while
u'^2 + v'^2 blows up to hold the speed constant) instead of reaching it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dynamics import ParamState, speed_sq
from .errors import FlatPointError, NotLightlikeError
from .integrate import IntegratorConfig, StopReason, integrate
from .surfaces import KappaField, SurfaceSpec, get_surface

__all__ = [
    "LightlikePointData",
    "DirectionReport",
    "normalize_frame",
    "admissible_directions",
    "direction_report",
    "RayResult",
    "FanReport",
    "approach_fan_experiment",
    "maximal_enneper_lightlike_data",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LightlikePointData:
    """Graph data at a lightlike point: unit gradient plus finite Hessian."""

    point: tuple[float, float]
    gradient: tuple[float, float]
    hessian: tuple[float, float, float]  # f_uu, f_uv, f_vv

    def __post_init__(self):
        gu, gv = self.gradient
        if not all(math.isfinite(x) for x in (*self.gradient, *self.hessian, *self.point)):
            raise ValueError("lightlike point data must be finite")
        if abs(gu * gu + gv * gv - 1.0) > 1e-10:
            raise NotLightlikeError(
                f"gradient norm {math.hypot(gu, gv)} != 1: tangent plane is not lightlike"
            )


@dataclass(frozen=True)
class DirectionReport:
    """Admissible angles (normalized frame) with case provenance."""

    angles: tuple[float, ...]  # sorted, in [0, 2pi), <= 6 entries
    case: str  # generic-tan | generic-cot | double-degenerate | no-real-roots
    lightlike_pair: tuple[float, float]  # {0, pi} mapped back to input frame
    rotation: float  # frame rotation angle phi applied by normalize_frame


def _rot(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def normalize_frame(data: LightlikePointData) -> tuple[float, LightlikePointData]:
    """Rotate the (u, v) frame so the gradient becomes (1, 0).

    Returns (phi, rotated data); the Hessian transforms by conjugation
    with the same rotation.  Angles computed in the normalized frame
    map back to the input frame as theta - phi.
    """
    gu, gv = data.gradient
    phi = -math.atan2(gv, gu)
    R = _rot(phi)
    g = R @ np.array([gu, gv])
    fuu, fuv, fvv = data.hessian
    H = R @ np.array([[fuu, fuv], [fuv, fvv]]) @ R.T
    g = np.where(np.abs(g) < 1e-15, 0.0, g)
    normalized = LightlikePointData(
        point=data.point,
        gradient=(float(g[0]), float(g[1])),
        hessian=(float(H[0, 0]), float(H[0, 1]), float(H[1, 1])),
    )
    return phi, normalized


def _dedup_sorted(angles: list[float], tol: float = 1e-9) -> tuple[float, ...]:
    angles = sorted(a % _TWO_PI for a in angles)
    out: list[float] = []
    for a in angles:
        if not out or (a - out[-1] > tol and (_TWO_PI - a + out[0]) > tol):
            out.append(a)
    return tuple(out)


def admissible_directions(data: LightlikePointData) -> DirectionReport:
    """Closed-form admissible angles for normalized lightlike data.

    Requires gradient (1, 0) (apply normalize_frame first) and a
    nonzero Hessian.  The lightlike pair {0, pi} is always included.
    """
    gu, gv = data.gradient
    if abs(gu - 1.0) > 1e-9 or abs(gv) > 1e-9:
        raise NotLightlikeError("data is not normalized: gradient must be (1, 0)")
    fuu, fuv, fvv = data.hessian
    hscale = max(abs(fuu), abs(fuv), abs(fvv))
    if hscale == 0.0:
        raise FlatPointError("Hessian is zero: no direction constraint at a flat point")
    tiny = 1e-14 * hscale

    angles: list[float] = [0.0, math.pi]
    if abs(fvv) > tiny:
        disc = fuv * fuv - fuu * fvv
        if disc < 0:
            case = "no-real-roots"
        else:
            case = "generic-tan"
            # stable quadratic roots: avoid cancellation when |f_vv| << |f_uv|
            sq = math.sqrt(disc)
            q = -(fuv + math.copysign(sq, fuv))
            roots = [q / fvv] if q == 0.0 else [q / fvv, fuu / q]
            if len(roots) == 1:
                roots.append(-fuv / fvv)
            for root in roots:
                th = math.atan(root)
                angles.extend([th, th + math.pi])
    elif abs(fuu) > tiny:
        case = "generic-cot"
        disc = fuv * fuv  # f_vv = 0 here
        for root in ((-fuv + abs(fuv)) / fuu, (-fuv - abs(fuv)) / fuu):
            th = math.atan2(1.0, root)  # cot(theta) = root
            angles.extend([th, th + math.pi])
    else:
        case = "double-degenerate"
        angles.extend([math.pi / 2, 3 * math.pi / 2])

    return DirectionReport(
        angles=_dedup_sorted(angles),
        case=case,
        lightlike_pair=(0.0, math.pi),
        rotation=0.0,
    )


def direction_report(data: LightlikePointData) -> DirectionReport:
    """Normalize the frame, compute directions, map the lightlike pair back."""
    phi, normalized = normalize_frame(data)
    rep = admissible_directions(normalized)
    pair = tuple(sorted(((a - phi) % _TWO_PI for a in (0.0, math.pi))))
    return DirectionReport(
        angles=rep.angles, case=rep.case, lightlike_pair=pair, rotation=phi
    )


# ---------------------------------------------------------------------------
# fan experiment


@dataclass(frozen=True)
class RayResult:
    angle: float  # launch direction (angle of the ray aimed at the target)
    stop_reason: StopReason
    closest_distance: float  # parameter-space distance to the target point
    t_closest: float
    min_conformal_factor: Optional[float]
    conformal_identity_violation: Optional[float]  # max |c - (u'^2+v'^2) f| / c


@dataclass
class FanReport:
    target: tuple[float, float]
    offset: float
    rays: list[RayResult] = field(default_factory=list)

    def closest_overall(self) -> float:
        return min(r.closest_distance for r in self.rays)


def approach_fan_experiment(spec: SurfaceSpec, target: tuple[float, float],
                            kappa: KappaField, n_rays: int = 64,
                            offset: float = 0.1, t_max: float = 5.0,
                            rel_tol: float = 1e-10) -> FanReport:
    """Launch unit-speed rays at a degenerate point and record avoidance.

    Rays start on the parameter-space circle of radius ``offset`` around
    the target, aimed straight at it, and integrate until they stop or
    the horizon runs out.  For conformal charts each ray also certifies
    the conserved-speed identity c = (u'^2 + v'^2) f, which forces the
    parameter velocity to blow up as the factor collapses.

    A ray ending at a degenerate point is a valid observation, not a
    failure; hard integrator errors propagate.
    """
    p = np.array(target, dtype=float)
    report = FanReport(target=(float(p[0]), float(p[1])), offset=float(offset))
    for k in range(n_rays):
        ang = _TWO_PI * k / n_rays
        start = p + offset * np.array([math.cos(ang), math.sin(ang)])
        aim = (p - start) / np.linalg.norm(p - start)
        s_tmp = ParamState(0.0, start[0], start[1], aim[0], aim[1])
        c_raw = speed_sq(spec, s_tmp)
        scale = 1.0 / math.sqrt(c_raw)
        s0 = ParamState(0.0, start[0], start[1], aim[0] * scale, aim[1] * scale)
        cfg = IntegratorConfig(t_end=t_max, rel_tol=rel_tol, abs_tol=1e-12)
        traj = integrate(spec, kappa, s0, cfg)

        d = traj.y[:, :2] - p
        dist = np.hypot(d[:, 0], d[:, 1])
        i_min = int(np.argmin(dist))
        min_f = None
        ident = None
        if spec.conformal is not None:
            fvals = np.array([spec.conformal.f(u, v) for u, v in traj.y[:, :2]])
            min_f = float(np.min(fvals))
            vel2 = traj.y[:, 2] ** 2 + traj.y[:, 3] ** 2
            ident = float(np.max(np.abs(traj.c - vel2 * fvals)) / traj.c)
        report.rays.append(
            RayResult(
                angle=ang,
                stop_reason=traj.stop_reason,
                closest_distance=float(dist[i_min]),
                t_closest=float(traj.t[i_min]),
                min_conformal_factor=min_f,
                conformal_identity_violation=ident,
            )
        )
    return report


# ---------------------------------------------------------------------------
# maximal Enneper graph data at singular chart points


def maximal_enneper_lightlike_data(chart_point: tuple[float, float],
                                   fit_radius: float = 1e-3,
                                   n_samples: int = 200,
                                   seed: int = 0) -> LightlikePointData:
    """Finite-scale graph jet of the maximal Enneper surface at a singular point.

    The gradient is exact (the lightlike direction of the tangent plane
    is spanned by S_u at the singular point).  The Hessian is a
    least-squares quadratic fit of graph samples taken from the chart
    at parameter distance ~ fit_radius; near this surface's singular
    circle the true second derivatives are unbounded, so the fit is a
    scale-dependent empirical estimate, not a limit.
    """
    u0, v0 = chart_point
    r2 = u0 * u0 + v0 * v0
    if abs(r2 - 1.0) > 1e-10:
        raise NotLightlikeError("chart point is not on the singular circle u^2 + v^2 = 1")
    spec = get_surface("maximal-enneper")
    jet0 = spec.jet(u0, v0)
    x0, y0, z0 = jet0.S
    # lightlike direction (gx, gy, 1): S_u at the singular point is null
    null = jet0.S_u if np.linalg.norm(jet0.S_u) > np.linalg.norm(jet0.S_v) else jet0.S_v
    gx, gy = null[0] / null[2], null[1] / null[2]

    rng = np.random.default_rng(seed)
    rows = []
    rhs = []
    for _ in range(n_samples):
        ang = rng.uniform(0, _TWO_PI)
        rad = fit_radius * rng.uniform(0.3, 1.0)
        u = u0 + rad * math.cos(ang)
        v = v0 + rad * math.sin(ang)
        S = spec.jet(u, v).S
        dx, dy, dz = S[0] - x0, S[1] - y0, S[2] - z0
        rows.append([dx * dx / 2, dx * dy, dy * dy / 2])
        rhs.append(dz - gx * dx - gy * dy)
    h, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return LightlikePointData(
        point=(float(x0), float(y0)),
        gradient=(float(gx), float(gy)),
        hessian=(float(h[0]), float(h[1]), float(h[2])),
    )
