"""Closed magnetic geodesics by intermediate-value shooting.

A trajectory self-intersects when its parameter-space curve returns to
the same (u, v) modulo the declared coordinate periods.  Tracking the
orientation of the tangent pair spanned at the crossing while a family
parameter s varies, a sign flip brackets a closed orbit: at the flip
the two tangents align and the crossing becomes a closed loop.

Intersections are computed in parameter space (with period unwrapping),
never in ambient space, so ambient self-intersections of the surface
itself (e.g. Enneper's) cannot create false positives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .ambient import dot, cross, norm
from .dynamics import ParamState
from .errors import BracketError, LostCrossingError
from .integrate import IntegratorConfig, Trajectory, dense_eval, integrate
from .surfaces import KappaField, SurfaceSpec, normal

__all__ = [
    "Crossing",
    "ShootingFamily",
    "ClosedOrbit",
    "find_self_intersections",
    "shoot",
    "orbit_report",
]

# a tangent pair counts as parallel (orientation 0) below this
ANGULAR_TOL = 1e-9


@dataclass(frozen=True)
class Crossing:
    """One self-intersection: gamma(t1) = gamma(t2) in parameter space."""

    t1: float
    t2: float
    gap: float  # parameter-space distance after refinement
    orientation: int  # sign of the tangent-pair determinant; 0 if parallel
    signed_sine: float  # continuous orientation measure in [-1, 1]


@dataclass(frozen=True)
class ShootingFamily:
    """Continuous family s in [0, 1] of initial states."""

    generator: Callable[[float], ParamState]
    description: str = ""

    def __call__(self, s: float) -> ParamState:
        return self.generator(s)


@dataclass
class ClosedOrbit:
    s_star: float
    t1: float
    t2: float
    period: float
    position_residual: float  # ambient
    velocity_residual: float  # ambient
    trajectory: Trajectory
    crossing: Crossing


def _wrap(delta: np.ndarray, periods: tuple[Optional[float], Optional[float]]) -> np.ndarray:
    out = np.array(delta, dtype=float)
    for k in (0, 1):
        p = periods[k]
        if p is not None:
            out[..., k] -= p * np.round(out[..., k] / p)
    return out


def _ambient_velocity(spec: SurfaceSpec, s: ParamState) -> np.ndarray:
    jet = spec.jet(s.u, s.v)
    return jet.S_u * s.du + jet.S_v * s.dv


def _tangent_pair_sine(spec: SurfaceSpec, s1: ParamState, s2: ParamState) -> float:
    """Normalized determinant of the tangent pair in the oriented plane."""
    sig = spec.signature
    g1 = _ambient_velocity(spec, s1)
    g2 = _ambient_velocity(spec, s2)
    jet = spec.jet(s1.u, s1.v)
    n = normal(jet, sig)
    val = dot(sig, cross(sig, g1, g2), n) / norm(sig, n)
    scale = norm(sig, g1) * norm(sig, g2)
    return val / scale if scale > 0 else 0.0


def _refine_crossing(traj: Trajectory, t1: float, t2: float,
                     periods, tol: float = 1e-10, max_iter: int = 60):
    """2D Newton on dense output driving the wrapped parameter gap to zero."""
    span = abs(traj.t[-1] - traj.t[0])
    lo, hi = min(traj.t[0], traj.t[-1]), max(traj.t[0], traj.t[-1])
    sep0 = t2 - t1
    for _ in range(max_iter):
        s1 = dense_eval(traj, t1)
        s2 = dense_eval(traj, t2)
        F = _wrap(np.array([s2.u - s1.u, s2.v - s1.v]), periods)
        gap = float(np.hypot(F[0], F[1]))
        if gap <= tol:
            return t1, t2, gap
        J = np.array([[-s1.du, s2.du], [-s1.dv, s2.dv]])
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        limit = 0.2 * span
        step = np.clip(step, -limit, limit)
        t1 = min(max(t1 + step[0], lo), hi)
        t2 = min(max(t2 + step[1], lo), hi)
        if t2 - t1 < 0.25 * sep0:
            return None
    return None


def _segment_candidates(pts: np.ndarray, periods) -> list[tuple[int, int]]:
    """Non-adjacent segment pairs whose bounding circles meet (torus metric)."""
    mids = 0.5 * (pts[:-1] + pts[1:])
    seg = pts[1:] - pts[:-1]
    rad = 0.5 * np.hypot(seg[:, 0], seg[:, 1])
    nseg = mids.shape[0]
    out: list[tuple[int, int]] = []
    for i in range(nseg - 2):
        j0 = i + 2
        d = mids[j0:] - mids[i]
        d = _wrap(d, periods)
        dist = np.hypot(d[:, 0], d[:, 1])
        hit = np.nonzero(dist <= rad[i] + rad[j0:] + 1e-12)[0]
        for k in hit:
            out.append((i, j0 + int(k)))
    return out


def find_self_intersections(spec: SurfaceSpec, traj: Trajectory,
                            gap_tol: float = 1e-10) -> list[Crossing]:
    """All self-intersections of the parameter-space polyline, refined.

    Candidates come from an all-pairs bounding-circle scan over
    non-adjacent segments with periodic unwrapping per the surface's
    declared periods, then each is polished by Newton iteration on
    dense output to gap <= gap_tol.  Tangential re-traversals (parallel
    tangents) are reported with orientation 0.
    """
    periods = spec.periods
    if len(traj) < 3:
        return []
    pts = traj.y[:, :2]
    found: list[tuple[float, float, float]] = []
    span = abs(traj.t[-1] - traj.t[0])
    steps = np.abs(np.diff(traj.t))
    window = 10.0 * float(np.median(steps)) if steps.size else 0.0
    for i, j in _segment_candidates(pts, periods):
        t1g0 = float(traj.t[i])
        t2g0 = float(traj.t[j])
        # cheap duplicate pre-skip: a tangential retrace generates one
        # candidate per step along a whole continuum of equivalent pairs
        if any(
            abs((p2 - p1) - (t2g0 - t1g0)) < 1e-3 * span and abs(p1 - t1g0) < 2 * window
            for (p1, p2, _) in found
        ):
            continue
        # initial guess: closest approach of the two segments
        a0, a1 = pts[i], pts[i + 1]
        b0 = pts[j] + 0.0
        shift = _wrap(b0 - a0, periods) - (b0 - a0)
        b0s = pts[j] + shift
        b1s = pts[j + 1] + shift
        da = a1 - a0
        db = b1s - b0s
        M = np.array([[da @ da, -(da @ db)], [-(da @ db), db @ db]])
        rhs = np.array([(b0s - a0) @ da, -((b0s - a0) @ db)])
        try:
            ab = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            ab = np.array([0.5, 0.5])
        alpha = float(np.clip(ab[0], 0.0, 1.0))
        beta = float(np.clip(ab[1], 0.0, 1.0))
        miss = (a0 + alpha * da) - (b0s + beta * db)
        if np.hypot(miss[0], miss[1]) > 0.75 * (np.linalg.norm(da) + np.linalg.norm(db)):
            continue
        t1g = traj.t[i] + alpha * (traj.t[i + 1] - traj.t[i])
        t2g = traj.t[j] + beta * (traj.t[j + 1] - traj.t[j])
        ref = _refine_crossing(traj, float(t1g), float(t2g), periods, tol=gap_tol)
        if ref is None:
            continue
        t1, t2, gap = ref
        if t2 <= t1:
            continue
        dup = False
        for (p1, p2, _) in found:
            if abs(p1 - t1) < 1e-6 * span and abs(p2 - t2) < 1e-6 * span:
                dup = True
                break
        if dup:
            continue
        found.append((t1, t2, gap))

    # collapse retrace continua: chains of crossings with the same
    # separation t2 - t1 whose t1 values step along adjacent segments
    # are one tangential re-traversal, represented by the earliest t1
    found.sort(key=lambda x: x[0])
    merged: list[tuple[float, float, float]] = []
    chain_last: list[tuple[float, float]] = []
    for cand in found:
        absorbed = False
        for k, (l1, l2) in enumerate(chain_last):
            if (
                abs((cand[1] - cand[0]) - (l2 - l1)) < 1e-5 * span
                and abs(cand[0] - l1) < 4 * window
            ):
                chain_last[k] = (cand[0], cand[1])
                absorbed = True
                break
        if not absorbed:
            merged.append(cand)
            chain_last.append((cand[0], cand[1]))
    found = merged
    found.sort(key=lambda x: (x[1], x[0]))
    out: list[Crossing] = []
    for t1, t2, gap in found:
        s1 = dense_eval(traj, t1)
        s2 = dense_eval(traj, t2)
        sine = _tangent_pair_sine(spec, s1, s2)
        orient = 0 if abs(sine) <= ANGULAR_TOL else (1 if sine > 0 else -1)
        out.append(Crossing(t1=t1, t2=t2, gap=gap, orientation=orient, signed_sine=sine))
    return out


def _integrate_family_member(spec: SurfaceSpec, kappa: KappaField, s0: ParamState,
                             horizon: float, cfg: Optional[IntegratorConfig]) -> Trajectory:
    if cfg is None:
        cfg = IntegratorConfig(t_end=s0.t + horizon)
    else:
        cfg = IntegratorConfig(
            t_end=s0.t + horizon, method=cfg.method, rel_tol=cfg.rel_tol,
            abs_tol=cfg.abs_tol, h=cfg.h, h_min=cfg.h_min, h_max=cfg.h_max,
            max_steps=cfg.max_steps, degeneracy_rel=cfg.degeneracy_rel,
            renormalize=cfg.renormalize,
        )
    return integrate(spec, kappa, s0, cfg)


def _select_crossing(crossings: list[Crossing],
                     previous: Optional[Crossing]) -> Optional[Crossing]:
    """Continuation rule: nearest (t1, t2) to the previous iterate,
    earliest t2 on the first evaluation."""
    if not crossings:
        return None
    if previous is None:
        return min(crossings, key=lambda c: c.t2)
    return min(crossings, key=lambda c: (c.t1 - previous.t1) ** 2 + (c.t2 - previous.t2) ** 2)


def _residuals(spec: SurfaceSpec, traj: Trajectory, c: Crossing) -> tuple[float, float]:
    s1 = dense_eval(traj, c.t1)
    s2 = dense_eval(traj, c.t2)
    j1 = spec.jet(s1.u, s1.v)
    j2 = spec.jet(s2.u, s2.v)
    pos = float(np.linalg.norm(j1.S - j2.S))
    vel = float(np.linalg.norm(_ambient_velocity(spec, s1) - _ambient_velocity(spec, s2)))
    return pos, vel


def shoot(spec: SurfaceSpec, kappa: KappaField, family: ShootingFamily,
          horizon: Optional[float] = None, tol: float = 1e-6,
          integrator: Optional[IntegratorConfig] = None,
          max_iter: int = 80,
          track: Optional[tuple[float, float]] = None) -> ClosedOrbit:
    """Bisect the family parameter to the orientation flip of a crossing.

    Endpoint orientations must be nonzero and opposite; the tracked
    crossing is continued by the nearest-pair rule (seeded at s = 0 by
    the earliest t2, or by the optional ``track`` = (t1, t2) pair when
    several crossing families coexist).  Terminates when the
    tangent-pair sine at the matched crossing falls below the angular
    tolerance or the bracket narrows to 1e-12, then reports ambient
    position and velocity residuals of the resulting loop.
    """
    if horizon is None:
        s_probe = family(0.0)
        from .dynamics import speed_sq
        c0 = speed_sq(spec, s_probe)
        horizon = 40.0 / math.sqrt(c0)

    cache: dict[float, tuple[Trajectory, Optional[Crossing]]] = {}
    previous: Optional[Crossing] = None
    if track is not None:
        previous = Crossing(t1=track[0], t2=track[1], gap=0.0, orientation=0, signed_sine=0.0)

    def eval_at(s: float) -> tuple[Trajectory, Optional[Crossing]]:
        if s in cache:
            return cache[s]
        traj = _integrate_family_member(spec, kappa, family(s), horizon, integrator)
        crossing = _select_crossing(find_self_intersections(spec, traj), previous)
        cache[s] = (traj, crossing)
        return traj, crossing

    traj_a, cr_a = eval_at(0.0)
    if cr_a is None:
        raise LostCrossingError("no self-intersection at s = 0")
    previous = cr_a
    traj_b, cr_b = eval_at(1.0)
    if cr_b is None:
        raise LostCrossingError("no self-intersection at s = 1")
    if cr_a.orientation == 0:
        return _finish(spec, 0.0, traj_a, cr_a)
    if cr_b.orientation == 0:
        return _finish(spec, 1.0, traj_b, cr_b)
    if cr_a.orientation == cr_b.orientation:
        raise BracketError(
            f"endpoint orientations do not oppose: {cr_a.orientation} and {cr_b.orientation}"
        )

    sa, sb = 0.0, 1.0
    fa, fb = cr_a.signed_sine, cr_b.signed_sine
    best = (0.0, traj_a, cr_a)
    last_good = 0.0
    for it in range(max_iter):
        if sb - sa <= 1e-12:
            break
        # secant proposal inside the bracket, fall back to midpoint
        if fb != fa:
            sm = sa - fa * (sb - sa) / (fb - fa)
        else:
            sm = 0.5 * (sa + sb)
        margin = 0.1 * (sb - sa)
        if not (sa + 1e-15 < sm < sb - 1e-15) or it % 2 == 1:
            sm = 0.5 * (sa + sb)
        else:
            sm = min(max(sm, sa + margin), sb - margin)
        traj_m, cr_m = eval_at(sm)
        if cr_m is None:
            raise LostCrossingError(f"crossing lost at s = {sm} (last good s = {last_good})")
        previous = cr_m
        last_good = sm
        if abs(cr_m.signed_sine) < abs(best[2].signed_sine):
            best = (sm, traj_m, cr_m)
        if cr_m.orientation == 0 or abs(cr_m.signed_sine) <= ANGULAR_TOL:
            best = (sm, traj_m, cr_m)
            break
        if cr_m.signed_sine * fa < 0:
            sb, fb = sm, cr_m.signed_sine
        else:
            sa, fa = sm, cr_m.signed_sine

    s_star, traj_star, cr_star = best
    orbit = _finish(spec, s_star, traj_star, cr_star)
    if orbit.position_residual > tol or orbit.velocity_residual > tol:
        # keep the certified bracket result anyway; caller sees residuals
        pass
    return orbit


def _finish(spec: SurfaceSpec, s_star: float, traj: Trajectory, cr: Crossing) -> ClosedOrbit:
    pos, vel = _residuals(spec, traj, cr)
    return ClosedOrbit(
        s_star=s_star,
        t1=cr.t1,
        t2=cr.t2,
        period=cr.t2 - cr.t1,
        position_residual=pos,
        velocity_residual=vel,
        trajectory=traj,
        crossing=cr,
    )


def orbit_report(spec: SurfaceSpec, orbit: ClosedOrbit) -> dict:
    """Summary record: period, length, winding numbers, residuals."""
    traj = orbit.trajectory
    s1 = dense_eval(traj, orbit.t1)
    s2 = dense_eval(traj, orbit.t2)
    winding = {}
    for label, idx, period in (("u", 0, spec.u_period), ("v", 1, spec.v_period)):
        if period is not None:
            delta = (s2.u - s1.u) if idx == 0 else (s2.v - s1.v)
            winding[label] = int(round(delta / period))
    return {
        "surface": spec.name,
        "s_star": orbit.s_star,
        "t1": orbit.t1,
        "t2": orbit.t2,
        "period": orbit.period,
        "length": math.sqrt(traj.c) * orbit.period,
        "speed_sq": traj.c,
        "winding": winding,
        "position_residual": orbit.position_residual,
        "velocity_residual": orbit.velocity_residual,
        "gap": orbit.crossing.gap,
        "orientation_sine": orbit.crossing.signed_sine,
    }
