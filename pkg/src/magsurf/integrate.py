"""Explicit Runge-Kutta integration of the magnetic geodesic system.

Provides a fixed-step classical RK4 and an adaptive Dormand-Prince 5(4)
pair, both with per-step storage of states, derivatives, and ambient
positions.  Dense output is cubic Hermite over the accepted steps.

Stopping is first-class: trajectories end with an explicit reason
(reached the horizon, hit a degenerate/lightlike point, left the
declared chart domain, or underflowed the step size) rather than by
raising out of the loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .dynamics import ParamState, rhs, speed_sq
from .errors import ConformalDegenerateError, SingularSystemError
from .surfaces import KappaField, SurfaceSpec, first_fundamental

__all__ = [
    "IntegratorConfig",
    "StopReason",
    "Trajectory",
    "integrate",
    "dense_eval",
    "locate_event",
]


class StopReason(Enum):
    REACHED_END = "reached-end"
    DEGENERATE_POINT = "degenerate-point"
    DOMAIN_EXIT = "domain-exit"
    STEP_UNDERFLOW = "step-underflow"


@dataclass(frozen=True)
class IntegratorConfig:
    """Stepper selection and stop conditions.

    method "dp45" (adaptive Dormand-Prince, default) or "rk4" (fixed
    step h).  Degeneracy is declared when the conformal factor or the
    Gram determinant falls below degeneracy_rel of its starting value.
    """

    t_end: float
    method: str = "dp45"
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    h: float = 1e-2
    h_min: float = 1e-14
    h_max: float = 1.0
    max_steps: int = 2_000_000
    degeneracy_rel: float = 1e-10
    renormalize: bool = False

    def __post_init__(self):
        if self.method not in ("dp45", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not self.h_min < self.h_max:
            raise ValueError("h_min must be below h_max")


@dataclass
class Trajectory:
    """Sampled solution: states, derivatives, ambient positions, diagnostics."""

    t: np.ndarray
    y: np.ndarray  # (n, 4): u, v, u', v'
    dy: np.ndarray  # (n, 4): u', v', u'', v''
    ambient: np.ndarray  # (n, 3)
    c: float
    drift_max: float
    stop_reason: StopReason
    surface: str = ""

    def __len__(self) -> int:
        return self.t.size

    def state(self, i: int) -> ParamState:
        return ParamState(float(self.t[i]), *(float(x) for x in self.y[i]))

    @property
    def t_span(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])


# Dormand-Prince 5(4) tableau, unrolled as scalars for the hot loop.
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# Error weights: fifth-order minus embedded fourth-order coefficients.
_E1 = _B1 - 5179 / 57600
_E3 = _B3 - 7571 / 16695
_E4 = _B4 - 393 / 640
_E5 = _B5 - -92097 / 339200
_E6 = _B6 - 187 / 2100
_E7 = -1 / 40


class _Degenerate(Exception):
    pass


def _make_f(spec: SurfaceSpec, kappa: KappaField) -> Callable[[np.ndarray], np.ndarray]:
    def f(y: np.ndarray) -> np.ndarray:
        s = ParamState(0.0, y[0], y[1], y[2], y[3])
        try:
            ddu, ddv = rhs(spec, kappa, s)
        except (SingularSystemError, ConformalDegenerateError) as exc:
            raise _Degenerate(str(exc)) from exc
        return np.array([y[2], y[3], ddu, ddv])

    return f


def _outside_domain(spec: SurfaceSpec, y: np.ndarray) -> bool:
    if spec.u_domain is not None and spec.u_period is None:
        if not spec.u_domain[0] <= y[0] <= spec.u_domain[1]:
            return True
    if spec.v_domain is not None and spec.v_period is None:
        if not spec.v_domain[0] <= y[1] <= spec.v_domain[1]:
            return True
    return False


def integrate(spec: SurfaceSpec, kappa: KappaField, s0: ParamState,
              cfg: IntegratorConfig) -> Trajectory:
    """Advance s0 to cfg.t_end (negative horizons integrate backward).

    The magnetic equation is not time-symmetric, so backward runs use
    negative steps of the same system (the substitution t -> -t), never
    a velocity flip.
    """
    c = speed_sq(spec, s0)
    if c <= 0:
        raise ValueError(f"initial squared speed {c} is not positive")

    f = _make_f(spec, kappa)
    t0, t_end = s0.t, cfg.t_end
    direction = 1.0 if t_end >= t0 else -1.0
    y = s0.as_array()

    jet0 = spec.jet(y[0], y[1])
    E0, F0, G0 = first_fundamental(jet0, spec.signature)
    det0 = E0 * G0 - F0 * F0
    f0 = spec.conformal.f(y[0], y[1]) if spec.conformal is not None else 1.0

    ts = [t0]
    ys = [y.copy()]
    dys = [f(y)]
    amb = [jet0.S.copy()]
    drift_max = 0.0
    stop = StopReason.REACHED_END

    t = t0
    if cfg.method == "rk4":
        h = direction * abs(cfg.h)
    else:
        h = direction * min(abs(cfg.h), cfg.h_max)

    k_last = dys[0]
    steps = 0
    underflow_pending = False
    while (t - t_end) * direction < 0:
        steps += 1
        if steps > cfg.max_steps:
            raise RuntimeError("integrator exceeded max_steps")
        h_try = h if abs(h) <= abs(t_end - t) else t_end - t

        try:
            if cfg.method == "rk4":
                k1 = k_last
                k2 = f(y + 0.5 * h_try * k1)
                k3 = f(y + 0.5 * h_try * k2)
                k4 = f(y + h_try * k3)
                y_new = y + (h_try / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                k_new = f(y_new)
                accept = True
                h_next = h
            else:
                k1 = k_last
                k2 = f(y + h_try * (_A21 * k1))
                k3 = f(y + h_try * (_A31 * k1 + _A32 * k2))
                k4 = f(y + h_try * (_A41 * k1 + _A42 * k2 + _A43 * k3))
                k5 = f(y + h_try * (_A51 * k1 + _A52 * k2 + _A53 * k3
                                    + _A54 * k4))
                k6 = f(y + h_try * (_A61 * k1 + _A62 * k2 + _A63 * k3
                                    + _A64 * k4 + _A65 * k5))
                y_new = y + h_try * (_B1 * k1 + _B3 * k3 + _B4 * k4
                                     + _B5 * k5 + _B6 * k6)
                k7 = f(y_new)
                err_vec = h_try * (_E1 * k1 + _E3 * k3 + _E4 * k4
                                   + _E5 * k5 + _E6 * k6 + _E7 * k7)
                sc = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
                err = float(np.sqrt(np.mean((err_vec / sc) ** 2)))
                accept = err <= 1.0
                fac = 0.9 * err ** -0.2 if err > 0 else 5.0
                h_next = h_try * min(5.0, max(0.2, fac))
                if abs(h_next) > cfg.h_max:
                    h_next = direction * cfg.h_max
                k_new = k7  # FSAL: seventh stage is f at y_new
        except _Degenerate:
            h = 0.5 * h_try
            if abs(h) < cfg.h_min:
                stop = StopReason.DEGENERATE_POINT
                break
            continue

        if not accept:
            if abs(h_next) < cfg.h_min:
                stop = StopReason.STEP_UNDERFLOW
                break
            h = h_next
            continue

        t = t + h_try
        y = y_new
        if cfg.renormalize:
            s_now = ParamState(t, *(float(x) for x in y))
            ss = speed_sq(spec, s_now)
            if ss > 0:
                y = y.copy()
                y[2:] *= math.sqrt(c / ss)
                k_new = f(y)
        k_last = k_new
        h = h_next
        if abs(h) < cfg.h_min:
            underflow_pending = True

        jet = spec.jet(y[0], y[1])
        ts.append(t)
        ys.append(y.copy())
        dys.append(k_new.copy())
        amb.append(jet.S.copy())
        E, F, G = first_fundamental(jet, spec.signature)
        ss = E * y[2] * y[2] + 2.0 * F * y[2] * y[3] + G * y[3] * y[3]
        drift_max = max(drift_max, abs(ss - c) / c)

        degenerate = E * G - F * F < cfg.degeneracy_rel * det0
        if not degenerate and spec.conformal is not None:
            degenerate = spec.conformal.f(y[0], y[1]) < cfg.degeneracy_rel * f0
        if degenerate:
            stop = StopReason.DEGENERATE_POINT
            break
        if _outside_domain(spec, y):
            stop = StopReason.DOMAIN_EXIT
            break
        if underflow_pending:
            stop = StopReason.STEP_UNDERFLOW
            break

    return Trajectory(
        t=np.array(ts),
        y=np.array(ys),
        dy=np.array(dys),
        ambient=np.array(amb),
        c=c,
        drift_max=drift_max,
        stop_reason=stop,
        surface=spec.name,
    )


def dense_eval(traj: Trajectory, t: float) -> ParamState:
    """Cubic Hermite interpolation of the state at time t.

    Exact at stored samples; O(h^4) between them (both the values and
    their stored derivatives enter the interpolant).
    """
    ta = traj.t
    increasing = ta[-1] >= ta[0]
    lo, hi = (ta[0], ta[-1]) if increasing else (ta[-1], ta[0])
    if not lo <= t <= hi:
        raise ValueError(f"t = {t} outside trajectory span [{lo}, {hi}]")
    if increasing:
        i = int(np.searchsorted(ta, t, side="right")) - 1
    else:
        i = int(np.searchsorted(-ta, -t, side="right")) - 1
    i = min(max(i, 0), ta.size - 2)
    t0, t1 = ta[i], ta[i + 1]
    if t == t0:
        return traj.state(i)
    if t == t1:
        return traj.state(i + 1)
    hstep = t1 - t0
    s = (t - t0) / hstep
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    yv = (
        h00 * traj.y[i]
        + h10 * hstep * traj.dy[i]
        + h01 * traj.y[i + 1]
        + h11 * hstep * traj.dy[i + 1]
    )
    return ParamState(float(t), *(float(x) for x in yv))


def locate_event(traj: Trajectory, predicate: Callable[[ParamState], float],
                 tol: float = 1e-12) -> list[float]:
    """Times where the predicate crosses zero along the trajectory.

    Bisection on dense output between samples with opposite predicate
    signs.  Identically-zero (non-transversal) stretches yield no
    isolated roots and are skipped.
    """
    vals = np.array([predicate(traj.state(i)) for i in range(len(traj))])
    roots: list[float] = []
    for i in range(len(traj) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            if b != 0.0 and (i == 0 or vals[i - 1] * b < 0):
                roots.append(float(traj.t[i]))
            continue
        if a * b >= 0.0:
            continue
        ta, tb = float(traj.t[i]), float(traj.t[i + 1])
        fa = a
        while abs(tb - ta) > tol:
            tm = 0.5 * (ta + tb)
            fm = predicate(dense_eval(traj, tm))
            if fm == 0.0:
                ta = tb = tm
                break
            if fa * fm < 0:
                tb = tm
            else:
                ta, fa = tm, fm
        roots.append(0.5 * (ta + tb))
    if vals.size and vals[-1] == 0.0 and vals.size > 1 and vals[-2] != 0.0:
        roots.append(float(traj.t[-1]))
    return roots
