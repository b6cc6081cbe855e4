"""Self-check battery: independent oracles for the dynamics and integrator.

Three kinds of checks live here, all derivable without touching the
production right-hand sides:

* the fully expanded scalar form of the curvature equation (a long
  polynomial in (u', v') and jet pairings) evaluated as a residual on
  the output of ``rhs_general``;
* agreement between the conformal fast path and the general solve;
* an independently derived intrinsic (Christoffel) system for the
  round sphere, integrated with a separate fixed-step stepper.

``run_battery`` executes everything deterministically (fixed RNG seeds)
and returns named results so the CLI can print a pass/fail table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .ambient import cross, dot, norm
from .dynamics import ParamState, kappa_residual, rhs_conformal, rhs_general
from .errors import ConformalDegenerateError, SingularSystemError
from .integrate import IntegratorConfig, integrate
from .surfaces import KappaField, SurfaceSpec, get_surface

__all__ = [
    "expansion_residual",
    "sphere_intrinsic_rhs",
    "integrate_sphere_intrinsic",
    "CheckResult",
    "run_battery",
]


def expansion_residual(spec: SurfaceSpec, kappa: KappaField, s: ParamState,
                       ddu: float, ddv: float) -> float:
    """Residual of the expanded curvature equation at a proposed acceleration.

    The curvature equation <gamma'', gamma' x n> = kappa c |n|, written
    out in jet pairings with (u'', v'') explicit, reads

        c |S_u x S_v| kappa =
            (u''v' - v''u')(EG - F^2)
          + u'^3 (F<S_uu,S_u> - E<S_uu,S_v>)
          + v'^3 (G<S_vv,S_u> - F<S_vv,S_v>)
          + u'^2 v' (G<S_uu,S_u> - F<S_uu,S_v> + 2F<S_uv,S_u> - 2E<S_uv,S_v>)
          + u' v'^2 (F<S_vv,S_u> - E<S_vv,S_v> + 2G<S_uv,S_u> - 2F<S_uv,S_v>)

    in the Euclidean signature.  This is an algebraically independent
    route to the same constraint the 2x2 solve enforces, so a vanishing
    relative residual certifies the solve.
    """
    sig = spec.signature
    jet = spec.jet(s.u, s.v)
    d = lambda a, b: dot(sig, a, b)
    Su, Sv, Suu, Suv, Svv = jet.S_u, jet.S_v, jet.S_uu, jet.S_uv, jet.S_vv
    E, F, G = d(Su, Su), d(Su, Sv), d(Sv, Sv)
    up, vp = s.du, s.dv
    c = E * up * up + 2 * F * up * vp + G * vp * vp
    n_norm = norm(sig, cross(sig, Su, Sv))
    lhs = c * n_norm * kappa(s.u, s.v)
    lead = (ddu * vp - ddv * up) * (E * G - F * F)
    rhs_val = (
        lead
        + up**3 * (F * d(Suu, Su) - E * d(Suu, Sv))
        + vp**3 * (G * d(Svv, Su) - F * d(Svv, Sv))
        + up * up * vp * (G * d(Suu, Su) - F * d(Suu, Sv)
                          + 2 * F * d(Suv, Su) - 2 * E * d(Suv, Sv))
        + up * vp * vp * (F * d(Svv, Su) - E * d(Svv, Sv)
                          + 2 * G * d(Suv, Su) - 2 * F * d(Suv, Sv))
    )
    scale = abs(lhs) + abs(lead) + 1.0
    return (lhs - rhs_val) / scale


def sphere_intrinsic_rhs(kappa: KappaField, s: ParamState) -> tuple[float, float]:
    """Intrinsic (Christoffel) accelerations on the unit sphere.

    Chart (u, v) -> (cos u cos v, cos u sin v, sin u), metric
    diag(1, cos^2 u).  Christoffel symbols: Gamma^u_{vv} = sin u cos u,
    Gamma^v_{uv} = -tan u.  The magnetic forcing kappa * J90 gamma'
    expressed in the orthonormal coframe (du, cos u dv) contributes
    (+kappa cos u v', -kappa u' / cos u).
    """
    cu = math.cos(s.u)
    k = kappa(s.u, s.v)
    ddu = -math.sin(s.u) * cu * s.dv**2 + k * cu * s.dv
    ddv = 2.0 * math.tan(s.u) * s.du * s.dv - k * s.du / cu
    return ddu, ddv


def integrate_sphere_intrinsic(kappa: KappaField, s0: ParamState, t_end: float,
                               h: float = 5e-4) -> np.ndarray:
    """Fixed-step RK4 on the intrinsic sphere system (oracle stepper).

    Deliberately shares nothing with the production integrator: its own
    tableau-free classical RK4 loop on the Christoffel right-hand side.
    Returns the final state (u, v, u', v').
    """
    def f(y: np.ndarray) -> np.ndarray:
        s = ParamState(0.0, y[0], y[1], y[2], y[3])
        ddu, ddv = sphere_intrinsic_rhs(kappa, s)
        return np.array([y[2], y[3], ddu, ddv])

    n = max(1, int(round(abs(t_end - s0.t) / h)))
    hh = (t_end - s0.t) / n
    y = s0.as_array()
    for _ in range(n):
        k1 = f(y)
        k2 = f(y + 0.5 * hh * k1)
        k3 = f(y + 0.5 * hh * k2)
        k4 = f(y + hh * k3)
        y = y + (hh / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


# ---------------------------------------------------------------------------
# battery


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measure: float  # worst observed residual/disagreement
    bound: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name}: {self.measure:.3e} <= {self.bound:.1e}{extra}"


_EUCLIDEAN_SURFACES = ("sphere", "clifford-torus", "catenoid", "enneper", "cycloid-rev")


def _random_state(rng: np.random.Generator, name: str) -> Optional[ParamState]:
    u, v = rng.normal(size=2)
    if name == "sphere":
        u = rng.uniform(-1.3, 1.3)
    elif name == "cycloid-rev":
        u = rng.uniform(0.4, 2.0 * math.pi - 0.4)
    elif name == "maximal-enneper":
        r = rng.uniform(0.0, 0.85)
        ang = rng.uniform(0.0, 2.0 * math.pi)
        u, v = r * math.cos(ang), r * math.sin(ang)
    du, dv = rng.normal(size=2)
    if du * du + dv * dv < 1e-4:
        return None
    return ParamState(0.0, u, v, du, dv)


def check_expansion(n_states: int = 1000, seed: int = 7,
                    kappa: Optional[KappaField] = None,
                    bound: float = 1e-9) -> CheckResult:
    """Expanded-equation residual of rhs_general on Euclidean surfaces."""
    rng = np.random.default_rng(seed)
    kap = kappa if kappa is not None else KappaField.sin_u(0.8)
    worst = 0.0
    for name in _EUCLIDEAN_SURFACES:
        spec = get_surface(name)
        done = 0
        while done < n_states:
            s = _random_state(rng, name)
            if s is None:
                continue
            try:
                ddu, ddv = rhs_general(spec, kap, s)
            except SingularSystemError:
                continue
            worst = max(worst, abs(expansion_residual(spec, kap, s, ddu, ddv)))
            done += 1
    return CheckResult("expanded-equation residual (rhs_general)", worst <= bound,
                       worst, bound, f"{n_states} states x {len(_EUCLIDEAN_SURFACES)} surfaces")


def check_conformal_agreement(n_states: int = 1000, seed: int = 11,
                              bound: float = 1e-9) -> CheckResult:
    """Componentwise agreement of the conformal and general solves."""
    rng = np.random.default_rng(seed)
    kap = KappaField.sin_u(1.3)
    worst = 0.0
    for name in ("catenoid", "enneper", "maximal-enneper"):
        spec = get_surface(name)
        done = 0
        while done < n_states:
            s = _random_state(rng, name)
            if s is None:
                continue
            try:
                g = rhs_general(spec, kap, s)
                c = rhs_conformal(spec, kap, s)
            except (SingularSystemError, ConformalDegenerateError):
                continue
            scale = max(abs(g[0]), abs(g[1]), 1.0)
            worst = max(worst, abs(g[0] - c[0]) / scale, abs(g[1] - c[1]) / scale)
            done += 1
    return CheckResult("conformal/general RHS agreement", worst <= bound,
                       worst, bound, "catenoid, enneper, maximal-enneper")


def check_sphere_oracle(bound: float = 1e-6) -> CheckResult:
    """Production integrator vs the intrinsic sphere oracle over t in [0, 10]."""
    kap = KappaField.sin_u(1.0)
    s0 = ParamState(0.0, 0.2, 0.0, 0.3, 0.9)
    spec = get_surface("sphere")
    traj = integrate(spec, kap, s0, IntegratorConfig(t_end=10.0, rel_tol=1e-11,
                                                     abs_tol=1e-13))
    y_oracle = integrate_sphere_intrinsic(kap, s0, 10.0, h=2e-4)
    worst = float(np.max(np.abs(traj.y[-1] - y_oracle)))
    return CheckResult("Christoffel sphere oracle (final state)", worst <= bound,
                       worst, bound, "independent RK4, h = 2e-4")


def check_kappa_residual(n_states: int = 200, seed: int = 3,
                         bound: float = 1e-9,
                         kappa: Optional[KappaField] = None,
                         rhs_fn: Optional[Callable] = None) -> CheckResult:
    """Curvature-equation defect of the production RHS at random states.

    ``rhs_fn`` exists so a deliberately corrupted right-hand side can be
    planted to confirm this check actually detects sign errors.
    """
    rng = np.random.default_rng(seed)
    kap = kappa if kappa is not None else KappaField.constant(0.7)
    fn = rhs_fn if rhs_fn is not None else rhs_general
    worst = 0.0
    for name in _EUCLIDEAN_SURFACES + ("maximal-enneper",):
        spec = get_surface(name)
        done = 0
        while done < n_states:
            s = _random_state(rng, name)
            if s is None:
                continue
            try:
                ddu, ddv = fn(spec, kap, s)
            except (SingularSystemError, ConformalDegenerateError):
                continue
            worst = max(worst, abs(kappa_residual(spec, kap, s, ddu, ddv)))
            done += 1
    return CheckResult("curvature-equation defect (kappa_residual)", worst <= bound,
                       worst, bound)


def check_drift(bound: float = 1e-8) -> CheckResult:
    """Speed conservation on a long adaptive sphere run."""
    spec = get_surface("sphere")
    traj = integrate(spec, KappaField.sin_u(1.0), ParamState(0.0, 0.2, 0.0, 0.3, 0.9),
                     IntegratorConfig(t_end=200.0, rel_tol=1e-10, abs_tol=1e-12))
    return CheckResult("constant-speed drift, sphere t in [0, 200]",
                       traj.drift_max <= bound, traj.drift_max, bound,
                       traj.stop_reason.value)


def run_battery() -> list[CheckResult]:
    """Run every check with fixed seeds; deterministic output."""
    return [
        check_expansion(),
        check_conformal_agreement(),
        check_sphere_oracle(),
        check_kappa_residual(),
        check_drift(),
    ]
