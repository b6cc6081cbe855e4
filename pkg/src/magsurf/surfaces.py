"""Surface catalog: second-order jets of parametrized embeddings.

Each catalog entry carries analytically coded derivatives up to second
order, optional conformal-factor metadata, and declared coordinate
periods so that downstream closure detection can unwrap parameter space.

Built-in charts:

  sphere          (cos u cos v, cos u sin v, sin u)                 Euclidean
  clifford-torus  ((sqrt2+cos u) cos v, (sqrt2+cos u) sin v, sin u) Euclidean
  catenoid        (cosh u cos v, cosh u sin v, u)                   conformal, f = cosh^2 u
  enneper         (u-u^3/3+uv^2, -v+v^3/3-vu^2, u^2-v^2)            conformal, f = (1+u^2+v^2)^2
  maximal-enneper (u+u^3/3-uv^2, -v-v^3/3+vu^2, v^2-u^2)            Lorentzian, f = (1-u^2-v^2)^2
  cycloid-rev     ((2+cos u) cos v, (2+cos u) sin v, u-sin u)       Euclidean, cuspidal edge at u = 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .ambient import Signature, cross, dot
from .errors import DegenerateJetError

__all__ = [
    "SurfaceJet",
    "ConformalData",
    "SurfaceSpec",
    "KappaField",
    "GraphSurface",
    "catalog",
    "get_surface",
    "first_fundamental",
    "normal",
    "lightlike_defect",
    "maximal_enneper_graph",
    "invert_maximal_enneper",
]


@dataclass(frozen=True)
class SurfaceJet:
    """Embedding and its parameter derivatives at one (u, v)."""

    S: np.ndarray
    S_u: np.ndarray
    S_v: np.ndarray
    S_uu: np.ndarray
    S_uv: np.ndarray
    S_vv: np.ndarray


@dataclass(frozen=True)
class ConformalData:
    """Conformal-factor metadata: <S_u,S_v>=0, |S_u|^2=|S_v|^2=f."""

    f: Callable[[float, float], float]
    f_u: Callable[[float, float], float]
    f_v: Callable[[float, float], float]
    sv_suu: Callable[[float, float], float]  # <S_v, S_uu>
    su_svv: Callable[[float, float], float]  # <S_u, S_vv>


@dataclass(frozen=True)
class SurfaceSpec:
    """A named surface chart with jet evaluator and metadata."""

    name: str
    signature: Signature
    jet: Callable[[float, float], SurfaceJet]
    u_period: Optional[float] = None
    v_period: Optional[float] = None
    conformal: Optional[ConformalData] = None
    u_domain: Optional[tuple[float, float]] = None
    v_domain: Optional[tuple[float, float]] = None

    @property
    def periods(self) -> tuple[Optional[float], Optional[float]]:
        return (self.u_period, self.v_period)


def first_fundamental(jet: SurfaceJet, sig: Signature) -> tuple[float, float, float]:
    """First-fundamental-form coefficients (E, F, G)."""
    E = dot(sig, jet.S_u, jet.S_u)
    F = dot(sig, jet.S_u, jet.S_v)
    G = dot(sig, jet.S_v, jet.S_v)
    return E, F, G


def normal(jet: SurfaceJet, sig: Signature) -> np.ndarray:
    """Unnormalized normal n = S_u x S_v (signature cross product)."""
    n = cross(sig, jet.S_u, jet.S_v)
    scale = np.linalg.norm(jet.S_u) * np.linalg.norm(jet.S_v)
    if np.linalg.norm(n) <= 1e-14 * scale:
        raise DegenerateJetError("jet is not immersed: S_u x S_v vanishes")
    return n


# ---------------------------------------------------------------------------
# prescribed-curvature fields


@dataclass(frozen=True)
class KappaField:
    """Prescribed geodesic-curvature field kappa(u, v), smooth and bounded."""

    kind: str
    evaluate: Callable[[float, float], float]
    params: dict = field(default_factory=dict)

    def __call__(self, u: float, v: float) -> float:
        return self.evaluate(u, v)

    @staticmethod
    def zero() -> "KappaField":
        return KappaField("zero", lambda u, v: 0.0)

    @staticmethod
    def constant(value: float) -> "KappaField":
        value = float(value)
        if not math.isfinite(value):
            raise ValueError("constant kappa must be finite")
        return KappaField("const", lambda u, v: value, {"value": value})

    @staticmethod
    def sin_u(scale: float = 1.0) -> "KappaField":
        scale = float(scale)
        if not math.isfinite(scale):
            raise ValueError("sin-u scale must be finite")
        return KappaField("sin-u", lambda u, v: scale * math.sin(u), {"scale": scale})

    @staticmethod
    def table(u_grid, v_grid, values) -> "KappaField":
        """Bilinear interpolation on a uniform grid, constant outside."""
        ug = np.asarray(u_grid, dtype=float)
        vg = np.asarray(v_grid, dtype=float)
        val = np.asarray(values, dtype=float)
        if val.shape != (ug.size, vg.size):
            raise ValueError("table shape must be (len(u_grid), len(v_grid))")
        if not np.all(np.isfinite(val)):
            raise ValueError("table values must be finite")

        def ev(u: float, v: float) -> float:
            uu = min(max(u, ug[0]), ug[-1])
            vv = min(max(v, vg[0]), vg[-1])
            i = min(int(np.searchsorted(ug, uu, side="right")) - 1, ug.size - 2)
            j = min(int(np.searchsorted(vg, vv, side="right")) - 1, vg.size - 2)
            i = max(i, 0)
            j = max(j, 0)
            tu = (uu - ug[i]) / (ug[i + 1] - ug[i])
            tv = (vv - vg[j]) / (vg[j + 1] - vg[j])
            return float(
                (1 - tu) * (1 - tv) * val[i, j]
                + tu * (1 - tv) * val[i + 1, j]
                + (1 - tu) * tv * val[i, j + 1]
                + tu * tv * val[i + 1, j + 1]
            )

        return KappaField("table", ev, {"u_grid": ug, "v_grid": vg, "values": val})


# ---------------------------------------------------------------------------
# graph surfaces over the horizontal plane of R^{2,1}


@dataclass(frozen=True)
class GraphSurface:
    """Lorentzian graph S(u, v) = (u, v, f(u, v)) with analytic derivatives."""

    f: Callable[[float, float], float]
    f_u: Callable[[float, float], float]
    f_v: Callable[[float, float], float]
    f_uu: Callable[[float, float], float]
    f_uv: Callable[[float, float], float]
    f_vv: Callable[[float, float], float]
    name: str = "graph"

    def jet(self, u: float, v: float) -> SurfaceJet:
        fu = self.f_u(u, v)
        fv = self.f_v(u, v)
        return SurfaceJet(
            S=np.array([u, v, self.f(u, v)]),
            S_u=np.array([1.0, 0.0, fu]),
            S_v=np.array([0.0, 1.0, fv]),
            S_uu=np.array([0.0, 0.0, self.f_uu(u, v)]),
            S_uv=np.array([0.0, 0.0, self.f_uv(u, v)]),
            S_vv=np.array([0.0, 0.0, self.f_vv(u, v)]),
        )

    def to_spec(self) -> SurfaceSpec:
        return SurfaceSpec(name=self.name, signature=Signature.LORENTZIAN, jet=self.jet)


def lightlike_defect(g: GraphSurface, u: float, v: float) -> float:
    """D = 1 - f_u^2 - f_v^2: positive spacelike, zero lightlike."""
    fu = g.f_u(u, v)
    fv = g.f_v(u, v)
    return 1.0 - fu * fu - fv * fv


# ---------------------------------------------------------------------------
# catalog charts

_SQRT2 = math.sqrt(2.0)


def _sphere_jet(u: float, v: float) -> SurfaceJet:
    cu, su = math.cos(u), math.sin(u)
    cv, sv = math.cos(v), math.sin(v)
    return SurfaceJet(
        S=np.array([cu * cv, cu * sv, su]),
        S_u=np.array([-su * cv, -su * sv, cu]),
        S_v=np.array([-cu * sv, cu * cv, 0.0]),
        S_uu=np.array([-cu * cv, -cu * sv, -su]),
        S_uv=np.array([su * sv, -su * cv, 0.0]),
        S_vv=np.array([-cu * cv, -cu * sv, 0.0]),
    )


def _clifford_jet(u: float, v: float) -> SurfaceJet:
    cu, su = math.cos(u), math.sin(u)
    cv, sv = math.cos(v), math.sin(v)
    r = _SQRT2 + cu
    return SurfaceJet(
        S=np.array([r * cv, r * sv, su]),
        S_u=np.array([-su * cv, -su * sv, cu]),
        S_v=np.array([-r * sv, r * cv, 0.0]),
        S_uu=np.array([-cu * cv, -cu * sv, -su]),
        S_uv=np.array([su * sv, -su * cv, 0.0]),
        S_vv=np.array([-r * cv, -r * sv, 0.0]),
    )


def _catenoid_jet(u: float, v: float) -> SurfaceJet:
    ch, sh = math.cosh(u), math.sinh(u)
    cv, sv = math.cos(v), math.sin(v)
    return SurfaceJet(
        S=np.array([ch * cv, ch * sv, u]),
        S_u=np.array([sh * cv, sh * sv, 1.0]),
        S_v=np.array([-ch * sv, ch * cv, 0.0]),
        S_uu=np.array([ch * cv, ch * sv, 0.0]),
        S_uv=np.array([-sh * sv, sh * cv, 0.0]),
        S_vv=np.array([-ch * cv, -ch * sv, 0.0]),
    )


def _enneper_jet(u: float, v: float) -> SurfaceJet:
    return SurfaceJet(
        S=np.array([u - u**3 / 3 + u * v * v, -v + v**3 / 3 - v * u * u, u * u - v * v]),
        S_u=np.array([1 - u * u + v * v, -2 * u * v, 2 * u]),
        S_v=np.array([2 * u * v, -1 + v * v - u * u, -2 * v]),
        S_uu=np.array([-2 * u, -2 * v, 2.0]),
        S_uv=np.array([2 * v, -2 * u, 0.0]),
        S_vv=np.array([2 * u, 2 * v, -2.0]),
    )


def _max_enneper_jet(u: float, v: float) -> SurfaceJet:
    return SurfaceJet(
        S=np.array([u + u**3 / 3 - u * v * v, -v - v**3 / 3 + v * u * u, v * v - u * u]),
        S_u=np.array([1 + u * u - v * v, 2 * u * v, -2 * u]),
        S_v=np.array([-2 * u * v, -1 - v * v + u * u, 2 * v]),
        S_uu=np.array([2 * u, 2 * v, -2.0]),
        S_uv=np.array([-2 * v, 2 * u, 0.0]),
        S_vv=np.array([-2 * u, -2 * v, 2.0]),
    )


def _cycloid_jet(u: float, v: float) -> SurfaceJet:
    cu, su = math.cos(u), math.sin(u)
    cv, sv = math.cos(v), math.sin(v)
    r = 2.0 + cu
    return SurfaceJet(
        S=np.array([r * cv, r * sv, u - su]),
        S_u=np.array([-su * cv, -su * sv, 1.0 - cu]),
        S_v=np.array([-r * sv, r * cv, 0.0]),
        S_uu=np.array([-cu * cv, -cu * sv, su]),
        S_uv=np.array([su * sv, -su * cv, 0.0]),
        S_vv=np.array([-r * cv, -r * sv, 0.0]),
    )


_TWO_PI = 2.0 * math.pi


def _build_catalog() -> list[SurfaceSpec]:
    sphere = SurfaceSpec(
        name="sphere",
        signature=Signature.EUCLIDEAN,
        jet=_sphere_jet,
        v_period=_TWO_PI,
        u_domain=(-math.pi / 2, math.pi / 2),
    )
    clifford = SurfaceSpec(
        name="clifford-torus",
        signature=Signature.EUCLIDEAN,
        jet=_clifford_jet,
        u_period=_TWO_PI,
        v_period=_TWO_PI,
    )
    catenoid = SurfaceSpec(
        name="catenoid",
        signature=Signature.EUCLIDEAN,
        jet=_catenoid_jet,
        v_period=_TWO_PI,
        conformal=ConformalData(
            f=lambda u, v: math.cosh(u) ** 2,
            f_u=lambda u, v: 2.0 * math.cosh(u) * math.sinh(u),
            f_v=lambda u, v: 0.0,
            sv_suu=lambda u, v: 0.0,
            su_svv=lambda u, v: -math.sinh(u) * math.cosh(u),
        ),
    )
    enneper = SurfaceSpec(
        name="enneper",
        signature=Signature.EUCLIDEAN,
        jet=_enneper_jet,
        conformal=ConformalData(
            f=lambda u, v: (1 + u * u + v * v) ** 2,
            f_u=lambda u, v: 4 * u * (1 + u * u + v * v),
            f_v=lambda u, v: 4 * v * (1 + u * u + v * v),
            sv_suu=lambda u, v: -2 * v * (1 + u * u + v * v),
            su_svv=lambda u, v: -2 * u * (1 + u * u + v * v),
        ),
    )
    max_enneper = SurfaceSpec(
        name="maximal-enneper",
        signature=Signature.LORENTZIAN,
        jet=_max_enneper_jet,
        conformal=ConformalData(
            f=lambda u, v: (1 - u * u - v * v) ** 2,
            f_u=lambda u, v: -4 * u * (1 - u * u - v * v),
            f_v=lambda u, v: -4 * v * (1 - u * u - v * v),
            sv_suu=lambda u, v: 2 * v * (1 - u * u - v * v),
            su_svv=lambda u, v: 2 * u * (1 - u * u - v * v),
        ),
    )
    cycloid = SurfaceSpec(
        name="cycloid-rev",
        signature=Signature.EUCLIDEAN,
        jet=_cycloid_jet,
        u_period=_TWO_PI,
        v_period=_TWO_PI,
    )
    return [sphere, clifford, catenoid, enneper, max_enneper, cycloid]


_CATALOG = _build_catalog()


def catalog() -> list[SurfaceSpec]:
    """All built-in surfaces."""
    return list(_CATALOG)


def get_surface(name: str) -> SurfaceSpec:
    for spec in _CATALOG:
        if spec.name == name:
            return spec
    names = ", ".join(s.name for s in _CATALOG)
    raise KeyError(f"unknown surface {name!r}; catalog: {names}")


# ---------------------------------------------------------------------------
# maximal Enneper as a graph over the horizontal plane

_MAX_ENNEPER = None  # filled below


def invert_maximal_enneper(x: float, y: float, seed: tuple[float, float],
                           tol: float = 1e-12, max_iter: int = 60) -> tuple[float, float]:
    """Newton inversion of the horizontal projection of the chart.

    Finds (u, v) with (S1, S2)(u, v) = (x, y), seeded from a nearby chart
    point.  The projection Jacobian degenerates on the singular circle
    u^2 + v^2 = 1; conditioning deteriorates as the target approaches it.
    """
    u, v = float(seed[0]), float(seed[1])
    for _ in range(max_iter):
        jet = _max_enneper_jet(u, v)
        r = np.array([jet.S[0] - x, jet.S[1] - y])
        if np.hypot(r[0], r[1]) < tol:
            return u, v
        J = np.array([[jet.S_u[0], jet.S_v[0]], [jet.S_u[1], jet.S_v[1]]])
        try:
            step = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(J, r, rcond=None)
        u -= step[0]
        v -= step[1]
    jet = _max_enneper_jet(u, v)
    if np.hypot(jet.S[0] - x, jet.S[1] - y) < 1e-9:
        return u, v
    raise ValueError(f"chart inversion did not converge at ({x}, {y})")


def _graph_jet_from_chart(u: float, v: float) -> tuple[float, float, float, float, float, float]:
    """Graph data (f, f_x, f_y, f_xx, f_xy, f_yy) at the image of chart point (u, v).

    First derivatives solve z_u = f_x x_u + f_y y_u (and the v row);
    second derivatives solve the three chain-rule relations for the
    graph Hessian.  Requires the horizontal projection to be immersive.
    """
    jet = _max_enneper_jet(u, v)
    J = np.array([[jet.S_u[0], jet.S_u[1]], [jet.S_v[0], jet.S_v[1]]])
    g = np.linalg.solve(J, np.array([jet.S_u[2], jet.S_v[2]]))
    fx, fy = g
    # rows: z_ab - f_x x_ab - f_y y_ab = f_xx x_a x_b + f_xy (x_a y_b + y_a x_b) + f_yy y_a y_b
    rows = []
    rhs = []
    for Sab, (a, b) in ((jet.S_uu, ("u", "u")), (jet.S_uv, ("u", "v")), (jet.S_vv, ("v", "v"))):
        xa, ya = (jet.S_u[0], jet.S_u[1]) if a == "u" else (jet.S_v[0], jet.S_v[1])
        xb, yb = (jet.S_u[0], jet.S_u[1]) if b == "u" else (jet.S_v[0], jet.S_v[1])
        rows.append([xa * xb, xa * yb + ya * xb, ya * yb])
        rhs.append(Sab[2] - fx * Sab[0] - fy * Sab[1])
    h = np.linalg.solve(np.array(rows), np.array(rhs))
    return float(jet.S[2]), float(fx), float(fy), float(h[0]), float(h[1]), float(h[2])


def maximal_enneper_graph(seed: tuple[float, float] = (0.0, 0.0)) -> GraphSurface:
    """Maximal Enneper as a graph z = f(x, y) near the seeded chart region.

    Evaluations Newton-invert the horizontal projection with a
    continuation cache, then convert chart derivatives to graph
    derivatives.  Valid away from the singular circle, where the
    projection degenerates.
    """
    cache = {"uv": (float(seed[0]), float(seed[1]))}

    def chart_at(x: float, y: float):
        u, v = invert_maximal_enneper(x, y, seed=cache["uv"])
        cache["uv"] = (u, v)
        return _graph_jet_from_chart(u, v)

    return GraphSurface(
        f=lambda x, y: chart_at(x, y)[0],
        f_u=lambda x, y: chart_at(x, y)[1],
        f_v=lambda x, y: chart_at(x, y)[2],
        f_uu=lambda x, y: chart_at(x, y)[3],
        f_uv=lambda x, y: chart_at(x, y)[4],
        f_vv=lambda x, y: chart_at(x, y)[5],
        name="maximal-enneper-graph",
    )
