"""Shared test fixtures: simple synthetic surfaces and state generators."""

import math

import numpy as np

from magsurf.ambient import Signature
from magsurf.dynamics import ParamState, speed_sq
from magsurf.surfaces import ConformalData, SurfaceJet, SurfaceSpec

_Z = np.zeros(3)


def plane_spec(u_domain=None, v_domain=None) -> SurfaceSpec:
    """Flat Euclidean plane S(u, v) = (u, v, 0), trivially conformal (f = 1)."""

    def jet(u: float, v: float) -> SurfaceJet:
        return SurfaceJet(
            S=np.array([u, v, 0.0]),
            S_u=np.array([1.0, 0.0, 0.0]),
            S_v=np.array([0.0, 1.0, 0.0]),
            S_uu=_Z, S_uv=_Z, S_vv=_Z,
        )

    return SurfaceSpec(
        name="plane",
        signature=Signature.EUCLIDEAN,
        jet=jet,
        conformal=ConformalData(
            f=lambda u, v: 1.0,
            f_u=lambda u, v: 0.0,
            f_v=lambda u, v: 0.0,
            sv_suu=lambda u, v: 0.0,
            su_svv=lambda u, v: 0.0,
        ),
        u_domain=u_domain,
        v_domain=v_domain,
    )


def random_state(rng, name: str) -> ParamState:
    """A random non-degenerate state in the interior of the named chart."""
    while True:
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
        if du * du + dv * dv >= 1e-4:
            return ParamState(0.0, u, v, du, dv)


def unit_speed(spec: SurfaceSpec, s: ParamState) -> ParamState:
    scale = 1.0 / math.sqrt(speed_sq(spec, s))
    return ParamState(s.t, s.u, s.v, s.du * scale, s.dv * scale)
