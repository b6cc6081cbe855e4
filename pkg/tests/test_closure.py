"""Self-intersection detection and orientation-flip shooting."""

import math

import numpy as np
import pytest

from helpers import plane_spec, unit_speed
from magsurf.closure import (
    ShootingFamily,
    _tangent_pair_sine,
    find_self_intersections,
    orbit_report,
    shoot,
)
from magsurf.dynamics import ParamState
from magsurf.errors import BracketError, LostCrossingError
from magsurf.integrate import IntegratorConfig, dense_eval, integrate
from magsurf.surfaces import KappaField, get_surface

PLANE = plane_spec()
TWO_PI = 2.0 * math.pi


def _brute_force_crossings(traj, periods=(None, None)):
    """O(N^2) all-segment-pairs scan, clustered: the independent oracle."""
    pts = traj.y[:, :2]
    hits = []
    n = pts.shape[0] - 1
    for i in range(n):
        a0, da = pts[i], pts[i + 1] - pts[i]
        for j in range(i + 2, n):
            b0, db = pts[j], pts[j + 1] - pts[j]
            M = np.array([[da[0], -db[0]], [da[1], -db[1]]])
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(det) < 1e-14:
                continue
            rhs = b0 - a0
            alpha = (rhs[0] * M[1, 1] - rhs[1] * M[0, 1]) / det
            beta = (M[0, 0] * rhs[1] - M[1, 0] * rhs[0]) / det
            if 0.0 <= alpha <= 1.0 and 0.0 <= beta <= 1.0:
                t1 = traj.t[i] + alpha * (traj.t[i + 1] - traj.t[i])
                t2 = traj.t[j] + beta * (traj.t[j + 1] - traj.t[j])
                hits.append((float(t1), float(t2)))
    merged = []
    for t1, t2 in sorted(hits):
        if merged and abs(merged[-1][0] - t1) < 0.1 and abs(merged[-1][1] - t2) < 0.1:
            continue
        merged.append((t1, t2))
    return merged


def test_retrace_reported_once_with_orientation_zero():
    """A closed curve traced twice is one tangential crossing, t2 - t1 =
    one period, parallel tangents."""
    spec = get_surface("sphere")
    traj = integrate(spec, KappaField.zero(), ParamState(0, 0, 0, 0, 1),
                     IntegratorConfig(t_end=2 * TWO_PI))
    crossings = find_self_intersections(spec, traj)
    assert len(crossings) == 1
    c = crossings[0]
    assert c.t2 - c.t1 == pytest.approx(TWO_PI, abs=1e-6)
    assert c.orientation == 0
    assert c.gap <= 1e-10


def test_simple_curve_has_no_crossings():
    traj = integrate(PLANE, KappaField.zero(), ParamState(0, 0, 0, 1, 0.2),
                     IntegratorConfig(t_end=10.0))
    assert find_self_intersections(PLANE, traj) == []


def test_transversal_crossing_matches_brute_force():
    """Drifting loops in the plane: transversal crossings, checked
    against the all-pairs segment scan."""
    kap = KappaField("drift", lambda u, v: 1.5 + 0.6 * u)
    traj = integrate(PLANE, kap, ParamState(0, 0, 0, 1, 0),
                     IntegratorConfig(t_end=9.0, rel_tol=1e-9))
    crossings = find_self_intersections(PLANE, traj)
    brute = _brute_force_crossings(traj)
    assert len(crossings) == len(brute) == 2
    for c, (bt1, bt2) in zip(crossings, brute):
        assert c.t1 == pytest.approx(bt1, abs=0.05)
        assert c.t2 == pytest.approx(bt2, abs=0.05)
        assert c.orientation in (-1, 1)
        assert c.gap <= 1e-10
    # the two loop crossings wind opposite ways
    assert crossings[0].orientation == -crossings[1].orientation


def test_brute_force_oracle_on_random_trajectories(rng):
    """100 random planar runs: detector agrees with the O(N^2) scan."""
    for _ in range(100):
        a = rng.uniform(1.0, 2.0)
        b = rng.uniform(-0.8, 0.8)
        th = rng.uniform(0, TWO_PI)
        kap = KappaField("drift", lambda u, v, a=a, b=b: a + b * u)
        s0 = ParamState(0, 0, 0, math.cos(th), math.sin(th))
        traj = integrate(PLANE, kap, s0, IntegratorConfig(t_end=7.0, rel_tol=1e-8))
        crossings = [c for c in find_self_intersections(PLANE, traj)
                     if c.orientation != 0]
        brute = _brute_force_crossings(traj)
        assert len(crossings) == len(brute)
        for c, (bt1, bt2) in zip(sorted(crossings, key=lambda c: c.t1), brute):
            assert c.t1 == pytest.approx(bt1, abs=0.05)
            assert c.t2 == pytest.approx(bt2, abs=0.05)


def test_periodic_unwrapping_on_torus():
    """A (0, 1)-winding circle on the Clifford torus re-enters through
    the v period; the crossing is only visible with unwrapping."""
    spec = get_surface("clifford-torus")
    v_speed = 1.0 / (math.sqrt(2) + 1)
    traj = integrate(spec, KappaField.zero(), ParamState(0, 0, 0, 0, v_speed),
                     IntegratorConfig(t_end=1.5 * TWO_PI / v_speed))
    crossings = find_self_intersections(spec, traj)
    assert len(crossings) == 1
    assert crossings[0].t2 - crossings[0].t1 == pytest.approx(TWO_PI / v_speed, rel=1e-6)


def test_orientation_stable_under_refinement():
    """Sign of the tangent-pair sine at the coarse segment guess agrees
    with the sign at the Newton-refined crossing."""
    kap = KappaField("drift", lambda u, v: 1.5 + 0.6 * u)
    traj = integrate(PLANE, kap, ParamState(0, 0, 0, 1, 0),
                     IntegratorConfig(t_end=9.0, rel_tol=1e-9))
    for c in find_self_intersections(PLANE, traj):
        for dt in (-0.02, 0.02):
            s1 = dense_eval(traj, c.t1 + dt)
            s2 = dense_eval(traj, c.t2 + dt)
            perturbed = _tangent_pair_sine(PLANE, s1, s2)
            assert np.sign(perturbed) == c.orientation


def _sphere_angle_family(u0, kappa_free_angle0, angle1):
    spec = get_surface("sphere")

    def gen(s):
        th = kappa_free_angle0 + (angle1 - kappa_free_angle0) * s
        return unit_speed(spec, ParamState(0, u0, 0, math.sin(th), math.cos(th)))

    return ShootingFamily(generator=gen, description="sphere angle family")


def test_shoot_sphere_constant_kappa_closes():
    """With kappa = 1 every trajectory is a circle: the first crossing
    already has parallel tangents and shoot succeeds immediately."""
    spec = get_surface("sphere")
    family = _sphere_angle_family(0.3, 0.2, 0.9)
    orbit = shoot(spec, KappaField.constant(1.0), family, horizon=8.0)
    assert orbit.position_residual <= 1e-6
    assert orbit.velocity_residual <= 1e-5
    assert orbit.crossing.orientation == 0
    report = orbit_report(spec, orbit)
    assert report["length"] == pytest.approx(math.pi * math.sqrt(2), abs=1e-5)
    # re-integration self-consistency: restart at the crossing point
    s1 = dense_eval(orbit.trajectory, orbit.t1)
    re = integrate(spec, KappaField.constant(1.0),
                   ParamState(0.0, s1.u, s1.v, s1.du, s1.dv),
                   IntegratorConfig(t_end=orbit.period, rel_tol=1e-10, abs_tol=1e-12))
    end = re.state(len(re) - 1)
    j0 = spec.jet(s1.u, s1.v)
    j1 = spec.jet(end.u, end.v)
    pos_err = float(np.linalg.norm(j0.S - j1.S))
    assert pos_err <= 2 * max(orbit.position_residual, 1e-9)


def test_orbit_report_equator_winding():
    spec = get_surface("sphere")
    family = ShootingFamily(generator=lambda s: ParamState(0, 0, 0, 0, 1),
                            description="equator")
    orbit = shoot(spec, KappaField.zero(), family, horizon=2.2 * TWO_PI)
    report = orbit_report(spec, orbit)
    assert report["winding"] == {"v": 1}
    assert report["period"] == pytest.approx(TWO_PI, abs=1e-6)
    assert report["length"] == pytest.approx(TWO_PI, abs=1e-6)


def test_shoot_no_crossing_raises():
    spec = get_surface("sphere")
    family = ShootingFamily(generator=lambda s: ParamState(0, 0, 0, 0, 1),
                            description="equator, horizon too short")
    with pytest.raises(LostCrossingError):
        shoot(spec, KappaField.zero(), family, horizon=5.0)


def test_shoot_same_orientation_bracket_raises():
    """A narrow angle bracket on the Clifford torus whose tracked
    crossing keeps one orientation at both endpoints."""
    spec = get_surface("clifford-torus")

    def gen(s):
        th = 0.5 + 0.02 * s
        return unit_speed(spec, ParamState(0, 0, 0, math.sin(th), math.cos(th)))

    family = ShootingFamily(generator=gen, description="narrow clifford bracket")
    with pytest.raises(BracketError):
        shoot(spec, KappaField.zero(), family, horizon=35.0,
              integrator=IntegratorConfig(t_end=35.0, rel_tol=1e-8, abs_tol=1e-10))
