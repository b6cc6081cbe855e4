"""Admissible directions at lightlike points: closed form vs sweep oracle."""

import math

import numpy as np
import pytest

from magsurf.errors import FlatPointError, NotLightlikeError
from magsurf.integrate import StopReason
from magsurf.singular import (
    LightlikePointData,
    admissible_directions,
    approach_fan_experiment,
    direction_report,
    maximal_enneper_lightlike_data,
    normalize_frame,
)
from magsurf.surfaces import KappaField, get_surface

TWO_PI = 2.0 * math.pi


def _data(hessian, gradient=(1.0, 0.0), point=(0.0, 0.0)):
    return LightlikePointData(point=point, gradient=gradient, hessian=hessian)


def _form_residual(hessian, theta):
    fuu, fuv, fvv = hessian
    c, s = math.cos(theta), math.sin(theta)
    return fuu * c * c + 2 * fuv * c * s + fvv * s * s


def test_data_validation():
    with pytest.raises(NotLightlikeError):
        _data((1, 0, 1), gradient=(0.5, 0.0))  # gradient not unit
    with pytest.raises(ValueError):
        _data((1, float("nan"), 1))


def test_normalize_frame_worked_cases():
    phi, norm = normalize_frame(_data((1, 2, 3)))
    assert phi == 0.0
    assert norm.hessian == pytest.approx((1, 2, 3))

    phi, norm = normalize_frame(_data((4.0, 0.0, 7.0), gradient=(0.0, 1.0)))
    assert phi == pytest.approx(-math.pi / 2)
    assert norm.gradient == pytest.approx((1.0, 0.0), abs=1e-12)
    assert norm.hessian == pytest.approx((7.0, 0.0, 4.0), abs=1e-12)  # diag swapped

    r = 1 / math.sqrt(2)
    phi, norm = normalize_frame(_data((1, 0, 1), gradient=(r, r)))
    assert phi == pytest.approx(-math.pi / 4)
    assert norm.gradient == pytest.approx((1.0, 0.0), abs=1e-12)


def test_worked_direction_cases():
    rep = admissible_directions(_data((0.0, 1.0, 0.0)))
    assert rep.case == "double-degenerate"
    assert rep.angles == pytest.approx(
        (0.0, math.pi / 2, math.pi, 3 * math.pi / 2), abs=1e-12)

    rep = admissible_directions(_data((-1.0, 0.0, 1.0)))
    assert rep.case == "generic-tan"
    assert rep.angles == pytest.approx(
        (0.0, math.pi / 4, 3 * math.pi / 4, math.pi,
         5 * math.pi / 4, 7 * math.pi / 4), abs=1e-12)

    rep = admissible_directions(_data((1.0, 0.0, 1.0)))
    assert rep.case == "no-real-roots"
    assert rep.angles == pytest.approx((0.0, math.pi), abs=1e-12)


def test_generic_cot_case():
    rep = admissible_directions(_data((1.0, 0.5, 0.0)))
    assert rep.case == "generic-cot"
    for th in rep.angles:
        if min(abs(th), abs(th - math.pi), abs(th - TWO_PI)) > 1e-9:
            assert abs(_form_residual((1.0, 0.5, 0.0), th)) <= 1e-10


def test_flat_point_refused():
    with pytest.raises(FlatPointError):
        admissible_directions(_data((0.0, 0.0, 0.0)))


def test_not_normalized_refused():
    with pytest.raises(NotLightlikeError):
        admissible_directions(_data((1, 0, 1), gradient=(0.0, 1.0)))


def test_random_hessian_properties(rng):
    """Count <= 6, even, contains the lightlike pair, residuals certify."""
    for _ in range(10_000):
        h = tuple(rng.normal(scale=rng.choice([1e-3, 1.0, 1e3])) for _ in range(3))
        if max(abs(x) for x in h) == 0.0:
            continue
        rep = admissible_directions(_data(h))
        angles = rep.angles
        assert len(angles) <= 6
        assert len(angles) % 2 == 0
        assert 0.0 in angles
        assert any(abs(a - math.pi) <= 1e-9 for a in angles)
        hscale = max(abs(x) for x in h)
        for th in angles:
            # antipodal partner present
            partner = (th + math.pi) % TWO_PI
            assert any(abs(partner - b) <= 1e-8
                       or abs(abs(partner - b) - TWO_PI) <= 1e-8 for b in angles)
            if min(abs(th), abs(th - math.pi), abs(th - TWO_PI)) > 1e-9:
                assert abs(_form_residual(h, th)) <= 1e-10 * hscale


def test_sweep_oracle_completeness(rng):
    """Every sign change of the quadratic form over a dense theta sweep
    lies within 1e-6 of a returned angle."""
    thetas = np.linspace(0.0, TWO_PI, 10_000, endpoint=False)
    cos2 = np.cos(thetas) ** 2
    sincos = np.sin(thetas) * np.cos(thetas)
    sin2 = np.sin(thetas) ** 2
    for _ in range(300):
        h = rng.normal(size=3)
        rep = admissible_directions(_data(tuple(h)))
        vals = h[0] * cos2 + 2 * h[1] * sincos + h[2] * sin2
        sign_flip = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
        for k in sign_flip:
            # bisect the flip to high accuracy
            lo, hi = thetas[k], thetas[k + 1]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if _form_residual(tuple(h), lo) * _form_residual(tuple(h), mid) <= 0:
                    hi = mid
                else:
                    lo = mid
            root = 0.5 * (lo + hi)
            dist = min(min(abs(root - a), abs(abs(root - a) - TWO_PI))
                       for a in rep.angles)
            assert dist <= 1e-6


def test_frame_covariance(rng):
    """Angle sets from a randomly rotated frame, mapped back, agree."""
    for _ in range(200):
        h = rng.normal(size=3)
        if max(abs(x) for x in h) < 1e-6:
            continue
        base = admissible_directions(_data(tuple(h)))
        phi = rng.uniform(0, TWO_PI)
        c, s = math.cos(phi), math.sin(phi)
        R = np.array([[c, -s], [s, c]])
        H = R @ np.array([[h[0], h[1]], [h[1], h[2]]]) @ R.T
        g = R @ np.array([1.0, 0.0])
        rotated = LightlikePointData(point=(0.0, 0.0),
                                     gradient=(float(g[0]), float(g[1])),
                                     hessian=(float(H[0, 0]), float(H[0, 1]),
                                              float(H[1, 1])))
        rep = direction_report(rotated)
        # normalized-frame angles are invariant under pre-rotation of the
        # input frame: both paths normalize to the same gradient (1, 0)
        assert len(rep.angles) == len(base.angles)
        for a in base.angles:
            assert min(min(abs(a - b), abs(abs(a - b) - TWO_PI))
                       for b in rep.angles) <= 1e-9


def test_direction_report_maps_lightlike_pair_back():
    r = 1 / math.sqrt(2)
    rep = direction_report(_data((1, 0, -1), gradient=(r, r)))
    assert rep.rotation == pytest.approx(-math.pi / 4)
    pair = sorted(rep.lightlike_pair)
    assert pair[0] == pytest.approx(math.pi / 4, abs=1e-12)
    assert pair[1] == pytest.approx(math.pi / 4 + math.pi, abs=1e-12)


def test_maximal_enneper_lightlike_data():
    data = maximal_enneper_lightlike_data((1.0, 0.0))
    gu, gv = data.gradient
    assert gu * gu + gv * gv == pytest.approx(1.0, abs=1e-12)
    assert gu == pytest.approx(-1.0, abs=1e-9)
    rep = direction_report(data)
    assert 2 <= len(rep.angles) <= 6
    with pytest.raises(NotLightlikeError):
        maximal_enneper_lightlike_data((0.5, 0.0))  # not on the circle


def test_fan_rays_avoid_singular_point():
    """Rays aimed at a singular chart point stop at the degenerate set or
    pass by; the conformal speed identity certifies velocity blow-up."""
    spec = get_surface("maximal-enneper")
    fan = approach_fan_experiment(spec, (1.0, 0.0), KappaField.zero(),
                                  n_rays=8, offset=0.1, t_max=3.0, rel_tol=1e-9)
    assert len(fan.rays) == 8
    for ray in fan.rays:
        assert (ray.stop_reason is StopReason.DEGENERATE_POINT
                or ray.closest_distance > 1e-3)
        assert ray.conformal_identity_violation <= 1e-7
    assert fan.closest_overall() > 0.0
