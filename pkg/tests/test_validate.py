"""Oracle battery: green build, mutation detection, determinism."""

from magsurf.dynamics import rhs_general
from magsurf.surfaces import KappaField
from magsurf.validate import (
    check_kappa_residual,
    integrate_sphere_intrinsic,
    run_battery,
)
from magsurf.dynamics import ParamState


def test_battery_all_pass():
    results = run_battery()
    assert len(results) == 5
    for r in results:
        assert r.passed, r.line()


def test_battery_deterministic():
    lines1 = [r.line() for r in run_battery()]
    lines2 = [r.line() for r in run_battery()]
    assert lines1 == lines2


def test_planted_sign_bug_is_detected():
    """A corrupted right-hand side (kappa sign flipped) must fail the
    curvature-defect check: the battery has teeth."""

    def corrupted(spec, kappa, s):
        flipped = KappaField("flipped", lambda u, v: -kappa(u, v))
        return rhs_general(spec, flipped, s)

    result = check_kappa_residual(n_states=50, rhs_fn=corrupted)
    assert not result.passed
    assert result.measure > 1e-3


def test_intrinsic_stepper_latitude_circle():
    """The oracle stepper independently reproduces the stationary
    latitude circle (u constant, geodesic curvature tan u0)."""
    import math

    u0 = 0.3
    kap = KappaField.constant(math.tan(u0))
    y = integrate_sphere_intrinsic(kap, ParamState(0, u0, 0, 0, 1 / math.cos(u0)),
                                   t_end=5.0, h=1e-3)
    assert abs(y[0] - u0) <= 1e-10
    assert abs(y[2]) <= 1e-10
