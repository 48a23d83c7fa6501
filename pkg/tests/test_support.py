"""Support-function calculus: contact radius, curvature, quadrature, rescaling."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyplune.bounds import reverse_bound
from hyplune.errors import AdmissibilityError, DomainError
from hyplune.hyperboloid import discrete_curvature, turning_angle
from hyplune.support import (
    SupportProfile,
    contact_radius,
    length_and_area,
    profile_from_control,
    radius_of_curvature,
    rescale,
)

TWO_PI = 2.0 * math.pi


def contact_points(g, g1, theta):
    # envelope of supporting geodesics, in hyperboloid coordinates
    p0 = 1.0 / np.sqrt(1.0 - g * g - g1 * g1)
    p1 = p0 * (g * np.cos(theta) - g1 * np.sin(theta))
    p2 = p0 * (g * np.sin(theta) + g1 * np.cos(theta))
    return np.column_stack([p0, p1, p2])


def smooth_profile(n):
    t = TWO_PI * np.arange(n) / n
    g = 0.5 + 0.1 * np.cos(2 * t)
    g1 = -0.2 * np.sin(2 * t)
    g2 = -0.4 * np.cos(2 * t)
    return SupportProfile.from_g(g, g1, g2)


# ---------------------------------------------------------------- contact radius

def test_contact_radius_values():
    assert contact_radius(0.0) == 0.0
    assert contact_radius(1.0, 1.0) == pytest.approx(math.tanh(1.0), abs=1e-15)
    assert contact_radius(1.0, 1.0) == pytest.approx(0.76159, abs=5e-6)


def test_contact_radius_saturates_at_inverse_k():
    for k in (0.5, 1.0, 2.0):
        assert contact_radius(50.0, k) == pytest.approx(1.0 / k, abs=1e-12)


def test_contact_radius_rejects_negative_distance():
    with pytest.raises(DomainError):
        contact_radius(-0.1)
    with pytest.raises(DomainError):
        contact_radius(1.0, k=0.0)


@given(st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_contact_radius_monotone(h1, h2):
    lo, hi = sorted((h1, h2))
    assert contact_radius(lo) <= contact_radius(hi) + 1e-15


# ---------------------------------------------------------------- curvature radius

def test_radius_of_curvature_constant_profile():
    r = 0.8
    g = math.tanh(r)
    assert radius_of_curvature(g, 0.0, 0.0) == pytest.approx(g, abs=1e-14)
    assert radius_of_curvature(0.0, 0.0, 0.0) == 0.0


def test_radius_of_curvature_rejects_inadmissible():
    with pytest.raises(AdmissibilityError):
        radius_of_curvature(0.9, 0.5, 0.0)  # g^2 + g'^2 > 1


def test_radius_of_curvature_matches_discrete_curvature():
    """Curvature from (g, g', g'') agrees with a three-point reconstruction.

    Contact points of the smooth test profile are exact closed forms, so
    the discrete turning-angle curvature at step 1e-3 is second-order
    accurate and must match 1/R to 1e-4.
    """
    eps = 1e-3
    for t0 in np.linspace(0.0, TWO_PI, 17)[:-1]:
        th = np.array([t0 - eps, t0, t0 + eps])
        g = 0.5 + 0.1 * np.cos(2 * th)
        g1 = -0.2 * np.sin(2 * th)
        pts = contact_points(g, g1, th)
        kd = discrete_curvature(pts)[0]
        R = radius_of_curvature(
            0.5 + 0.1 * math.cos(2 * t0),
            -0.2 * math.sin(2 * t0),
            -0.4 * math.cos(2 * t0),
        )
        assert kd == pytest.approx(1.0 / R, abs=1e-4)


# ---------------------------------------------------------------- profile validation

def test_profile_requires_uniform_grid():
    n = 128
    theta = np.sort(np.random.default_rng(0).uniform(0, TWO_PI, n))
    z = np.zeros(n)
    with pytest.raises(DomainError):
        SupportProfile(theta, z, z, z, z)


def test_profile_rejects_inadmissible_data():
    n = 128
    g = np.full(n, 0.8)
    g1 = np.full(n, 0.7)  # g^2 + g'^2 = 1.13 > 1
    with pytest.raises(AdmissibilityError):
        SupportProfile.from_g(g, g1, np.zeros(n))


def test_profile_rejects_nonconvex_data():
    n = 128
    t = TWO_PI * np.arange(n) / n
    g = 0.1 + 0.05 * np.cos(t)
    g1 = -0.05 * np.sin(t)
    g2 = -0.5 * np.cos(t)  # g'' + g dips well below zero
    with pytest.raises(AdmissibilityError):
        SupportProfile.from_g(g, g1, g2)


def test_profile_rejects_h_g_mismatch():
    n = 128
    theta = TWO_PI * np.arange(n) / n
    h = np.full(n, 1.0)
    g = np.full(n, 0.5)  # tanh(1) != 0.5
    with pytest.raises(AdmissibilityError):
        SupportProfile(theta, h, g, np.zeros(n), np.zeros(n))


def test_csv_round_trip(tmp_path):
    prof = smooth_profile(256)
    path = tmp_path / "profile.csv"
    prof.to_csv(path)
    back = SupportProfile.from_csv(path)
    assert back.k == prof.k
    assert back.jumps == prof.jumps
    for name in ("theta", "h", "g", "g1", "g2"):
        assert np.array_equal(getattr(back, name), getattr(prof, name))


def test_csv_round_trip_keeps_jumps(tmp_path):
    n = 256
    t = TWO_PI * np.arange(n) / n
    g = 0.5 + 0.1 * np.cos(2 * t)
    prof = SupportProfile.from_g(g, -0.2 * np.sin(2 * t), -0.4 * np.cos(2 * t),
                                 jumps=(0.5, 2.25, 4.0))
    path = tmp_path / "jumpy.csv"
    prof.to_csv(path)
    back = SupportProfile.from_csv(path)
    assert back.jumps == prof.jumps


# ---------------------------------------------------------------- length and area

def test_circle_closed_forms():
    """L = 2 pi sinh r and A = 2 pi (cosh r - 1) at N = 2048, tol 1e-8."""
    for r in (0.25, 0.5, 1.0, 2.0):
        m = length_and_area(SupportProfile.constant(r, n=2048))
        assert m.L == pytest.approx(TWO_PI * math.sinh(r), abs=1e-8)
        assert m.A == pytest.approx(TWO_PI * (math.cosh(r) - 1.0), abs=1e-8)


def test_unit_circle_reference_values():
    # 2*pi*sinh(1) = 7.38400687..., 2*pi*(cosh(1)-1) = 3.41227627...
    m = length_and_area(SupportProfile.constant(1.0, n=2048))
    assert m.L == pytest.approx(7.38401, abs=5e-6)
    assert m.A == pytest.approx(3.41228, abs=5e-6)


def test_point_profile_measures_zero():
    m = length_and_area(SupportProfile.constant(0.0, n=256))
    assert m.L == 0.0
    assert m.A == 0.0


def test_quadrature_order_on_smooth_profiles():
    """Doubling n shrinks the error by at least 4x away from the floor.

    The profile g = 0.5 + 0.02|sin t|^5 is smooth except for odd-order
    kinks at t = 0, pi, which pins the trapezoid error to a measurable
    algebraic order instead of the spectral floor of trig polynomials.
    """

    def kinked(n):
        t = TWO_PI * np.arange(n) / n
        s, c = np.sin(t), np.cos(t)
        a3 = np.abs(s) ** 3
        return SupportProfile.from_g(
            0.5 + 0.02 * np.abs(s) ** 5,
            0.1 * a3 * s * c,
            0.1 * a3 * (4.0 * c * c - s * s),
        )

    ref = length_and_area(kinked(16384))
    errs = []
    for n in (64, 128, 256, 512):
        m = length_and_area(kinked(n))
        errs.append(abs(m.L - ref.L) + abs(m.A - ref.A))
    for coarse, fine in zip(errs, errs[1:]):
        assert coarse >= 4.0 * fine


def test_gauss_bonnet_from_reconstructed_polyline():
    """Total turning of the reconstructed curve equals 2 pi + A.

    The polyline turning angles are computed geometrically from contact
    points, independently of the support-integral formulas, so this checks
    Gauss-Bonnet rather than an algebraic identity of the integrands.
    """
    n = 8192
    prof = smooth_profile(n)
    m = length_and_area(prof)
    pts = contact_points(prof.g, prof.g1, prof.theta)
    total = sum(turning_angle(pts[i - 1], pts[i], pts[(i + 1) % n]) for i in range(n))
    assert total - (TWO_PI + m.A) == pytest.approx(0.0, abs=1e-6)


def test_measurements_reject_isoperimetric_violation():
    from hyplune.support import CurveMeasurements

    with pytest.raises(DomainError):
        CurveMeasurements(1.0, 10.0)  # far more area than a closed curve allows


# ---------------------------------------------------------------- rescaling

def test_rescale_identity_and_example():
    assert rescale(1.3, 1.0, 2.0, 0.7) == (1.3, 2.0, 0.7)
    assert rescale(2.0, 2.0, 3.0, 1.0) == (1.0, 6.0, 4.0)


def test_rescale_round_trip():
    lam, k, L, A = 0.9, 2.5, 1.7, 0.4
    lam1, L1, A1 = rescale(lam, k, L, A)
    # pulling back through 1/k returns the original data
    assert rescale(lam1, 1.0 / k, L1, A1) == pytest.approx((lam, L, A), abs=1e-14)


@given(
    st.floats(0.2, 3.0),
    st.floats(0.2, 3.0),
    st.floats(0.05, 0.9),
)
@settings(max_examples=60)
def test_bound_scaling_covariance(lam_over_k, k, frac):
    """reverse_bound commutes with the curvature rescaling map."""
    from hyplune.bounds import max_length

    lam = lam_over_k * k
    cap = max_length(lam, k)
    L = frac * (cap if math.isfinite(cap) else 6.0 / k)
    b_native = reverse_bound(lam, k, L).bound
    lam1, L1, _ = rescale(lam, k, L, 0.0)
    b_unit = reverse_bound(lam1, 1.0, L1).bound
    assert b_native * k * k == pytest.approx(b_unit, abs=1e-10, rel=1e-10)


# ---------------------------------------------------------------- control integration

def test_zero_control_gives_harmonic_g():
    g0, g1_0 = 0.3, 0.0
    prof, residual = profile_from_control(lambda t: 0.0, g0, g1_0, n=4096)
    expected = g0 * np.cos(prof.theta) + g1_0 * np.sin(prof.theta)
    assert np.max(np.abs(prof.g - expected)) < 1e-9
    assert np.max(np.abs(residual)) < 1e-9


def test_constant_control_circle_is_stationary():
    r = 0.9
    u = math.tanh(r)
    prof, residual = profile_from_control(lambda t: u, u, 0.0, n=2048)
    assert np.max(np.abs(prof.g - u)) < 1e-12
    assert np.max(np.abs(prof.g1)) < 1e-12
    assert np.max(np.abs(residual)) < 1e-12
    m = length_and_area(prof)
    assert m.L == pytest.approx(TWO_PI * math.sinh(r), abs=1e-8)


def test_breakpoints_recorded_as_jumps():
    switches = (1.0, 2.0, 4.0, 5.0)

    def u(t):
        return 0.5 if (1.0 <= t < 2.0) or (4.0 <= t < 5.0) else 0.0

    prof, _ = profile_from_control(u, 0.2, 0.0, n=1024, breakpoints=switches)
    assert prof.jumps == pytest.approx(switches)
