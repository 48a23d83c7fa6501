"""Reverse isoperimetric bounds: regimes, closed forms, limits, defects."""

import math

import numpy as np
import pytest

from hyplune.bounds import (
    Regime,
    circle_area,
    classical_defect,
    classify,
    critical_bound,
    euclidean_limit,
    max_length,
    regime_limits_check,
    reverse_bound,
)
from hyplune.errors import DomainError

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------- classification

def test_classify_basic():
    assert classify(2.0, 1.0) is Regime.SUPERCRITICAL
    assert classify(1.0, 1.0) is Regime.CRITICAL
    assert classify(0.5, 1.0) is Regime.SUBCRITICAL


def test_classify_uses_relative_tolerance():
    assert classify(1.0 + 1e-13, 1.0) is Regime.CRITICAL
    assert classify(1.0 - 1e-13, 1.0) is Regime.CRITICAL
    assert classify(2.0 * (1.0 + 1e-13), 2.0) is Regime.CRITICAL


def test_classify_rejects_nonpositive():
    with pytest.raises(DomainError):
        classify(0.0, 1.0)
    with pytest.raises(DomainError):
        classify(1.0, -1.0)


# ---------------------------------------------------------------- admissible lengths

def test_max_length_supercritical_closed_form():
    assert max_length(SQRT2, 1.0) == pytest.approx(2.0 * math.pi, abs=1e-12)
    assert max_length(2.0, 1.0) == pytest.approx(2.0 * math.pi / math.sqrt(3.0), abs=1e-12)


def test_max_length_infinite_at_or_below_critical():
    assert math.isinf(max_length(1.0, 1.0))
    assert math.isinf(max_length(0.5, 1.0))


# ---------------------------------------------------------------- the bound itself

def test_bound_zero_length_in_every_regime():
    for lam in (0.5, 1.0, SQRT2):
        assert reverse_bound(lam, 1.0, 0.0).bound == 0.0


def test_critical_unit_bound_at_length_four():
    res = reverse_bound(1.0, 1.0, 4.0)
    assert res.regime is Regime.CRITICAL
    assert abs(res.bound - (4.0 - math.pi)) < 1e-12


def test_supercritical_endpoint_equals_circle_area():
    """At L_max the bound closes up to the area of the matching circle.

    For lambda = sqrt(2) the circle with geodesic curvature sqrt(2) has
    cosh(r) = sqrt(2), so its area 2 pi (sqrt(2) - 1) must equal the bound
    evaluated at L_max = 2 pi.
    """
    res = reverse_bound(SQRT2, 1.0, 2.0 * math.pi)
    target = 2.0 * math.pi * (SQRT2 - 1.0)
    assert abs(res.bound - target) < 1e-9
    assert abs(circle_area(SQRT2, 1.0) - target) < 1e-12
    assert abs(res.bound - circle_area(SQRT2, 1.0)) < 1e-9


def test_bound_rejects_inadmissible_length():
    with pytest.raises(DomainError):
        reverse_bound(SQRT2, 1.0, -1.0)
    with pytest.raises(DomainError) as err:
        reverse_bound(SQRT2, 1.0, 10.0)
    assert "6.28" in str(err.value)  # names the admissible maximum


def test_bound_monotone_in_length():
    for lam in (0.5, 1.0, SQRT2, 3.0):
        cap = max_length(lam, 1.0)
        top = cap if math.isfinite(cap) else 12.0
        grid = np.linspace(0.0, top, 400)
        vals = [reverse_bound(lam, 1.0, L).bound for L in grid]
        diffs = np.diff(vals)
        assert np.all(diffs >= -1e-12)


def test_subcritical_asymptote():
    """bound(L) - L * lambda-slope tends to -2 pi / 3 for lambda = 1/2, k = 1.

    The approach is exponential, so L = 60 is far past convergence.
    """
    lam = 0.5
    gap = reverse_bound(lam, 1.0, 60.0).bound - 0.5 * 60.0
    assert gap == pytest.approx(-2.0 * math.pi / 3.0, abs=1e-9)
    assert gap == pytest.approx(-2.09440, abs=5e-6)


def test_critical_bound_agrees_at_lambda_equals_k():
    for L in (0.5, 2.0, 7.0):
        assert critical_bound(1.0, L) == pytest.approx(
            reverse_bound(1.0, 1.0, L).bound, abs=1e-14
        )


def test_supercritical_bound_dominates_critical():
    # the critical expression stays valid above the threshold, just weaker
    for L in np.linspace(0.1, 6.0, 40):
        assert reverse_bound(SQRT2, 1.0, L).bound >= critical_bound(1.0, L) - 1e-12


def test_bound_result_carries_inputs():
    res = reverse_bound(2.0, 1.0, 1.5)
    assert res.L == 1.5
    assert res.regime is Regime.SUPERCRITICAL
    assert res.L_max == pytest.approx(2.0 * math.pi / math.sqrt(3.0), abs=1e-12)


# ---------------------------------------------------------------- defects

def test_classical_defect_vanishes_on_circles():
    # hyperbolic circle, curvature -1 plane
    L = 2.0 * math.pi * math.sinh(1.0)
    A = 2.0 * math.pi * (math.cosh(1.0) - 1.0)
    assert abs(classical_defect(L, A)) < 1e-9
    # euclidean circle, c = 0
    assert abs(classical_defect(2.0 * math.pi, math.pi, c=0.0)) < 1e-12


def test_classical_defect_positive_off_circle():
    assert classical_defect(10.0, 1.0) > 0.0


# ---------------------------------------------------------------- limits

def test_euclidean_limit_matches_small_curvature():
    """Rescaled k -> 0 bounds approach the euclidean closed form.

    At k = 1e-3 the relative deviation over L in [0.5, 3] must be below
    1e-5, and it shrinks with k at second order.
    """
    lam = 1.0
    worst = {}
    for k in (1e-2, 1e-3):
        devs = []
        for L in np.linspace(0.5, 3.0, 11):
            target = euclidean_limit(lam, L)
            got = reverse_bound(lam, k, L).bound
            devs.append(abs(got - target) / target)
        worst[k] = max(devs)
    assert worst[1e-3] < 1e-5
    assert worst[1e-3] < worst[1e-2] / 10.0


def test_regime_limits_check_continuity():
    chk = regime_limits_check(1.0, 4.0)
    assert chk["k"] == 1.0
    assert chk["L"] == 4.0
    assert chk["shrinks"] is True
    # values are already absolute deviations from the critical bound
    assert max(chk["above"][1e-5], chk["below"][1e-5]) < 1e-4
    assert chk["above"][1e-5] < chk["above"][1e-3]
