"""Sharp lower bounds for the area of curvature-constrained convex curves.

For a closed convex curve on the hyperbolic plane of curvature -k^2 whose
geodesic curvature is everywhere >= lambda, the enclosed area admits a sharp
lower bound in terms of the length L.  The bound takes three closed forms
depending on how lambda compares with k (arcs of circles, horocycles, or
equidistants), and is attained exactly by the two-arc lunes built in
hyplune.shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

# relative tolerance deciding lambda == k
_CRITICAL_RTOL = 1e-12
# clamp window: supercritical tan argument within this of pi/2 uses the
# closed-form circle endpoint instead of evaluating tan
_ENDPOINT_TOL = 1e-9


class Regime(str, Enum):
    SUPERCRITICAL = "supercritical"  # lambda > k: circle arcs
    CRITICAL = "critical"            # lambda = k: horocycle arcs
    SUBCRITICAL = "subcritical"      # lambda < k: equidistant arcs


@dataclass(frozen=True)
class BoundResult:
    regime: Regime
    L: float
    bound: float
    L_max: float


def classify(lam: float, k: float) -> Regime:
    """Regime of the constraint lambda relative to the ambient scale k."""
    if not (lam > 0) or not (k > 0):
        raise DomainError("lambda and k must be positive")
    if abs(lam - k) <= _CRITICAL_RTOL * max(lam, k):
        return Regime.CRITICAL
    return Regime.SUPERCRITICAL if lam > k else Regime.SUBCRITICAL


def max_length(lam: float, k: float) -> float:
    """Largest admissible length: the full circle of curvature lambda, if any.

    Supercritical curves cannot be longer than that circle; critical and
    subcritical curves are unbounded in length.
    """
    if classify(lam, k) is Regime.SUPERCRITICAL:
        return 2.0 * math.pi / math.sqrt(lam * lam - k * k)
    return math.inf


def circle_area(lam: float, k: float) -> float:
    """Area enclosed by the circle of geodesic curvature lambda on H^2(-k^2)."""
    if classify(lam, k) is not Regime.SUPERCRITICAL:
        raise DomainError("only curvature lambda > k bounds a circle")
    return 2.0 * math.pi / (k * k) * (lam / math.sqrt(lam * lam - k * k) - 1.0)


def critical_bound(k: float, L: float) -> float:
    """The critical-regime formula L/k - (4/k^2) arctan(kL/4).

    This is also a valid (weaker) lower bound for any lambda >= k, which is
    why it is exposed separately from reverse_bound.
    """
    if not k > 0:
        raise DomainError("k must be positive")
    if L < 0:
        raise DomainError("length must be nonnegative")
    return L / k - 4.0 / (k * k) * math.atan(k * L / 4.0)


def reverse_bound(lam: float, k: float, L: float) -> BoundResult:
    """Sharp lower bound on enclosed area at fixed length L.

    Piecewise closed form by regime; nondecreasing in L, continuous in
    lambda across lambda = k, and attained by the lune of that length.
    """
    regime = classify(lam, k)
    l_max = max_length(lam, k)
    if L < 0:
        raise DomainError("length must be nonnegative")
    if L > l_max * (1.0 + 1e-12):
        raise DomainError(
            f"length {L!r} exceeds the maximal admissible length {l_max!r} "
            f"(full circle of curvature {lam!r})"
        )

    if regime is Regime.CRITICAL:
        val = critical_bound(k, L)
    elif regime is Regime.SUPERCRITICAL:
        m = math.sqrt(lam * lam - k * k)
        phi = m * L / 4.0
        if phi >= math.pi / 2.0 - _ENDPOINT_TOL:
            val = circle_area(lam, k)  # tan blows up; the limit is the circle
        else:
            val = lam / (k * k) * L - 4.0 / (k * k) * math.atan(
                lam / m * math.tan(phi)
            )
    else:
        m = math.sqrt(k * k - lam * lam)
        val = lam / (k * k) * L - 4.0 / (k * k) * math.atan(
            lam / m * math.tanh(m * L / 4.0)
        )
    return BoundResult(regime, L, max(val, 0.0), l_max)


def classical_defect(L: float, A: float, c: float = -1.0) -> float:
    """Isoperimetric defect L^2 - 4*pi*A + c*A^2 on the plane of curvature c.

    Nonnegative for the (L, A) of any embedded closed curve; zero exactly
    for circles.
    """
    if L < 0 or A < 0:
        raise DomainError("length and area must be nonnegative")
    return L * L - 4.0 * math.pi * A + c * A * A


def euclidean_limit(lam: float, L: float) -> float:
    """k -> 0 limit of the bound: (1/lam^2)(lam*L/2 - sin(lam*L/2)).

    Valid for lam*L <= 2*pi (up to the full Euclidean circle of curvature
    lambda); used as the flat-plane consistency target.
    """
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return (lam * L / 2.0 - math.sin(lam * L / 2.0)) / (lam * lam)


def regime_limits_check(k: float, L: float, eps_values=(1e-3, 1e-5)) -> dict:
    """Continuity of the bound across lambda = k.

    Evaluates the supercritical formula at lambda = k(1+eps) and the
    subcritical one at lambda = k(1-eps) against the critical value, for a
    shrinking sequence of eps; deviations must shrink with eps.
    """
    if not k > 0:
        raise DomainError("k must be positive")
    if L < 0:
        raise DomainError("length must be nonnegative")
    ref = critical_bound(k, L)
    eps_values = sorted(eps_values, reverse=True)
    above = {eps: abs(reverse_bound(k * (1.0 + eps), k, L).bound - ref) for eps in eps_values}
    below = {eps: abs(reverse_bound(k * (1.0 - eps), k, L).bound - ref) for eps in eps_values}
    devs_a = [above[e] for e in eps_values]
    devs_b = [below[e] for e in eps_values]
    return {
        "k": k,
        "L": L,
        "critical_value": ref,
        "above": above,
        "below": below,
        "shrinks": all(x >= y for x, y in zip(devs_a, devs_a[1:]))
        and all(x >= y for x, y in zip(devs_b, devs_b[1:])),
    }
