"""Support-function calculus for convex curves on the hyperbolic plane.

A convex curve with an interior origin is encoded by its support function
h(theta) -- the distance from the origin to the supporting geodesic
perpendicular to the ray at angle theta -- or equivalently by the contact
radius g = tanh(h) (at k = 1).  Length and enclosed area are integrals of
closed-form expressions in (g, g', g''), and the curve's radius of
curvature R acts as the control variable of the optimal-control view.

Corners of the curve appear as angle windows where R = 0; they contribute
nothing to the length integral but keep contributing to the area integral,
so no special-casing is needed in the functionals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .control import dynamics
from .errors import AdmissibilityError, DomainError, IntegrationError

_ADMISSIBILITY_FLOOR = -1e-12
_CONVEXITY_FLOOR = -1e-9


def contact_radius(h: float, k: float = 1.0) -> float:
    """Contact radius of curvature g = (1/k) * tanh(k*h)."""
    if h < 0:
        raise DomainError("support distance must be nonnegative")
    if not k > 0:
        raise DomainError("k must be positive")
    return math.tanh(k * h) / k


def radius_of_curvature(g, g1, g2):
    """Radius of curvature R = (g'' + g) / ((1 - g^2 - g'^2)/(1 - g^2))^(3/2).

    Accepts scalars or arrays; R >= 0 exactly when the data is convex and
    R = 1/kappa relates it to the geodesic curvature.
    """
    g = np.asarray(g, float)
    g1 = np.asarray(g1, float)
    g2 = np.asarray(g2, float)
    outer = 1.0 - g * g
    inner = 1.0 - g * g - g1 * g1
    if np.any(outer <= 0.0) or np.any(inner <= 0.0):
        raise AdmissibilityError("need g^2 < 1 and g^2 + g'^2 < 1")
    r = (g2 + g) / (inner / outer) ** 1.5
    return float(r) if r.ndim == 0 else r


def rescale(lam: float, k: float, L: float, A: float) -> tuple[float, float, float]:
    """Map measurements on the plane of curvature -k^2 to the unit plane.

    (lambda, k, L, A) -> (lambda/k, k*L, k^2*A); regimes are preserved and
    all bound computations reduce to k = 1 through this map.
    """
    if not k > 0:
        raise DomainError("k must be positive")
    return (lam / k, k * L, k * k * A)


@dataclass(frozen=True)
class CurveMeasurements:
    """Length and enclosed area of a closed convex curve."""

    L: float
    A: float

    def __post_init__(self):
        if self.L < 0 or self.A < 0:
            raise DomainError("length and area must be nonnegative")
        defect = self.L * self.L - 4.0 * math.pi * self.A - self.A * self.A
        if defect < -1e-8:
            raise DomainError(
                f"(L, A) = ({self.L!r}, {self.A!r}) violates the classical "
                f"isoperimetric inequality (defect {defect:.3e})"
            )


@dataclass(frozen=True, eq=False)
class SupportProfile:
    """Sampled support data on a uniform periodic grid over [0, 2pi).

    theta[i] = 2*pi*i/N; h is the support distance, g = tanh(h) the contact
    radius and g1, g2 its first two theta-derivatives.  Admissibility
    (g^2 + g'^2 < 1) and convexity (g'' + g >= 0) hold up to the stated
    floors; both are what make the length/area integrands real and
    nonnegative.
    """

    theta: np.ndarray
    h: np.ndarray
    g: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    k: float = 1.0
    jumps: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self,
            "jumps",
            tuple(sorted(float(s) % (2.0 * math.pi) for s in self.jumps)),
        )
        n = len(self.theta)
        if n < 64:
            raise DomainError("support profiles need at least 64 samples")
        ref = 2.0 * math.pi * np.arange(n) / n
        if not np.allclose(self.theta, ref, atol=1e-9):
            raise DomainError("theta must be the uniform grid 2*pi*i/N on [0, 2pi)")
        for name in ("theta", "h", "g", "g1", "g2"):
            arr = np.asarray(getattr(self, name), float)
            if arr.shape != (n,):
                raise DomainError(f"field {name} must have shape ({n},)")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.k <= 0:
            raise DomainError("k must be positive")
        gap = np.max(np.abs(self.g - np.tanh(self.k * self.h) / self.k))
        if gap > 1e-12:
            raise AdmissibilityError(f"g and tanh(k*h)/k disagree by {gap:.3e}")
        worst = np.min(1.0 - self.g ** 2 - self.g1 ** 2)
        if worst < _ADMISSIBILITY_FLOOR:
            i = int(np.argmin(1.0 - self.g ** 2 - self.g1 ** 2))
            raise AdmissibilityError(
                f"g^2 + g'^2 exceeds 1 at theta = {self.theta[i]!r} (by {-worst:.3e})"
            )
        conv = np.min(self.g2 + self.g)
        if conv < _CONVEXITY_FLOOR:
            i = int(np.argmin(self.g2 + self.g))
            raise AdmissibilityError(
                f"convexity g'' + g >= 0 fails at theta = {self.theta[i]!r} "
                f"(value {conv:.3e})"
            )

    @property
    def n(self) -> int:
        return len(self.theta)

    @classmethod
    def constant(cls, h: float, n: int = 2048, k: float = 1.0) -> "SupportProfile":
        """Profile of the circle of support distance h about its center."""
        if h < 0:
            raise DomainError("support distance must be nonnegative")
        theta = 2.0 * math.pi * np.arange(n) / n
        g = contact_radius(h, k)
        return cls(theta, np.full(n, float(h)), np.full(n, g),
                   np.zeros(n), np.zeros(n), k)

    @classmethod
    def from_g(cls, g, g1, g2, k: float = 1.0, jumps=()) -> "SupportProfile":
        g = np.asarray(g, float)
        n = len(g)
        theta = 2.0 * math.pi * np.arange(n) / n
        tip = float(np.nextafter(1.0, 0.0))
        h = np.arctanh(np.clip(k * g, -tip, tip)) / k
        return cls(theta, h, g, np.asarray(g1, float), np.asarray(g2, float),
                   k, jumps)

    def to_csv(self, path) -> None:
        data = np.column_stack([self.theta, self.h, self.g, self.g1, self.g2])
        tags = f"support profile v1; k = {self.k!r}"
        if self.jumps:
            tags += "; jumps = " + " ".join(repr(s) for s in self.jumps)
        header = tags + "; uniform grid on [0, 2pi)\ntheta,h,g,g1,g2"
        np.savetxt(path, data, delimiter=",", header=header, fmt="%.17g")

    @classmethod
    def from_csv(cls, path, k: float | None = None) -> "SupportProfile":
        with open(path) as fh:
            first = fh.readline()
        if k is None:
            k = 1.0
            if "k =" in first:
                k = float(first.split("k =")[1].split(";")[0])
        jumps = ()
        if "jumps =" in first:
            jumps = tuple(
                float(t) for t in first.split("jumps =")[1].split(";")[0].split()
            )
        data = np.loadtxt(path, delimiter=",", comments="#")
        if data.ndim != 2 or data.shape[1] != 5:
            raise DomainError("expected five CSV columns: theta,h,g,g1,g2")
        return cls(data[:, 0], data[:, 1], data[:, 2], data[:, 3], data[:, 4],
                   k, jumps)


def _jump_correction(f: np.ndarray, step: float, jumps) -> float:
    """Trapezoid correction (h/2 - a) * [f] for a declared jump inside a cell.

    The jump size is read off the cell's own endpoint samples, minus the
    smooth increment estimated from the two neighbouring cells, so kinked
    but continuous integrands pick up no spurious correction.  Node values
    are taken as right-hand limits; a jump sitting on a node therefore
    belongs to the cell that ends there.  Assumes jump cells are isolated.
    """
    n = len(f)
    total = 0.0
    for s in jumps:
        i = int(s // step)
        a = s - i * step
        if a <= 1e-9 * step:
            i -= 1
            a = step
        i %= n
        raw = f[(i + 1) % n] - f[i]
        smooth = 0.5 * ((f[(i + 2) % n] - f[(i + 1) % n]) + (f[i] - f[(i - 1) % n]))
        total += (0.5 * step - a) * (raw - smooth)
    return total


def length_and_area(profile: SupportProfile) -> CurveMeasurements:
    """Length and area by periodic trapezoidal quadrature of the profile.

    L integrates R * sqrt(1-g^2-g'^2)/(1-g^2) and A integrates
    sqrt(1-g^2-g'^2)/(1-g^2) - 1, both from the same samples; measurements
    are rescaled to the profile's own curvature plane via k.  Cells holding
    a declared jump angle (corner/arc switches of piecewise boundaries) get
    the one-sided trapezoid correction, which keeps second-order accuracy
    when the curvature radius jumps.
    """
    g, g1, g2 = profile.g, profile.g1, profile.g2
    inner = 1.0 - g * g - g1 * g1
    if np.min(inner) < _ADMISSIBILITY_FLOOR:
        i = int(np.argmin(inner))
        raise AdmissibilityError(
            f"profile inadmissible at theta = {profile.theta[i]!r}"
        )
    outer = 1.0 - g * g
    q = np.sqrt(np.maximum(inner, 0.0)) / outer
    r = (g2 + g) * (outer / np.maximum(inner, 1e-300)) ** 1.5
    step = 2.0 * math.pi / profile.n
    length = step * float(np.sum(r * q))
    area = step * float(np.sum(q - 1.0))
    if profile.jumps:
        length += _jump_correction(r * q, step, profile.jumps)
        area += _jump_correction(q - 1.0, step, profile.jumps)
    length = 0.0 if abs(length) < 1e-12 else length
    area = 0.0 if abs(area) < 1e-12 else area
    if profile.k != 1.0:
        # profile data is stored at unit curvature; report on H^2(-k^2)
        length /= profile.k
        area /= profile.k * profile.k
    return CurveMeasurements(length, area)


def profile_from_control(u, g0: float, g1_0: float, n: int = 4096,
                         breakpoints=()) -> tuple[SupportProfile, np.ndarray]:
    """Integrate the support-state system g'' = u*((1-g^2-g'^2)/(1-g^2))^(3/2) - g.

    u is a function of the angle with values in [0, 1/lambda]; fixed-step
    RK4 over [0, 2pi] with n steps.  Any angles in `breakpoints` split the
    steps that contain them and the control is then evaluated at sub-step
    midpoints, so piecewise-constant controls are integrated without
    smearing their jumps.  Returns the sampled profile together with the
    closure residual x(2pi) - x(0); the curve is closed when the residual
    is below 1e-8.
    """
    step = 2.0 * math.pi / n
    breaks = sorted(float(b) % (2.0 * math.pi) for b in breakpoints)
    piecewise = bool(breaks)

    theta = 2.0 * math.pi * np.arange(n) / n
    xs = np.empty((n + 1, 2))
    g2s = np.empty(n)
    x = (float(g0), float(g1_0))

    def rhs(angle, state, level=None):
        try:
            return dynamics(state, u(angle) if level is None else level)
        except DomainError as exc:
            raise IntegrationError(
                f"state left the admissible set near theta = {angle!r}"
            ) from exc

    for i in range(n):
        xs[i] = x
        g2s[i] = rhs(theta[i], x)[1]
        a = theta[i]
        b = a + step
        cuts = [a] + [s for s in breaks if a < s < b] + [b] if piecewise else [a, b]
        for c0, c1 in zip(cuts, cuts[1:]):
            h = c1 - c0
            if h <= 0:
                continue
            level = u(0.5 * (c0 + c1)) if piecewise else None
            k1 = rhs(c0, x, level)
            k2 = rhs(c0 + 0.5 * h, (x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1]), level)
            k3 = rhs(c0 + 0.5 * h, (x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1]), level)
            k4 = rhs(c1, (x[0] + h * k3[0], x[1] + h * k3[1]), level)
            x = (
                x[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                x[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
            )
    xs[n] = x

    residual = xs[n] - xs[0]
    profile = SupportProfile.from_g(xs[:n, 0], xs[:n, 1], g2s, jumps=breaks)
    return profile, residual
