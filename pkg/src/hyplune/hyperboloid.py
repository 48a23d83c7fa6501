"""Hyperboloid-model primitives for the hyperbolic plane of curvature -1.

Points live on the upper sheet {<p,p> = -1, x0 > 0} of the unit hyperboloid
in Minkowski 3-space with the bilinear form

    <u, v> = -u0*v0 + u1*v1 + u2*v2.

Constant-geodesic-curvature curves (circles, horocycles, equidistants,
geodesics) are plane slices {p : <p, v> = c} and are stored together with
the orientation convention that the convex side is the sub-level set
{p : <p, v> <= c}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateCycleError,
    DomainError,
    IdenticalCycleError,
    InvalidPointError,
)

J = np.diag([-1.0, 1.0, 1.0])

# Snap tolerance deciding when a plane normal counts as lightlike, applied
# after scaling the normal to Euclidean unit length.
LIGHTLIKE_TOL = 1e-9


def mdot(u, v):
    """Minkowski inner product; broadcasts over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return -u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2]


def mcross(u, v):
    """Minkowski cross product: <mcross(u,v), u> = <mcross(u,v), v> = 0."""
    w = np.cross(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    w[..., 0] = -w[..., 0]
    return w


def _unit_spacelike(w):
    n2 = mdot(w, w)
    if n2 <= 0:
        raise DomainError("expected a spacelike vector")
    return w / math.sqrt(n2)


def _unit_timelike_future(w):
    n2 = mdot(w, w)
    if n2 >= 0 or w[0] <= 0:
        raise DomainError("expected a future-pointing timelike vector")
    return w / math.sqrt(-n2)


@dataclass(frozen=True)
class HPoint:
    """A point on the upper hyperboloid sheet."""

    x0: float
    x1: float
    x2: float

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2])

    @classmethod
    def origin(cls) -> "HPoint":
        return cls(1.0, 0.0, 0.0)

    @classmethod
    def from_vec(cls, v, normalize: bool = True) -> "HPoint":
        """Build a point from Minkowski coordinates.

        With normalize=True the vector is rescaled onto the sheet; a vector
        that is not timelike-future fails either way.
        """
        v = np.asarray(v, dtype=float)
        n2 = float(mdot(v, v))
        if n2 >= 0 or v[0] <= 0:
            raise InvalidPointError(f"not on the upper sheet: {v!r}")
        if normalize:
            v = v / math.sqrt(-n2)
        elif abs(n2 + 1.0) > 1e-9:
            raise InvalidPointError(f"<p,p> = {n2!r}, expected -1")
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def from_polar(cls, r: float, psi: float) -> "HPoint":
        """Point at hyperbolic distance r from the origin along direction psi."""
        return cls(math.cosh(r), math.sinh(r) * math.cos(psi), math.sinh(r) * math.sin(psi))

    @classmethod
    def from_disk(cls, u: float, v: float) -> "HPoint":
        s = u * u + v * v
        if s >= 1.0:
            raise InvalidPointError("Poincare-disk coordinates must satisfy u^2+v^2 < 1")
        return cls((1.0 + s) / (1.0 - s), 2.0 * u / (1.0 - s), 2.0 * v / (1.0 - s))

    def to_disk(self) -> tuple[float, float]:
        return (self.x1 / (1.0 + self.x0), self.x2 / (1.0 + self.x0))


def to_disk(vecs):
    """Poincare-disk coordinates for an array of hyperboloid vectors."""
    vecs = np.asarray(vecs, dtype=float)
    return vecs[..., 1:] / (1.0 + vecs[..., :1])


def distance(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance arccosh(-<p,q>)."""
    c = -float(mdot(p.vec, q.vec))
    if c < 1.0 - 1e-8:
        raise InvalidPointError(f"inner product {-c!r} is above -1; off-sheet input")
    return math.acosh(max(c, 1.0))


class CycleKind(str, Enum):
    CIRCLE = "circle"
    HOROCYCLE = "horocycle"
    EQUIDISTANT = "equidistant"
    GEODESIC = "geodesic"


@dataclass(frozen=True, eq=False)
class CyclePlane:
    """A constant-curvature curve {p : <p,v> = c} with convex side <p,v> <= c.

    Stored in canonical scale: circles have <v,v> = -1 with v past-pointing
    and c = cosh(radius) > 1; horocycles have lightlike past-pointing v scaled
    so that c = 1; equidistants and geodesics have <v,v> = +1 with c = sinh(d)
    >= 0, d the distance of the curve from its base geodesic {<p,v> = 0}.
    """

    v: np.ndarray
    c: float
    kind: CycleKind

    @classmethod
    def from_plane(cls, v, c: float) -> "CyclePlane":
        """Classify and canonicalize a plane slice.

        The curve set {p : <p,v> = c} is preserved; (v, c) may be jointly
        negated so that {<p,v> <= c} is the convex side.
        """
        v = np.asarray(v, dtype=float).copy()
        scale = float(np.linalg.norm(v))
        if scale == 0.0:
            raise DegenerateCycleError("zero normal vector")
        v /= scale
        c = float(c) / scale
        sigma = float(mdot(v, v))

        if abs(sigma) < LIGHTLIKE_TOL:
            if v[0] > 0:
                v, c = -v, -c
            if c <= 0.0:
                raise DegenerateCycleError(
                    "lightlike normal with non-positive offset bounds no horodisk"
                )
            v /= c
            # exact lightlike snap
            v[0] = -math.hypot(v[1], v[2])
            return cls(_readonly(v), 1.0, CycleKind.HOROCYCLE)

        v /= math.sqrt(abs(sigma))
        c /= math.sqrt(abs(sigma))
        if sigma < 0:
            if v[0] > 0:
                v, c = -v, -c
            if c <= 1.0:
                raise DegenerateCycleError(
                    f"timelike slice with offset {c!r} <= 1 is empty or a single point"
                )
            return cls(_readonly(v), c, CycleKind.CIRCLE)

        if c < 0.0:
            v, c = -v, -c
        if c < 1e-12:
            return cls(_readonly(v), 0.0, CycleKind.GEODESIC)
        return cls(_readonly(v), c, CycleKind.EQUIDISTANT)

    @classmethod
    def circle(cls, center: HPoint, radius: float) -> "CyclePlane":
        if radius <= 0:
            raise DomainError("circle radius must be positive")
        return cls.from_plane(-center.vec, math.cosh(radius))

    @classmethod
    def geodesic(cls, normal) -> "CyclePlane":
        return cls.from_plane(normal, 0.0)

    @property
    def sigma(self) -> float:
        return -1.0 if self.kind is CycleKind.CIRCLE else (
            0.0 if self.kind is CycleKind.HOROCYCLE else 1.0
        )

    @property
    def curvature(self) -> float:
        return cycle_curvature(self)

    @property
    def center(self) -> HPoint:
        if self.kind is not CycleKind.CIRCLE:
            raise DomainError("only circles have a center")
        return HPoint.from_vec(-self.v)

    @property
    def radius(self) -> float:
        if self.kind is not CycleKind.CIRCLE:
            raise DomainError("only circles have a radius")
        return math.acosh(self.c)

    def signed_slack(self, p) -> float:
        """<p,v> - c; negative strictly inside the convex side."""
        vec = p.vec if isinstance(p, HPoint) else p
        return float(mdot(vec, self.v)) - self.c

    def contains(self, p, tol: float = 1e-9) -> bool:
        return self.signed_slack(p) <= tol


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


def cycle_curvature(s: CyclePlane) -> float:
    """Geodesic curvature of the cycle: coth(r), 1, tanh(d) or 0 by kind."""
    if s.kind is CycleKind.HOROCYCLE:
        return 1.0
    if s.kind is CycleKind.GEODESIC:
        return 0.0
    sigma = s.sigma
    if s.kind is CycleKind.CIRCLE and s.c * s.c <= 1.0:
        raise DegenerateCycleError("circle requires |c| > 1")
    return abs(s.c) / math.sqrt(s.c * s.c + sigma)


def intersect_cycles(a: CyclePlane, b: CyclePlane) -> list[HPoint]:
    """Upper-sheet intersection points of two cycles (0, 1 or 2 of them).

    Solves the two plane equations for a line and intersects it with the
    hyperboloid; near-tangency collapses to a single reported point.
    """
    na, nb = J @ a.v, J @ b.v  # Euclidean normals of the two planes
    d = np.cross(na, nb)
    if np.linalg.norm(d) < 1e-12:
        same = (np.allclose(a.v, b.v, atol=1e-10) and abs(a.c - b.c) < 1e-10) or (
            np.allclose(a.v, -b.v, atol=1e-10) and abs(a.c + b.c) < 1e-10
        )
        if same:
            raise IdenticalCycleError("the two cycles lie on the same plane")
        return []  # parallel distinct planes
    q0, *_ = np.linalg.lstsq(np.stack([na, nb]), np.array([a.c, b.c]), rcond=None)

    # p(t) = q0 + t d stays on both planes; impose <p,p> = -1.
    A = float(mdot(d, d))
    B = 2.0 * float(mdot(q0, d))
    C = float(mdot(q0, q0)) + 1.0
    roots: list[float] = []
    if abs(A) < 1e-14:
        if abs(B) > 1e-14:
            roots = [-C / B]
    else:
        disc = B * B - 4.0 * A * C
        tol = 1e-10 * max(1.0, B * B, abs(4.0 * A * C))
        if disc >= tol:
            sq = math.sqrt(disc)
            roots = [(-B - sq) / (2 * A), (-B + sq) / (2 * A)]
        elif disc > -tol:
            roots = [-B / (2 * A)]
    out = []
    for t in roots:
        p = q0 + t * d
        if p[0] > 0:
            out.append(HPoint.from_vec(p))
    return out


# ---------------------------------------------------------------------------
# parameterizations


@dataclass(frozen=True, eq=False)
class CycleFrame:
    """Arclength-rate parameterization p(t) of a cycle.

    Orientation is counterclockwise: the convex side stays on the left.
    The metric speed |p'(t)| is constant (sinh r, 1, cosh d, or 1 by kind),
    so arc length between parameters is speed * |t1 - t0|.
    """

    kind: CycleKind
    speed: float
    a0: np.ndarray
    a1: np.ndarray
    a2: np.ndarray

    def point_at(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        if self.kind is CycleKind.CIRCLE:
            return self.a0 + np.cos(t) * self.a1 + np.sin(t) * self.a2
        if self.kind is CycleKind.HOROCYCLE:
            return self.a0 + t * self.a2 + 0.5 * t * t * self.a1
        return self.a0 + np.cosh(t) * self.a1 + np.sinh(t) * self.a2

    def velocity_at(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        if self.kind is CycleKind.CIRCLE:
            return -np.sin(t) * self.a1 + np.cos(t) * self.a2
        if self.kind is CycleKind.HOROCYCLE:
            return self.a2 + t * self.a1
        return np.sinh(t) * self.a1 + np.cosh(t) * self.a2

    def unit_tangent_at(self, t):
        return self.velocity_at(t) / self.speed

    def param_of(self, p) -> float:
        """Parameter of a point assumed to lie on the cycle."""
        vec = p.vec if isinstance(p, HPoint) else np.asarray(p, dtype=float)
        if self.kind is CycleKind.CIRCLE:
            return math.atan2(float(mdot(vec, self.a2)), float(mdot(vec, self.a1)))
        if self.kind is CycleKind.HOROCYCLE:
            return float(mdot(vec, self.a2))
        return math.asinh(float(mdot(vec, self.a2)) / (self.speed * self.speed))


def frame_of(s: CyclePlane) -> CycleFrame:
    """Counterclockwise constant-speed frame for a canonical cycle."""
    ex = np.array([0.0, 1.0, 0.0])
    if s.kind is CycleKind.CIRCLE:
        m = -s.v  # future-pointing center
        w = ex + mdot(ex, m) * m
        e1 = _unit_spacelike(w)
        e2 = mcross(m, e1)
        sh = math.sqrt(s.c * s.c - 1.0)
        return CycleFrame(s.kind, sh, _readonly(s.c * m), _readonly(sh * e1), _readonly(sh * e2))
    if s.kind is CycleKind.HOROCYCLE:
        rho = math.hypot(s.v[1], s.v[2])
        psi = math.atan2(s.v[2], s.v[1])
        aa = -math.log(rho)
        ca, sa = math.cosh(aa), math.sinh(aa)
        boost = np.array([[ca, sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
        cp, sp = math.cos(psi), math.sin(psi)
        rot = np.array([[1.0, 0.0, 0.0], [0.0, cp, -sp], [0.0, sp, cp]])
        m = rot @ boost
        # p(t) = a0 + t*a2 + (t^2/2)*a1 parameterizes {<p, v> = 1} at unit speed
        return CycleFrame(s.kind, 1.0, _readonly(m[:, 0].copy()),
                          _readonly(m[:, 0] - m[:, 1]), _readonly(m[:, 2].copy()))
    # equidistant / geodesic
    v = s.v
    w = np.array([1.0 + v[0] * v[0], v[0] * v[1], v[0] * v[2]])
    e0 = _unit_timelike_future(w)
    e1 = mcross(e0, v)
    sc = math.sqrt(1.0 + s.c * s.c)
    return CycleFrame(s.kind, sc, _readonly(s.c * v), _readonly(sc * e0), _readonly(sc * e1))


# ---------------------------------------------------------------------------
# isometries


@dataclass(frozen=True, eq=False)
class Isometry:
    """Orthochronous Lorentz transform acting on the upper sheet."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if np.max(np.abs(m.T @ J @ m - J)) > 1e-10:
            raise DomainError("matrix does not preserve the Minkowski form")
        if m[0, 0] <= 0:
            raise DomainError("matrix swaps the hyperboloid sheets")
        object.__setattr__(self, "m", _readonly(m))

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(np.eye(3))

    @classmethod
    def rotation(cls, angle: float) -> "Isometry":
        c, s = math.cos(angle), math.sin(angle)
        return cls(np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]))

    @classmethod
    def translation(cls, d: float, psi: float = 0.0) -> "Isometry":
        """Translation by d along the geodesic through the origin at angle psi."""
        ch, sh = math.cosh(d), math.sinh(d)
        boost = np.array([[ch, sh, 0.0], [sh, ch, 0.0], [0.0, 0.0, 1.0]])
        r = cls.rotation(psi).m
        return cls(r @ boost @ r.T)

    @classmethod
    def reflection(cls) -> "Isometry":
        """Reflection across the geodesic x2 = 0."""
        return cls(np.diag([1.0, 1.0, -1.0]))

    @classmethod
    def random(cls, rng: np.random.Generator, max_shift: float = 2.0) -> "Isometry":
        a, b = rng.uniform(0.0, 2.0 * math.pi, size=2)
        d = rng.uniform(0.0, max_shift)
        return cls.rotation(a).compose(cls.translation(d)).compose(cls.rotation(b))

    def apply(self, p: HPoint) -> HPoint:
        return HPoint.from_vec(self.m @ p.vec)

    def apply_cycle(self, s: CyclePlane) -> CyclePlane:
        return CyclePlane.from_plane(self.m @ s.v, s.c)

    def compose(self, other: "Isometry") -> "Isometry":
        return Isometry(self.m @ other.m)

    def inverse(self) -> "Isometry":
        return Isometry(J @ self.m.T @ J)


# ---------------------------------------------------------------------------
# discrete differential geometry helpers (used as independent oracles)


def _tangent_toward(b, a):
    """Unit tangent at b of the geodesic from b to a."""
    w = a + mdot(a, b) * b
    return _unit_spacelike(w)


def turning_angle(a, b, c) -> float:
    """Unsigned exterior angle of the polyline a -> b -> c at b.

    Uses atan2 of the angle's sine and cosine; for unit tangents at b the
    cross product satisfies <T1 x T2, b> = -/+ sin(angle), so small angles
    do not suffer the acos cancellation.
    """
    t_in = -_tangent_toward(b, a)
    t_out = _tangent_toward(b, c)
    cos_a = float(np.clip(mdot(t_in, t_out), -1.0, 1.0))
    sin_a = abs(float(mdot(mcross(t_in, t_out), b)))
    return math.atan2(sin_a, cos_a)

def discrete_curvature(points) -> np.ndarray:
    """Turning-angle curvature estimate at interior vertices of a polyline.

    points: (n, 3) array of hyperboloid vectors sampled along a curve.
    Returns (n-2,) curvature estimates kappa_i = phi_i / mean(arc steps).
    """
    pts = np.asarray(points, dtype=float)
    out = np.empty(len(pts) - 2)
    for i in range(1, len(pts) - 1):
        a, b, c = pts[i - 1], pts[i], pts[i + 1]
        s1 = math.acosh(max(1.0, -float(mdot(a, b))))
        s2 = math.acosh(max(1.0, -float(mdot(b, c))))
        out[i - 1] = turning_angle(a, b, c) / (0.5 * (s1 + s2))
    return out


def triangle_area(p, q, r) -> float:
    """Hyperbolic triangle area by the half-side formula.

    tan(S/4)^2 = tanh(s/2) tanh((s-a)/2) tanh((s-b)/2) tanh((s-c)/2) with
    s the semiperimeter; stable for the thin triangles of a fan subdivision.
    """
    a = math.acosh(max(1.0, -float(mdot(q, r))))
    b = math.acosh(max(1.0, -float(mdot(p, r))))
    c = math.acosh(max(1.0, -float(mdot(p, q))))
    s = 0.5 * (a + b + c)
    prod = (
        math.tanh(0.5 * s)
        * math.tanh(0.5 * max(s - a, 0.0))
        * math.tanh(0.5 * max(s - b, 0.0))
        * math.tanh(0.5 * max(s - c, 0.0))
    )
    return 4.0 * math.atan(math.sqrt(max(prod, 0.0)))


def triangle_area_deficit(p, q, r) -> float:
    """Hyperbolic triangle area as angle deficit pi - alpha - beta - gamma."""

    def corner(x, y, z):
        return math.acos(
            float(np.clip(mdot(_tangent_toward(x, y), _tangent_toward(x, z)), -1.0, 1.0))
        )

    return math.pi - corner(p, q, r) - corner(q, r, p) - corner(r, p, q)
