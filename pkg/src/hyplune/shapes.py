"""Constructors and measurement of convex lunes and polygons at unit curvature.

A lune is the intersection of two congruent convex cycle regions of geodesic
curvature lam; a polygon intersects n >= 2 of them.  Geometry lives on the
hyperboloid; every shape records its boundary as ordered (cycle, parameter
window) arcs plus vertices, so lengths are exact (constant-speed frames),
areas come from the turning identity A = lam*L + sum(exterior) - 2*pi,
independently cross-checked by a triangulated fan, and support profiles are
evaluated from closed-form tangency data rather than sampled geometry.

All constructions are at k = 1; measurements on other curvature planes
follow from support.rescale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bounds import Regime, classify, max_length
from .errors import (
    DomainError,
    EmptyRegionError,
    GenerationError,
    IdenticalCycleError,
    RegionError,
    UnboundedRegionError,
)
from .hyperboloid import (
    CycleFrame,
    CycleKind,
    CyclePlane,
    HPoint,
    J,
    Isometry,
    frame_of,
    intersect_cycles,
    mcross,
    mdot,
)
from .support import SupportProfile

_ON_BOUNDARY = 1e-8
_FEASIBLE = 1e-9
_VERTEX_DEDUPE = 1e-8


# ---------------------------------------------------------------------------
# supporting cycles


def supporting_cycle(lam: float, psi: float, w: float) -> CyclePlane:
    """Cycle of curvature lam whose region has support distance w at angle psi.

    The returned convex region contains the origin and its boundary crosses
    the ray at angle psi orthogonally at distance w, so its support function
    satisfies h(psi) = w.
    """
    if not lam > 0:
        raise DomainError("lam must be positive")
    if not w > 0:
        raise DomainError("support distance w must be positive")
    regime = classify(lam, 1.0)
    if regime is Regime.SUPERCRITICAL:
        rho = math.atanh(1.0 / lam)  # circle radius with coth(rho) = lam
        if w >= 2.0 * rho:
            raise DomainError("w must stay below the circle diameter 2*arcoth(lam)")
        return CyclePlane.circle(HPoint.from_polar(rho - w, psi + math.pi), rho)
    if regime is Regime.CRITICAL:
        v = np.array([-1.0, math.cos(psi), math.sin(psi)])
        return CyclePlane.from_plane(v, math.exp(w))
    delta = math.atanh(lam)  # equidistant offset with tanh(delta) = lam
    if w >= delta:
        raise DomainError("w must stay below arctanh(lam) for flat-side regions")
    b = delta - w
    v = np.array([-math.sinh(b), math.cosh(b) * math.cos(psi),
                  math.cosh(b) * math.sin(psi)])
    return CyclePlane.from_plane(v, math.sinh(delta))


def max_separation(lam: float) -> float:
    """Supremum of the lune separation parameter for curvature lam."""
    if not lam > 0:
        raise DomainError("lam must be positive")
    regime = classify(lam, 1.0)
    if regime is Regime.SUPERCRITICAL:
        return math.atanh(1.0 / lam)
    if regime is Regime.CRITICAL:
        return math.inf
    return math.atanh(lam)


def _lune_length_closed(lam: float, w: float) -> float:
    """Closed-form lune length as a function of the separation parameter."""
    regime = classify(lam, 1.0)
    if regime is Regime.SUPERCRITICAL:
        rho = math.atanh(1.0 / lam)
        return 4.0 * math.sinh(rho) * math.acos(min(1.0, lam * math.tanh(rho - w)))
    if regime is Regime.CRITICAL:
        return 4.0 * math.sqrt(math.expm1(2.0 * w))
    delta = math.atanh(lam)
    return 4.0 * math.cosh(delta) * math.acosh(
        max(1.0, math.tanh(delta) / math.tanh(delta - w))
    )


# ---------------------------------------------------------------------------
# boundary assembly shared by lunes and polygons


def _exterior_angle(vertex_vec, t_in, t_out) -> float:
    """Unsigned turning angle between boundary tangents at a vertex."""
    cos_a = float(np.clip(mdot(t_in, t_out), -1.0, 1.0))
    sin_a = abs(float(mdot(mcross(t_in, t_out), vertex_vec)))
    return math.atan2(sin_a, cos_a)


def _recession_directions_nonempty(cycles) -> bool:
    """Whether some ideal direction stays in every region's closure.

    Region {<p, v> <= c} reaches the ideal point at angle psi exactly when
    f(psi) = -v0 + v1*cos(psi) + v2*sin(psi) <= 0, a closed arc of the ideal
    circle; the intersection of regions is unbounded iff these arcs share a
    point.  Exact test on arc endpoints -- no sampling.
    """
    arcs = []
    for s in cycles:
        r = math.hypot(s.v[1], s.v[2])
        phi = math.atan2(s.v[2], s.v[1])
        lo = -s.v[0] - r
        hi = -s.v[0] + r
        if lo > 0.0:
            return False  # this region reaches no ideal point (a disk)
        if hi <= 0.0:
            continue  # every direction admissible; no constraint
        beta = math.acos(min(1.0, max(-1.0, s.v[0] / r)))
        arcs.append((phi + beta, phi + 2.0 * math.pi - beta))
    if not arcs:
        return True

    def inside(psi, arc):
        a, b = arc
        return (psi - a) % (2.0 * math.pi) <= (b - a) + 1e-12

    for a, b in arcs:
        for psi in (a, b):
            if all(inside(psi, arc) for arc in arcs):
                return True
    return False


def _interior_anchor(cycles):
    """Some point strictly inside every region, or None."""
    candidates = [np.array([1.0, 0.0, 0.0])]
    for s in cycles:
        if s.kind is CycleKind.CIRCLE:
            candidates.append((-s.v).copy())
        p0 = np.ravel(frame_of(s).point_at(0.0))
        grad = s.v + mdot(s.v, p0) * p0  # tangential slack gradient
        norm = math.sqrt(s.c * s.c + s.sigma)  # = |grad| on the cycle
        for eps in (0.1, 1.0):
            candidates.append(math.cosh(eps) * p0 - math.sinh(eps) * grad / norm)
    for q in candidates:
        if all(s.signed_slack(q) < -1e-12 for s in cycles):
            return q
    return None


def _ccw_vertex_order(vertices):
    """Vertices sorted counterclockwise around their normalized sum."""
    total = np.sum([v.vec for v in vertices], axis=0)
    norm = math.sqrt(-mdot(total, total))
    q = total / norm
    d = math.acosh(max(1.0, q[0]))
    psi = math.atan2(q[2], q[1]) if d > 1e-15 else 0.0
    iso = Isometry.translation(d, psi).inverse()
    def disk_angle(p):
        u = iso.m @ p.vec
        return math.atan2(u[2], u[1])
    return sorted(vertices, key=disk_angle), q


def _window_between(s: CyclePlane, frame: CycleFrame, va: HPoint, vb: HPoint):
    """Increasing-parameter window from va to vb, or None if not traversable."""
    ta = frame.param_of(va)
    tb = frame.param_of(vb)
    if s.kind is CycleKind.CIRCLE:
        while tb <= ta + 1e-12:
            tb += 2.0 * math.pi
        return (ta, tb)
    if tb <= ta + 1e-12:
        return None
    return (ta, tb)


def _assemble_boundary(cycles):
    """Vertices, ordered arcs, and dropped inputs of a compact intersection."""
    if len(cycles) < 2:
        raise RegionError("need at least two cycle regions")
    kappas = [s.curvature for s in cycles]
    if max(kappas) - min(kappas) > 1e-10:
        raise RegionError(
            f"cycle curvatures disagree: {min(kappas)!r} vs {max(kappas)!r}"
        )
    lam = float(np.mean(kappas))

    raw = []
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            try:
                pts = intersect_cycles(cycles[i], cycles[j])
            except IdenticalCycleError:
                raise RegionError("two input cycles coincide") from None
            for p in pts:
                slack = max(
                    cycles[m].signed_slack(p.vec)
                    for m in range(len(cycles)) if m not in (i, j)
                ) if len(cycles) > 2 else -1.0
                if slack <= _FEASIBLE:
                    raw.append(p)
    vertices = []
    for p in raw:
        if all(np.max(np.abs(p.vec - q.vec)) > _VERTEX_DEDUPE for q in vertices):
            vertices.append(p)

    if len(vertices) < 2:
        anchor = _interior_anchor(cycles)
        if anchor is None:
            raise EmptyRegionError("the regions have empty common interior")
        if _recession_directions_nonempty(cycles):
            raise UnboundedRegionError("the intersection is noncompact")
        raise RegionError(
            "one region contains the whole intersection; no polygon corners"
        )
    if _recession_directions_nonempty(cycles):
        raise UnboundedRegionError("the intersection is noncompact")

    vertices, _ = _ccw_vertex_order(vertices)
    frames = [frame_of(s) for s in cycles]
    n = len(vertices)
    arc_cycles: list[int] = []
    windows: list[tuple[float, float]] = []
    for a in range(n):
        va, vb = vertices[a], vertices[(a + 1) % n]
        best = None
        for i, s in enumerate(cycles):
            if abs(s.signed_slack(va.vec)) > _ON_BOUNDARY:
                continue
            if abs(s.signed_slack(vb.vec)) > _ON_BOUNDARY:
                continue
            win = _window_between(s, frames[i], va, vb)
            if win is None:
                continue
            mid = frames[i].point_at(0.5 * (win[0] + win[1]))
            worst = max(
                cycles[m].signed_slack(mid) for m in range(len(cycles)) if m != i
            ) if len(cycles) > 1 else -1.0
            if worst <= _FEASIBLE and (best is None or worst < best[0]):
                best = (worst, i, win)
        if best is None:
            raise RegionError(
                f"no boundary arc connects consecutive vertices {a} and {(a + 1) % n}"
            )
        arc_cycles.append(best[1])
        windows.append(best[2])

    dropped = tuple(i for i in range(len(cycles)) if i not in set(arc_cycles))
    return lam, vertices, arc_cycles, windows, frames, dropped


def _boundary_samples(cycles, windows, frames, per_arc):
    """CCW hyperboloid samples of the boundary, vertices included once."""
    chunks = []
    for (ta, tb), frame in zip(windows, frames):
        ts = np.linspace(ta, tb, per_arc, endpoint=False)
        chunks.append(frame.point_at(ts))
    return np.vstack(chunks)


def _fan_area(apex, pts) -> float:
    """Area of the geodesic polygon pts (ccw, apex inside) by triangle fan."""
    nxt = np.roll(pts, -1, axis=0)
    a = np.arccosh(np.maximum(1.0, -(pts @ J @ apex)))
    b = np.arccosh(np.maximum(1.0, -(nxt @ J @ apex)))
    c = np.arccosh(np.maximum(1.0, -np.einsum("ij,jk,ik->i", pts, J, nxt)))
    s = 0.5 * (a + b + c)
    prod = (np.tanh(0.5 * s) * np.tanh(0.5 * (s - a))
            * np.tanh(0.5 * (s - b)) * np.tanh(0.5 * (s - c)))
    return float(np.sum(4.0 * np.arctan(np.sqrt(np.maximum(prod, 0.0)))))


def _measure(lam, cycles, arc_cycles, windows, frames, vertices):
    """Length, area, and exterior angles with a triangulated cross-check."""
    n = len(windows)
    lengths = [frames[arc_cycles[i]].speed * (windows[i][1] - windows[i][0])
               for i in range(n)]
    total_len = float(sum(lengths))
    angles = []
    for i in range(n):
        prev = (i - 1) % n
        t_in = frames[arc_cycles[prev]].unit_tangent_at(windows[prev][1])
        t_out = frames[arc_cycles[i]].unit_tangent_at(windows[i][0])
        ang = _exterior_angle(vertices[i].vec, np.ravel(t_in), np.ravel(t_out))
        if not 0.0 <= ang < math.pi:
            raise RegionError(f"exterior angle {ang!r} outside [0, pi)")
        angles.append(ang)
    area = lam * total_len + sum(angles) - 2.0 * math.pi
    if area <= 1e-12:
        raise RegionError("intersection has no interior area")

    per_arc = int(min(384, max(96, 48 * max(lengths))))
    sub_frames = [frames[i] for i in arc_cycles]
    pts = _boundary_samples(cycles, windows, sub_frames, per_arc)
    total = np.sum([v.vec for v in vertices], axis=0)
    apex = total / math.sqrt(-mdot(total, total))
    numeric = _fan_area(apex, pts)
    if abs(numeric - area) > 5e-3 * max(1.0, area):
        raise RegionError(
            f"turning-identity area {area!r} disagrees with triangulated "
            f"area {numeric!r}"
        )
    return total_len, float(area), angles, lengths


# ---------------------------------------------------------------------------
# shapes


@dataclass(frozen=True, eq=False)
class Lune:
    """Two-arc intersection of congruent convex cycle regions."""

    lam: float
    k: float
    arcs: tuple[CyclePlane, CyclePlane]
    vertices: tuple[HPoint, HPoint]
    windows: tuple[tuple[float, float], tuple[float, float]]
    exterior_angle: float
    L: float
    A: float
    separation: float

    @property
    def exterior_angles(self):
        return (self.exterior_angle, self.exterior_angle)

    @property
    def arc_cycles(self):
        return (0, 1)

    def transform(self, iso: Isometry) -> "Lune":
        arcs, vertices, windows = _transform_boundary(
            iso, self.arcs, (0, 1), self.windows, self.vertices
        )
        return Lune(self.lam, self.k, arcs, vertices, windows,
                    self.exterior_angle, self.L, self.A, self.separation)


@dataclass(frozen=True, eq=False)
class LambdaPolygon:
    """Compact intersection of n >= 2 convex cycle regions of one curvature."""

    lam: float
    k: float
    arcs: tuple[CyclePlane, ...]
    vertices: tuple[HPoint, ...]
    windows: tuple[tuple[float, float], ...]
    exterior_angles: tuple[float, ...]
    L: float
    A: float
    dropped: tuple[int, ...] = ()

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def transform(self, iso: Isometry) -> "LambdaPolygon":
        arcs, vertices, windows = _transform_boundary(
            iso, self.arcs, range(len(self.arcs)), self.windows, self.vertices
        )
        return LambdaPolygon(self.lam, self.k, arcs, vertices, windows,
                             self.exterior_angles, self.L, self.A, self.dropped)


def _transform_boundary(iso, arcs, arc_cycles, windows, vertices):
    """Carry (arcs, windows, vertices) through an isometry, reparameterizing."""
    new_cycles = tuple(iso.apply_cycle(s) for s in arcs)
    new_vertices = tuple(iso.apply(p) for p in vertices)
    new_windows = []
    n = len(windows)
    for i in range(n):
        s = new_cycles[i]
        frame = frame_of(s)
        va = new_vertices[i % len(new_vertices)]
        vb = new_vertices[(i + 1) % len(new_vertices)]
        ta = frame.param_of(va)
        tb = frame.param_of(vb)
        if s.kind is CycleKind.CIRCLE:
            span = (tb - ta) % (2.0 * math.pi)
            old_span = windows[i][1] - windows[i][0]
            if abs(span - old_span) > 1e-6:
                span = old_span  # guard: congruence preserves arc length
            new_windows.append((ta, ta + span))
        else:
            new_windows.append((ta, tb))
    return new_cycles, new_vertices, tuple(new_windows)


def build_lune(lam: float, separation: float) -> Lune:
    """Symmetric lune of curvature lam with the given separation.

    separation is the distance from the lune's symmetry center to each arc
    midpoint; length and area grow strictly with it, from the degenerate
    point toward the full cycle (reached at max_separation for circles).
    """
    if not lam > 0:
        raise DomainError("lam must be positive")
    w_max = max_separation(lam)
    if not 0.0 < separation < w_max:
        raise DomainError(
            f"separation must lie in (0, {w_max!r}) for lam = {lam!r}"
        )
    cycles = [
        supporting_cycle(lam, 0.0, separation),
        supporting_cycle(lam, math.pi, separation),
    ]
    lam_eff, vertices, arc_cycles, windows, frames, dropped = _assemble_boundary(cycles)
    if dropped:
        raise RegionError("lune construction degenerated to one region")
    L, A, angles, _ = _measure(lam_eff, cycles, arc_cycles, windows, frames, vertices)
    if abs(angles[0] - angles[1]) > 1e-9:
        raise RegionError("lune vertices came out asymmetric")
    ordered_arcs = tuple(cycles[i] for i in arc_cycles)
    ordered_windows = tuple(windows)
    return Lune(lam_eff, 1.0, ordered_arcs, tuple(vertices), ordered_windows,
                float(angles[0]), L, A, separation)


def lune_for_length(lam: float, L_target: float) -> Lune:
    """Lune of curvature lam with prescribed length, by root-finding.

    L is strictly increasing in the separation, so the separation solving
    L(w) = L_target is unique; the closed-form length is bracketed and
    solved to machine tolerance before the lune is built.
    """
    if not 0.0 < L_target < max_length(lam, 1.0):
        raise DomainError(
            f"L_target must lie in (0, {max_length(lam, 1.0)!r}) for lam = {lam!r}"
        )
    w_hi = max_separation(lam)
    if math.isinf(w_hi):
        w_hi = 1.0
        while _lune_length_closed(lam, w_hi) < L_target:
            w_hi *= 2.0
    else:
        w_hi = w_hi * (1.0 - 1e-14)
        if _lune_length_closed(lam, w_hi) < L_target:
            raise DomainError("L_target is too close to the circle limit")
    w_lo = min(1e-12, 1e-6 * w_hi)
    w = brentq(lambda t: _lune_length_closed(lam, t) - L_target,
               w_lo, w_hi, xtol=1e-15, rtol=8.9e-16)
    lune = build_lune(lam, w)
    if abs(lune.L - L_target) > 1e-9:
        raise DomainError(
            f"length solve missed the target by {abs(lune.L - L_target):.3e}"
        )
    return lune


def polygon_from_regions(cycles) -> LambdaPolygon:
    """Compact intersection of convex cycle regions as an ordered polygon.

    Cycles that end up contributing no boundary arc are dropped and reported
    through the `dropped` field (indices into the input sequence).
    """
    cycles = list(cycles)
    lam, vertices, arc_cycles, windows, frames, dropped = _assemble_boundary(cycles)
    L, A, angles, _ = _measure(lam, cycles, arc_cycles, windows, frames, vertices)
    return LambdaPolygon(
        lam, 1.0,
        tuple(cycles[i] for i in arc_cycles),
        tuple(vertices),
        tuple(windows),
        tuple(angles),
        L, A,
        dropped,
    )


_MIN_ARC_LEN = 0.05
_MAX_VERTEX_HEIGHT = 500.0  # cosh of vertex distance; intersection accuracy envelope


def random_polygon(lam: float, n_arcs: int, seed: int) -> LambdaPolygon:
    """Seeded random polygon with exactly n_arcs contributing arcs.

    Draws jittered support directions and support distances scattered about
    a common tangent circle (so all cycles tend to bind), rejecting draws
    whose intersection is empty, noncompact, drops a cycle, carries an arc
    shorter than 0.05, or puts a vertex outside the height envelope where
    cycle intersections stay accurate; deterministic for a fixed seed.
    """
    if n_arcs < 2:
        raise DomainError("a polygon needs at least two arcs")
    rng = np.random.default_rng(seed)
    regime = classify(lam, 1.0)
    if regime is Regime.SUPERCRITICAL:
        reach = math.atanh(1.0 / lam)
    elif regime is Regime.CRITICAL:
        reach = 1.4
    else:
        reach = math.atanh(lam)

    for _ in range(400):
        jitter = rng.uniform(-0.45, 0.45, size=n_arcs)
        psis = 2.0 * math.pi * (np.arange(n_arcs) + jitter) / n_arcs
        base = rng.uniform(0.45, 0.8) * reach
        spread = 0.5 * reach * min(0.35, 1.2 / n_arcs)
        ws = np.clip(base + rng.uniform(-spread, spread, size=n_arcs),
                     0.15 * reach, 0.92 * reach)
        try:
            cycles = [supporting_cycle(lam, float(p), float(w))
                      for p, w in zip(psis, ws)]
            poly = polygon_from_regions(cycles)
        except (RegionError, DomainError):
            continue
        if poly.dropped:
            continue
        arc_lengths = [
            frame_of(poly.arcs[i]).speed * (poly.windows[i][1] - poly.windows[i][0])
            for i in range(poly.n_arcs)
        ]
        if min(arc_lengths) < _MIN_ARC_LEN:
            continue
        if poly.n_arcs != n_arcs:
            continue
        if max(v.vec[0] for v in poly.vertices) > _MAX_VERTEX_HEIGHT:
            continue
        return poly
    raise GenerationError(
        f"no admissible {n_arcs}-arc polygon found for lam = {lam!r} "
        f"after 400 attempts (seed {seed})"
    )


# ---------------------------------------------------------------------------
# support profiles of shapes


def _support_normal_angle(vertex_vec, tangent):
    """Angle theta of the supporting geodesic at a boundary point.

    The geodesic through the point with the given unit tangent has unit
    normal w = J(V x T); orienting it away from the origin turns it into
    (sinh h, cosh h cos theta, cosh h sin theta).
    """
    w = mcross(vertex_vec, tangent)
    if w[0] < 0.0:
        w = -w
    return math.atan2(w[2], w[1]) % (2.0 * math.pi)


def _support_windows(shape):
    """CCW list of (theta_start, payload) support windows of a shape.

    Payloads are ("vertex", V) while the contact point dwells at a corner
    and ("arc", cycle, ta, tb) while it slides along an arc.
    """
    arcs = shape.arcs
    windows = shape.windows
    vertices = shape.vertices
    n = len(arcs)
    frames = [frame_of(s) for s in arcs]
    for s in arcs:
        if s.signed_slack(np.array([1.0, 0.0, 0.0])) >= -1e-12:
            raise DomainError("support profile needs the origin strictly inside")
    out = []
    for i in range(n):
        prev = (i - 1) % n
        v = vertices[i % len(vertices)]
        t_in = np.ravel(frames[prev].unit_tangent_at(windows[prev][1]))
        t_out = np.ravel(frames[i].unit_tangent_at(windows[i][0]))
        theta_in = _support_normal_angle(v.vec, t_in)
        theta_out = _support_normal_angle(v.vec, t_out)
        out.append((theta_in, ("vertex", v.vec)))
        out.append((theta_out, ("arc", arcs[i], windows[i][0], windows[i][1])))
    out.sort(key=lambda item: item[0])
    return out


def _arc_support(s: CyclePlane, ta: float, tb: float, theta):
    """Support data (g, g1) of an arc window at angles theta (vectorized).

    Tangency of the supporting geodesic with the cycle {<p, v> = c} reduces
    to a quadratic in tau = tanh(h); the root whose contact point lies in
    the window is the support value.
    """
    v0, v1, v2 = (float(s.v[0]), float(s.v[1]), float(s.v[2]))
    c = s.c
    K = c * c + s.sigma
    ct, st = np.cos(theta), np.sin(theta)
    a_v = v1 * ct + v2 * st
    A = v0 * v0 + K
    disc = K * (A - a_v * a_v)
    root = np.sqrt(np.maximum(disc, 0.0))
    frame = frame_of(s)

    g = np.empty_like(a_v)
    g1 = np.empty_like(a_v)
    chosen = np.full(a_v.shape, False)
    for sign in (1.0, -1.0):
        tau = (a_v * v0 + sign * root) / A
        e = 1.0 - tau * tau
        valid = (np.abs(tau) < 1.0) & (e > 0.0)
        st_ = a_v - tau * v0
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = st_ / (e * c)
            p0 = -v0 / c + scale * tau
            p1 = -v1 / c + scale * ct
            p2 = -v2 / c + scale * st
        valid &= p0 > 0.0
        # contact parameter inside the arc window
        pts = np.stack([p0, p1, p2], axis=-1)
        if s.kind is CycleKind.CIRCLE:
            t = np.arctan2(pts @ (J @ frame.a2), pts @ (J @ frame.a1))
            dt = (t - ta) % (2.0 * math.pi)
            inside = (dt <= (tb - ta) + 1e-7) | (dt >= 2.0 * math.pi - 1e-7)
        elif s.kind is CycleKind.HOROCYCLE:
            t = pts @ (J @ frame.a2)
            inside = (t >= ta - 1e-7) & (t <= tb + 1e-7)
        else:
            t = np.arcsinh((pts @ (J @ frame.a2)) / (frame.speed * frame.speed))
            inside = (t >= ta - 1e-7) & (t <= tb + 1e-7)
        valid &= inside
        take = valid & (~chosen | (tau > g))
        g = np.where(take, tau, g)
        g1 = np.where(take, (p2 * ct - p1 * st) / np.where(p0 > 0, p0, 1.0), g1)
        chosen |= valid
    if not np.all(chosen):
        bad = float(np.asarray(theta)[~chosen].flat[0])
        raise DomainError(f"no arc tangency found at theta = {bad!r}")
    return g, g1


def _profile_of(shape, n: int):
    """Sampled support profile and switch angles of a lune or polygon."""
    win = _support_windows(shape)
    starts = np.array([wdw[0] for wdw in win])
    theta = 2.0 * math.pi * np.arange(n) / n
    idx = np.searchsorted(starts, theta, side="right") - 1
    idx = np.where(idx < 0, len(win) - 1, idx)

    g = np.empty(n)
    g1 = np.empty(n)
    g2 = np.empty(n)
    inv_lam = 1.0 / shape.lam
    for w_i, (_, payload) in enumerate(win):
        mask = idx == w_i
        if not np.any(mask):
            continue
        th = theta[mask]
        if payload[0] == "vertex":
            vv = payload[1]
            ct, st = np.cos(th), np.sin(th)
            g_w = (vv[1] * ct + vv[2] * st) / vv[0]
            g1_w = (vv[2] * ct - vv[1] * st) / vv[0]
            g2_w = -g_w
        else:
            _, s, ta, tb = payload
            g_w, g1_w = _arc_support(s, ta, tb, th)
            q = (1.0 - g_w ** 2 - g1_w ** 2) / (1.0 - g_w ** 2)
            g2_w = inv_lam * q ** 1.5 - g_w
        g[mask] = g_w
        g1[mask] = g1_w
        g2[mask] = g2_w
    switches = sorted(float(s) for s, _ in win)
    profile = SupportProfile.from_g(g, g1, g2, jumps=switches)
    return profile, switches


def lune_support_profile(lune: Lune, n: int = 4096):
    """Support profile of a lune about its symmetry center.

    Returns (profile, switch_angles); the four switch angles separate the
    two arc windows (curvature radius 1/lam) from the two corner windows
    (radius 0), and each corner window's width equals the exterior angle.
    """
    return _profile_of(lune, n)


def polygon_support_profile(poly: LambdaPolygon, n: int = 4096):
    """Support profile of a polygon with the origin strictly inside."""
    return _profile_of(poly, n)


# ---------------------------------------------------------------------------
# export and comparison helpers


def boundary_polyline(shape, per_arc: int = 128) -> np.ndarray:
    """Closed ccw Poincare-disk polyline of a shape's boundary."""
    frames = [frame_of(s) for s in shape.arcs]
    pts = _boundary_samples(shape.arcs, shape.windows, frames, per_arc)
    pts = np.vstack([pts, pts[:1]])
    return np.column_stack([pts[:, 1] / (1.0 + pts[:, 0]),
                            pts[:, 2] / (1.0 + pts[:, 0])])


def shape_to_json(shape) -> dict:
    """JSON-ready description: cycles, vertices, measurements."""
    return {
        "lambda": shape.lam,
        "k": shape.k,
        "cycles": [
            {"kind": s.kind.value, "v": [float(x) for x in s.v], "c": float(s.c)}
            for s in shape.arcs
        ],
        "vertices": [[float(x) for x in p.vec] for p in shape.vertices],
        "measurements": {
            "length": shape.L,
            "area": shape.A,
            "exterior_angles": [float(a) for a in shape.exterior_angles],
        },
    }


def lune_similarity_gap(poly: LambdaPolygon, samples: int = 160,
                        rotations: int = 96) -> float:
    """Discrete Hausdorff distance from a polygon to the matched-length lune.

    Both boundaries are centered (normalized vertex sum to the origin) and
    compared over a rotation grid, vertex-alignment candidates, and the
    reflection; returns the best (smallest) Hausdorff distance found.
    """
    lune = lune_for_length(poly.lam, poly.L)
    frames_l = [frame_of(s) for s in lune.arcs]
    per_l = max(8, samples // len(lune.arcs))
    lune_pts = _boundary_samples(lune.arcs, lune.windows, frames_l, per_l)

    total = np.sum([v.vec for v in poly.vertices], axis=0)
    q = total / math.sqrt(-mdot(total, total))
    d = math.acosh(max(1.0, q[0]))
    psi = math.atan2(q[2], q[1]) if d > 1e-15 else 0.0
    center = Isometry.translation(d, psi).inverse()
    moved = poly.transform(center)
    frames_p = [frame_of(s) for s in moved.arcs]
    per_p = max(8, samples // len(moved.arcs))
    poly_pts = _boundary_samples(moved.arcs, moved.windows, frames_p, per_p)

    lune_dirs = [math.atan2(v.vec[2], v.vec[1]) for v in lune.vertices]
    poly_dirs = [math.atan2(p[2], p[1]) for p in poly_pts[::per_p]]
    cand = set(
        round((ld - pd) % (2.0 * math.pi), 12) for ld in lune_dirs for pd in poly_dirs
    )
    cand.update(2.0 * math.pi * i / rotations for i in range(rotations))

    best = math.inf
    for reflect in (False, True):
        base = poly_pts.copy()
        if reflect:
            base = base * np.array([1.0, 1.0, -1.0])
        for ang in cand:
            ca, sa = math.cos(ang), math.sin(ang)
            rot = np.array([[1.0, 0.0, 0.0], [0.0, ca, -sa], [0.0, sa, ca]])
            pts = base @ rot.T
            inner = -(pts @ J @ lune_pts.T)
            dist = np.arccosh(np.maximum(1.0, inner))
            h = max(float(np.max(np.min(dist, axis=1))),
                    float(np.max(np.min(dist, axis=0))))
            best = min(best, h)
    return best
