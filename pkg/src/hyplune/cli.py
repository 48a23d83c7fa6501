"""Command-line front end for the reverse isoperimetric toolkit.

Five subcommands cover the library surface:

  bound       tabulate the sharp lower area bound over a length grid
  sharpness   build extremal lunes and confirm they attain the bound
  dominance   Monte-Carlo check that random curved polygons dominate the bound
  pmp         maximum-principle certificate for a circle, lune, or profile
  limits      cross-regime continuity and the flat-plane (k -> 0) limit

Every command is deterministic given its flags and seed, writes fixed file
names under --out, and uses exit code 0 for success, 1 for a mathematical
violation, and 2 for usage or domain errors.  CSV outputs carry a version
header comment; JSON is sorted and indented.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bounds import (
    classify,
    euclidean_limit,
    max_length,
    regime_limits_check,
    reverse_bound,
)
from .control import pmp_certificate
from .errors import DomainError, GenerationError, HypluneError
from .shapes import (
    boundary_polyline,
    lune_for_length,
    lune_support_profile,
    random_polygon,
)
from .support import SupportProfile
from .svg import disk_svg

_DEFAULT_LAMBDAS = (0.7, 1.0, math.sqrt(2.0))


# ---------------------------------------------------------------------------
# configuration and shared plumbing


@dataclass
class RunConfig:
    """Validated run parameters for one CLI invocation."""

    command: str
    lambdas: tuple = ()
    k: float = 1.0
    L_values: tuple = ()
    L_steps: int = 10
    seed: int = 0
    arcs: int = 8
    count: int = 1000
    tol: float = 1e-7
    out: Path = field(default_factory=lambda: Path("."))
    formats: tuple = ("csv", "json", "svg")
    shape: str = "lune"
    profile_path: Path | None = None
    perturb: float = 0.0
    samples: int = 4096

    def __post_init__(self):
        if self.k <= 0:
            raise DomainError("k must be positive")
        for lam in self.lambdas:
            if lam <= 0:
                raise DomainError("lambda must be positive")
        for L in self.L_values:
            if L < 0:
                raise DomainError("lengths must be nonnegative")
        if self.L_steps < 1:
            raise DomainError("--L-steps must be at least 1")
        if self.count < 1:
            raise DomainError("--count must be at least 1")
        if self.arcs < 2:
            raise DomainError("--arcs must be at least 2")
        if self.samples < 64:
            raise DomainError("--samples must be at least 64")


def _length_grid(args) -> tuple:
    """L values from --L or --L-min/--L-max/--L-steps; () when unset."""
    if getattr(args, "L", None):
        return tuple(float(v) for v in args.L)
    lo = getattr(args, "L_min", None)
    hi = getattr(args, "L_max", None)
    if lo is None and hi is None:
        return ()
    if lo is None or hi is None:
        raise DomainError("--L-min and --L-max must be given together")
    if not lo < hi:
        raise DomainError("--L-min must be below --L-max")
    return tuple(np.linspace(float(lo), float(hi), int(args.L_steps)))


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _csv(lines, header: str, schema: str) -> str:
    return "\n".join([f"# {header}", schema, *lines]) + "\n"


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _wants(cfg: RunConfig, fmt: str) -> bool:
    return fmt in cfg.formats


def _cell(x) -> str:
    """CSV cell: repr for numbers, empty for missing."""
    return "" if x is None else repr(x)


# ---------------------------------------------------------------------------
# bound


def cmd_bound(cfg: RunConfig) -> int:
    """Tabulate reverse_bound on a length grid; exact module values, no rounding."""
    lam = cfg.lambdas[0]
    rows = []
    for L in cfg.L_values:
        res = reverse_bound(lam, cfg.k, L)
        rows.append(
            {
                "lambda": lam,
                "k": cfg.k,
                "L": float(L),
                "regime": res.regime.value,
                "bound": res.bound,
                "L_max": res.L_max,
            }
        )
    lines = [
        f"{r['lambda']!r},{r['k']!r},{r['L']!r},{r['regime']},{r['bound']!r},{r['L_max']!r}"
        for r in rows
    ]
    if _wants(cfg, "csv"):
        _write_text(
            cfg.out / "bound_table.csv",
            _csv(lines, "hyplune bound table v1", "lambda,k,L,regime,bound,L_max"),
        )
    if _wants(cfg, "json"):
        _write_text(cfg.out / "bound_table.json",
                    _json_text({"k": cfg.k, "rows": rows}))
    for r in rows:
        print(
            f"lambda={r['lambda']:g} k={r['k']:g} L={r['L']:g} "
            f"[{r['regime']}] bound={r['bound']:.12g}"
        )
    return 0


# ---------------------------------------------------------------------------
# sharpness


def _reliable_length_cap(lam: float) -> float:
    """Longest lune length the constructor resolves reliably.

    Near the circle limit the two boundary arcs become numerically
    coincident, and very deep subcritical lunes push their vertices so far
    out that coordinates overwhelm the intersection solve; evaluation is
    clamped slightly inside the separation range and the clamp is reported
    per row.
    """
    from .shapes import _lune_length_closed, max_separation

    w_max = max_separation(lam)
    if math.isinf(w_max):
        return math.inf
    margin = 1e-5
    if lam < 1.0:
        # keep vertex height sinh(delta)/sinh(b) below ~500
        margin = max(margin, math.asinh(math.sinh(w_max) / 500.0))
    return _lune_length_closed(lam, w_max - margin)


def _default_sharpness_grid(lam: float, steps: int) -> np.ndarray:
    cap = min(_reliable_length_cap(lam), max_length(lam, 1.0))
    if math.isinf(cap):
        return np.linspace(0.5, 8.0, steps)
    return np.linspace(0.08, 0.97, steps) * cap


def cmd_sharpness(cfg: RunConfig) -> int:
    """Construct lune_for_length on a (lambda, L) grid and test |A - bound|."""
    rows = []
    failures = 0
    for lam in cfg.lambdas:
        grid = np.asarray(cfg.L_values) if cfg.L_values else _default_sharpness_grid(
            lam, cfg.L_steps
        )
        cap = _reliable_length_cap(lam)
        for L_req in grid:
            L_eval = float(min(L_req, cap))
            clamped = L_eval < L_req
            row = {
                "lambda": lam,
                "k": 1.0,
                "regime": classify(lam, 1.0).value,
                "L_requested": float(L_req),
                "L_evaluated": L_eval,
                "clamped": int(clamped),
            }
            try:
                lune = lune_for_length(lam, L_eval)
                area = lune.A * (1.0 + cfg.perturb)
                bound = reverse_bound(lam, 1.0, L_eval).bound
                gap = abs(area - bound)
                ok = gap < cfg.tol
                row.update(
                    bound=bound, area=area, abs_gap=gap,
                    status="pass" if ok else "fail",
                )
                failures += 0 if ok else 1
            except HypluneError as exc:
                row.update(bound=None, area=None, abs_gap=None,
                           status=f"error: {exc}")
                failures += 1
            rows.append(row)
    lines = [
        f"{r['lambda']!r},{r['k']!r},{r['regime']},{r['L_requested']!r},"
        f"{r['L_evaluated']!r},{r['clamped']},{_cell(r['bound'])},"
        f"{_cell(r['area'])},{_cell(r['abs_gap'])},{r['status']}"
        for r in rows
    ]
    if _wants(cfg, "csv"):
        _write_text(
            cfg.out / "sharpness_report.csv",
            _csv(
                lines,
                "hyplune sharpness report v1",
                "lambda,k,regime,L_requested,L_evaluated,clamped,bound,area,abs_gap,status",
            ),
        )
    worst = max((r["abs_gap"] for r in rows if r["status"] in ("pass", "fail")),
                default=float("nan"))
    if _wants(cfg, "json"):
        _write_text(
            cfg.out / "sharpness_report.json",
            _json_text({
                "tolerance": cfg.tol,
                "cells": len(rows),
                "failures": failures,
                "worst_gap": None if math.isnan(worst) else worst,
                "rows": rows,
            }),
        )
    print(f"sharpness: {len(rows)} cells, {failures} failures, "
          f"worst gap {worst:.3e}, tol {cfg.tol:g}")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# dominance


_HIST_EDGES = (-math.inf, 0.0, 1e-12, 1e-9, 1e-6, 1e-3, 1e-2, 1e-1, 1.0, 10.0,
               math.inf)


def cmd_dominance(cfg: RunConfig) -> int:
    """Random curved polygons never dip below the bound: A >= bound(L) - tol."""
    lam = cfg.lambdas[0]
    rng = np.random.default_rng(cfg.seed)
    samples = []
    failures = 0
    for i in range(cfg.count):
        n_arcs = int(rng.integers(2, cfg.arcs + 1))
        sub_seed = int(rng.integers(2**31))
        try:
            poly = random_polygon(lam, n_arcs, seed=sub_seed)
        except GenerationError:
            failures += 1
            continue
        deficiency = poly.A - reverse_bound(lam, 1.0, poly.L).bound
        samples.append((i, n_arcs, sub_seed, poly.L, poly.A, deficiency))
    if not samples:
        raise DomainError("polygon generation failed for every sample")

    defs = np.array([s[5] for s in samples])
    violations = int(np.sum(defs < -cfg.tol))
    counts = [
        int(np.sum((defs >= lo) & (defs < hi)))
        for lo, hi in zip(_HIST_EDGES, _HIST_EDGES[1:])
    ]
    hist_lines = [
        f"{lo!r},{hi!r},{c}"
        for lo, hi, c in zip(_HIST_EDGES, _HIST_EDGES[1:], counts)
    ]
    if _wants(cfg, "csv"):
        _write_text(
            cfg.out / "dominance_histogram.csv",
            _csv(hist_lines, "hyplune dominance deficiency histogram v1",
                 "bin_low,bin_high,count"),
        )
        sample_lines = [
            f"{i},{n},{s},{L!r},{A!r},{d!r}" for i, n, s, L, A, d in samples
        ]
        _write_text(
            cfg.out / "dominance_samples.csv",
            _csv(sample_lines, "hyplune dominance samples v1",
                 "index,n_arcs,seed,L,A,deficiency"),
        )

    order = np.argsort(defs)
    worst = [samples[int(j)] for j in order[:3]]
    if _wants(cfg, "svg"):
        curves = []
        for i, n_arcs, sub_seed, L, A, d in worst:
            poly = random_polygon(lam, n_arcs, seed=sub_seed)
            curves.append(
                (f"#{i} n={n_arcs} deficiency={d:.3e}",
                 boundary_polyline(poly, per_arc=160))
            )
        _write_text(
            cfg.out / "dominance_worst.svg",
            disk_svg(curves, title=f"lambda={lam:g} worst deficiencies"),
        )

    two_arc = defs[np.array([s[1] == 2 for s in samples])]
    report = {
        "lambda": lam,
        "count": cfg.count,
        "generated": len(samples),
        "generation_failures": failures,
        "violations": violations,
        "tolerance": cfg.tol,
        "min_deficiency": float(defs.min()),
        "max_deficiency": float(defs.max()),
        "two_arc_max_deficiency": float(two_arc.max()) if len(two_arc) else None,
        "worst": [
            {"index": i, "n_arcs": n, "seed": s, "L": L, "A": A, "deficiency": d}
            for i, n, s, L, A, d in worst
        ],
    }
    if _wants(cfg, "json"):
        _write_text(cfg.out / "dominance_report.json", _json_text(report))
    print(
        f"dominance: {len(samples)}/{cfg.count} polygons, "
        f"{violations} violations, min deficiency {defs.min():.3e}, "
        f"{failures} generation failures"
    )
    return 1 if violations else 0


# ---------------------------------------------------------------------------
# pmp


def _pmp_profile(cfg: RunConfig, lam: float):
    """Profile + switch angles for the requested shape."""
    if cfg.profile_path is not None:
        prof = SupportProfile.from_csv(cfg.profile_path)
        if prof.k != 1.0:
            raise DomainError("imported profiles must be sampled at k = 1")
        return prof, list(prof.jumps) or None
    if cfg.shape == "circle":
        if lam <= 1.0:
            raise DomainError(
                "the constant-control circle closes only for lambda > 1 "
                "(admissible interval: lambda in (1, inf))"
            )
        return SupportProfile.constant(math.atanh(1.0 / lam), n=cfg.samples), None
    L = cfg.L_values[0] if cfg.L_values else 3.0
    lune = lune_for_length(lam, L)
    return lune_support_profile(lune, n=cfg.samples)


def cmd_pmp(cfg: RunConfig) -> int:
    """Run the maximum-principle certificate and write report plus signals."""
    lam = cfg.lambdas[0]
    prof, switches = _pmp_profile(cfg, lam)
    report = pmp_certificate(prof, lam, switch_angles=switches)
    if _wants(cfg, "json"):
        _write_text(cfg.out / "pmp_certificate.json", report.to_json() + "\n")
    if _wants(cfg, "csv"):
        theta, u, h1 = report.signals
        lines = [f"{t!r},{uu!r},{hh!r}" for t, uu, hh in zip(theta, u, h1)]
        _write_text(
            cfg.out / "pmp_signals.csv",
            _csv(lines, "hyplune pmp switching signals v1", "theta,u,H1"),
        )
    if _wants(cfg, "svg"):
        # reconstruct the contact curve from the profile and draw it
        g, g1 = prof.g, prof.g1
        p0 = 1.0 / np.sqrt(1.0 - g * g - g1 * g1)
        c, s = np.cos(prof.theta), np.sin(prof.theta)
        p1 = p0 * (g * c - g1 * s)
        p2 = p0 * (g * s + g1 * c)
        pts = np.column_stack([p1 / (1.0 + p0), p2 / (1.0 + p0)])
        pts = np.vstack([pts, pts[:1]])
        _write_text(
            cfg.out / "pmp_shape.svg",
            disk_svg([(f"{cfg.shape} lambda={lam:g}", pts)],
                     title=f"status: {report.status}"),
        )
    print(
        f"pmp: {report.status} (switches: {len(report.switch_angles)}, "
        f"residual {report.periodicity_residual:.3e}, "
        f"LC min {report.lc_min:.6f})"
    )
    for note in report.notes:
        print(f"  note: {note}")
    return 0


# ---------------------------------------------------------------------------
# limits


def cmd_limits(cfg: RunConfig) -> int:
    """Cross-regime continuity at lambda = k and the k -> 0 Euclidean limit."""
    k_values = (cfg.k,) if cfg.k != 1.0 else (1.0,)
    L_grid = cfg.L_values or (2.0, 4.0, 6.0)
    rows = []
    healthy = True
    for k in k_values:
        for L in L_grid:
            chk = regime_limits_check(k, L)
            healthy &= chk["shrinks"]
            for eps in sorted(chk["above"], reverse=True):
                rows.append(
                    {
                        "check": "cross_regime",
                        "k": k,
                        "lambda": None,
                        "L": float(L),
                        "eps": eps,
                        "value": chk["above"][eps],
                        "reference": chk["below"][eps],
                        "deviation": max(chk["above"][eps], chk["below"][eps]),
                    }
                )
    lam = cfg.lambdas[0] if cfg.lambdas else 1.0
    prev = None
    for k_small in (1e-2, 1e-3):
        for L in L_grid:
            target = euclidean_limit(lam, L)
            got = reverse_bound(lam, k_small, L).bound
            rel = abs(got - target) / abs(target) if target else abs(got)
            rows.append(
                {
                    "check": "euclidean",
                    "k": k_small,
                    "lambda": lam,
                    "L": float(L),
                    "eps": None,
                    "value": got,
                    "reference": target,
                    "deviation": rel,
                }
            )
        worst = max(r["deviation"] for r in rows
                    if r["check"] == "euclidean" and r["k"] == k_small)
        if prev is not None and worst > prev:
            healthy = False
        prev = worst
    lines = [
        f"{r['check']},{r['k']!r},{_cell(r['lambda'])},{r['L']!r},"
        f"{_cell(r['eps'])},{r['value']!r},{r['reference']!r},{r['deviation']!r}"
        for r in rows
    ]
    if _wants(cfg, "csv"):
        _write_text(
            cfg.out / "limits_report.csv",
            _csv(lines, "hyplune limits report v1",
                 "check,k,lambda,L,eps,value,reference,deviation"),
        )
    worst_cross = max((r["deviation"] for r in rows if r["check"] == "cross_regime"),
                      default=math.nan)
    worst_euc = max((r["deviation"] for r in rows if r["check"] == "euclidean"),
                    default=math.nan)
    if _wants(cfg, "json"):
        _write_text(
            cfg.out / "limits_report.json",
            _json_text({
                "healthy": healthy,
                "worst_cross_regime": worst_cross,
                "worst_euclidean": worst_euc,
                "rows": rows,
            }),
        )
    print(f"limits: worst cross-regime deviation {worst_cross:.3e}, "
          f"worst Euclidean relative deviation {worst_euc:.3e}, "
          f"shrinking: {'yes' if healthy else 'NO'}")
    return 0 if healthy else 1


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyplune",
        description="Sharp reverse isoperimetric bounds for curvature-"
                    "constrained convex curves in the hyperbolic plane.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--lambda", dest="lam", type=float, action="append",
                       help="curvature bound; repeatable where a grid makes sense")
        p.add_argument("--k", type=float, default=1.0,
                       help="plane curvature scale (default 1)")
        p.add_argument("--L", type=float, action="append",
                       help="length value (repeatable)")
        p.add_argument("--L-min", dest="L_min", type=float)
        p.add_argument("--L-max", dest="L_max", type=float)
        p.add_argument("--L-steps", dest="L_steps", type=int, default=10)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float)
        p.add_argument("--out", type=Path, default=Path("."))
        p.add_argument("--format", dest="formats", action="append",
                       choices=("csv", "json", "svg"),
                       help="restrict outputs; repeatable (default: all)")

    p_bound = sub.add_parser("bound", help="tabulate the sharp area bound")
    common(p_bound)

    p_sharp = sub.add_parser("sharpness", help="lunes attain the bound")
    common(p_sharp)
    p_sharp.add_argument("--perturb", type=float, default=0.0,
                         help="relative area perturbation (negative control)")

    p_dom = sub.add_parser("dominance", help="random polygons dominate the bound")
    common(p_dom)
    p_dom.add_argument("--count", type=int, default=1000)
    p_dom.add_argument("--arcs", type=int, default=8,
                       help="maximum arcs per polygon")

    p_pmp = sub.add_parser("pmp", help="maximum-principle certificate")
    common(p_pmp)
    p_pmp.add_argument("--shape", choices=("circle", "lune"), default="lune")
    p_pmp.add_argument("--profile", type=Path,
                       help="CSV support profile to certify instead of a shape")
    p_pmp.add_argument("--samples", type=int, default=4096,
                       help="profile grid size")

    p_lim = sub.add_parser("limits", help="regime continuity and k -> 0 limit")
    common(p_lim)
    return parser


def _config_from(args) -> RunConfig:
    command = args.command
    lambdas = tuple(args.lam) if args.lam else ()
    if command in ("bound", "dominance", "pmp") and len(lambdas) > 1:
        raise DomainError(f"{command} takes a single --lambda")
    if command in ("bound", "dominance", "pmp") and not lambdas:
        lambdas = (math.sqrt(2.0),)
    if command == "sharpness" and not lambdas:
        lambdas = _DEFAULT_LAMBDAS
    if command == "limits" and not lambdas:
        lambdas = (1.0,)
    L_values = _length_grid(args)
    if command == "bound" and not L_values:
        raise DomainError("bound requires --L or --L-min/--L-max")
    default_tol = {"sharpness": 1e-7, "dominance": 1e-9}.get(command, 1e-7)
    return RunConfig(
        command=command,
        lambdas=lambdas,
        k=args.k,
        L_values=L_values,
        L_steps=args.L_steps,
        seed=args.seed,
        arcs=getattr(args, "arcs", 8),
        count=getattr(args, "count", 1000),
        tol=args.tol if args.tol is not None else default_tol,
        out=args.out,
        formats=tuple(args.formats) if args.formats else ("csv", "json", "svg"),
        shape=getattr(args, "shape", "lune"),
        profile_path=getattr(args, "profile", None),
        perturb=getattr(args, "perturb", 0.0),
        samples=getattr(args, "samples", 4096),
    )


_DISPATCH = {
    "bound": cmd_bound,
    "sharpness": cmd_sharpness,
    "dominance": cmd_dominance,
    "pmp": cmd_pmp,
    "limits": cmd_limits,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from(args)
        return _DISPATCH[cfg.command](cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HypluneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
