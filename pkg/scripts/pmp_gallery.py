"""Gallery of maximum-principle certificates.

Runs the certificate machinery on the extremal shapes (circle, lunes of a
few lengths) and on a deliberately non-extremal asymmetric three-arc
polygon, printing one status line each and writing the Poincare-disk
figures next to this script under ./pmp_gallery_out/.
"""

import math
from pathlib import Path

import numpy as np

from hyplune.control import pmp_certificate
from hyplune.shapes import (
    boundary_polyline,
    lune_for_length,
    lune_support_profile,
    polygon_from_regions,
    polygon_support_profile,
    supporting_cycle,
)
from hyplune.support import SupportProfile
from hyplune.svg import disk_svg

OUT = Path(__file__).resolve().parent / "pmp_gallery_out"
OUT.mkdir(exist_ok=True)

LAM = math.sqrt(2.0)

cases = []

# the maximal circle: constant control, no switches
cases.append(("circle", SupportProfile.constant(math.atanh(1.0 / LAM)), None, None))

# lunes of increasing length
for L in (2.0, 3.0, 4.5):
    lune = lune_for_length(LAM, L)
    prof, sw = lune_support_profile(lune, n=4096)
    cases.append((f"lune L={L}", prof, sw, lune))

# a non-extremal bang-bang curve: asymmetric three-arc polygon
cyc = [supporting_cycle(LAM, psi, w)
       for psi, w in [(0.2, 0.45), (2.3, 0.40), (4.4, 0.50)]]
poly = polygon_from_regions(cyc)
prof, sw = polygon_support_profile(poly, n=4096)
cases.append(("asymmetric 3-arc", prof, sw, poly))

print(f"lambda = {LAM:.6f}\n")
for name, prof, sw, shape in cases:
    rep = pmp_certificate(prof, LAM, switch_angles=sw)
    print(f"{name:18s} {rep.status:14s} switches={len(rep.switch_angles)} "
          f"residual={rep.periodicity_residual:.2e} LCmin={rep.lc_min:.4f}")
    for note in rep.notes:
        print(f"{'':18s} - {note}")
    tag = name.replace(" ", "_").replace("=", "")
    (OUT / f"certificate_{tag}.json").write_text(rep.to_json() + "\n")
    if shape is not None:
        svg = disk_svg([(name, boundary_polyline(shape, per_arc=200))],
                       title=rep.status)
        (OUT / f"shape_{tag}.svg").write_text(svg)

print(f"\nreports and figures in {OUT}")
