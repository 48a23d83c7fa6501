"""Static Poincare-disk figures as plain-text SVG.

No graphics dependency: curves arrive as (label, points) pairs with points
in unit-disk coordinates and are emitted as SVG path elements inside the
unit-circle frame.  Coordinates are formatted with a fixed number of
decimals so identical inputs always produce identical bytes.
"""

from __future__ import annotations

import numpy as np

_PALETTE = ("#1f6f8b", "#c94f2e", "#3a7d44", "#7d5ba6", "#b8860b", "#4a4a4a")


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def disk_svg(curves, size: int = 420, title: str | None = None) -> str:
    """Render closed curves in the Poincare disk.

    curves: iterable of (label, pts) with pts of shape (N, 2), |pts| < 1.
    Returns the SVG document as a string.
    """
    margin = 12.0
    cx = cy = size / 2.0
    rad = size / 2.0 - margin

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(rad)}" '
        'fill="none" stroke="#999999" stroke-width="1"/>',
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="1.5" fill="#999999"/>',
    ]
    legend_y = 18.0
    for i, (label, pts) in enumerate(curves):
        pts = np.asarray(pts, float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValueError("each curve needs an (N, 2) point array")
        color = _PALETTE[i % len(_PALETTE)]
        coords = [
            f"{_fmt(cx + rad * u)} {_fmt(cy - rad * v)}" for u, v in pts
        ]
        path = "M " + " L ".join(coords)
        out.append(
            f'<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        if label:
            out.append(
                f'<text x="10" y="{_fmt(legend_y)}" font-family="monospace" '
                f'font-size="11" fill="{color}">{label}</text>'
            )
            legend_y += 14.0
    if title:
        out.append(
            f'<text x="{_fmt(size - 10.0)}" y="18" text-anchor="end" '
            f'font-family="monospace" font-size="11" fill="#333333">{title}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
