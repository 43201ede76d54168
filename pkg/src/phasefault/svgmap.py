"""Deterministic SVG rendering of QVF heatmaps.

The grid is written by hand (no plotting library) so byte-identical
golden files stay stable: phi runs left to right over [0, 2*pi), theta
bottom to top over [0, pi], and cell color comes straight from
`classify`. Cells without samples render hatched. Optional dotted
markers flag the shifts equivalent to common gates (T, S, Z on phi;
X/Y at theta=pi).
"""
from __future__ import annotations

import math

from .analysis import Heatmap, classify

CELL = 26
LEFT, RIGHT, TOP, BOTTOM = 56, 14, 34, 40

_CLASS_COLORS = {"green": "#4f9d5d", "white": "#ffffff", "red": "#d65a4a"}
_GATE_MARKS_PHI = (("T", math.pi / 4), ("S", math.pi / 2), ("Z", math.pi))
_GATE_MARKS_THETA = (("X/Y", math.pi),)

_PHI_TICKS = ((0.0, "0"), (math.pi / 2, "&#960;/2"), (math.pi, "&#960;"),
              (3 * math.pi / 2, "3&#960;/2"))
_THETA_TICKS = ((0.0, "0"), (math.pi / 2, "&#960;/2"), (math.pi, "&#960;"))


def _cell_color(value: float) -> str:
    return _CLASS_COLORS[classify(min(max(value, 0.0), 1.0))]


def render_heatmap(hm: Heatmap, title: str = "", markers: bool = True) -> str:
    """Render a heatmap as standalone SVG text.

    Raises ValueError when every cell is absent (nothing to draw).
    """
    if int(hm.count.sum()) == 0:
        raise ValueError("heatmap has no populated cells")
    n_rows, n_cols = len(hm.thetas), len(hm.phis)
    width = LEFT + n_cols * CELL + RIGHT
    height = TOP + n_rows * CELL + BOTTOM
    theta_step = hm.thetas[1] - hm.thetas[0]
    phi_step = hm.phis[1] - hm.phis[0]

    def x_center(phi: float) -> float:
        return LEFT + (phi / phi_step) * CELL + CELL / 2

    def y_center(theta: float) -> float:
        return TOP + (n_rows - 1 - theta / theta_step) * CELL + CELL / 2

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<defs>",
        '<pattern id="absent" width="6" height="6" patternUnits="userSpaceOnUse">',
        '<rect width="6" height="6" fill="#e8e8e8"/>',
        '<path d="M0,6 L6,0" stroke="#9a9a9a" stroke-width="1"/>',
        "</pattern>",
        "</defs>",
        f'<rect width="{width}" height="{height}" fill="#fdfdfd"/>',
    ]
    if title:
        out.append(
            f'<text x="{LEFT}" y="16" font-family="monospace" font-size="12">{title}</text>'
        )
    legend = "green &lt; 0.45 &#8804; white &#8804; 0.55 &lt; red"
    out.append(
        f'<text x="{width - RIGHT}" y="16" text-anchor="end" '
        f'font-family="monospace" font-size="10" fill="#555">{legend}</text>'
    )

    for ti, theta in enumerate(hm.thetas):
        y = TOP + (n_rows - 1 - ti) * CELL
        for pi_, phi in enumerate(hm.phis):
            x = LEFT + pi_ * CELL
            count = int(hm.count[ti, pi_])
            if count == 0:
                fill = "url(#absent)"
                label = "no samples"
            else:
                value = float(hm.mean[ti, pi_])
                fill = _cell_color(value)
                label = f"qvf={value:.4f} n={count}"
            out.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="{fill}" stroke="#777" stroke-width="0.5">'
                f"<title>theta={theta:.4f} phi={phi:.4f} {label}</title></rect>"
            )

    grid_top, grid_bottom = TOP, TOP + n_rows * CELL
    grid_left, grid_right = LEFT, LEFT + n_cols * CELL
    if markers:
        for name, phi in _GATE_MARKS_PHI:
            x = x_center(phi)
            out.append(
                f'<line x1="{x:.1f}" y1="{grid_top}" x2="{x:.1f}" y2="{grid_bottom}" '
                'stroke="#1a3f8f" stroke-width="1" stroke-dasharray="2,3"/>'
            )
            out.append(
                f'<text x="{x:.1f}" y="{grid_top - 4}" text-anchor="middle" '
                f'font-family="monospace" font-size="10" fill="#1a3f8f">{name}</text>'
            )
        for name, theta in _GATE_MARKS_THETA:
            yv = y_center(theta)
            out.append(
                f'<line x1="{grid_left}" y1="{yv:.1f}" x2="{grid_right}" y2="{yv:.1f}" '
                'stroke="#1a3f8f" stroke-width="1" stroke-dasharray="2,3"/>'
            )
            out.append(
                f'<text x="{grid_right + 2}" y="{yv:.1f}" font-family="monospace" '
                f'font-size="10" fill="#1a3f8f">{name}</text>'
            )

    for phi, label in _PHI_TICKS:
        x = x_center(phi)
        out.append(
            f'<text x="{x:.1f}" y="{grid_bottom + 14}" text-anchor="middle" '
            f'font-family="monospace" font-size="10">{label}</text>'
        )
    out.append(
        f'<text x="{(grid_left + grid_right) / 2:.1f}" y="{grid_bottom + 30}" '
        'text-anchor="middle" font-family="monospace" font-size="11">&#966; (rad)</text>'
    )
    for theta, label in _THETA_TICKS:
        yv = y_center(theta)
        out.append(
            f'<text x="{grid_left - 6}" y="{yv + 3:.1f}" text-anchor="end" '
            f'font-family="monospace" font-size="10">{label}</text>'
        )
    out.append(
        f'<text x="12" y="{(grid_top + grid_bottom) / 2:.1f}" font-family="monospace" '
        'font-size="11" transform="rotate(-90 12,'
        f'{(grid_top + grid_bottom) / 2:.1f})" text-anchor="middle">&#952; (rad)</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
