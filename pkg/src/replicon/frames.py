"""Deterministic SVG frames: the container, codon arms, and field circles.

Frames are plain text with fixed float formatting, so identical worlds
always render byte-identical files. Arm and field colours follow the codon
semantics: red and blue horizontal arms, purple or green vertical arm by
codon type, yellow circles only while the repulsion field is active.
"""

from __future__ import annotations

import math
from pathlib import Path

from .model import CodonType, World

_MARGIN = 4.0


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_svg(world: World) -> str:
    p = world.params
    w, h, m = world.width, world.height, _MARGIN
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{-m} {-m} {w + 2 * m} {h + 2 * m}" width="800" height="800">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white" '
        f'stroke="grey" stroke-width="1"/>',
    ]
    arm_h = p.arm_length_horizontal
    arm_v = p.arm_length_vertical
    for c in world.codons:
        cos_a = math.cos(c.angle)
        sin_a = math.sin(c.angle)
        # SVG y grows downward; flip so the world reads naturally
        x, y = c.x, h - c.y
        red_tip = (x + arm_h * cos_a, y - arm_h * sin_a)
        blue_tip = (x - arm_h * cos_a, y + arm_h * sin_a)
        vert_tip = (x - arm_v * sin_a, y - arm_v * cos_a)
        vert_color = "purple" if c.ctype == CodonType.TYPE0 else "green"
        for (tx, ty), color in ((red_tip, "red"), (blue_tip, "blue"), (vert_tip, vert_color)):
            out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(y)}" x2="{_fmt(tx)}" y2="{_fmt(ty)}" '
                       f'stroke="{color}" stroke-width="0.6"/>')
        circles = [
            (red_tip, "red", p.radius_large_red if c.red_large else p.radius_small_red),
            (blue_tip, "blue", p.radius_large_blue if c.blue_large else p.radius_small_blue),
        ]
        if c.ctype == CodonType.TYPE0:
            vr = p.radius_large_purple if c.purple_large else p.radius_small_purple
        else:
            vr = p.radius_large_green if c.green_large else p.radius_small_green
        circles.append((vert_tip, vert_color, vr))
        if c.yellow_large:
            circles.append((vert_tip, "gold", p.radius_large_yellow))
        for (tx, ty), color, r in circles:
            out.append(f'<circle cx="{_fmt(tx)}" cy="{_fmt(ty)}" r="{_fmt(r)}" '
                       f'fill="none" stroke="{color}" stroke-width="0.3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_frame(world: World, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"frame_{world.step:09d}.svg"
    path.write_text(render_svg(world), encoding="utf-8")
    return path
