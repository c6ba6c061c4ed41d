"""Schematic SVG fans: one wedge per slice, equal angles, exponents as labels."""

from __future__ import annotations

import math
from typing import List
from xml.sax.saxutils import escape

from .decomposition import LEFT, RIGHT
from .domain import DomainKind
from .scalars import format_ext

SIZE = 640
RADIUS = 250
SPAN = {DomainKind.QUADRANT: 90.0, DomainKind.PLANE: 360.0, DomainKind.TRIANGLE: 60.0}
FILLS = ("#f4d7a1", "#cfe3c4", "#c9d9ee", "#eccbd9", "#e2dcc8", "#d5ecec")


def _sign_text(s: int) -> str:
    return {1: "+", -1: "-", 0: "0"}[s]


def _point(cx: float, cy: float, r: float, degrees: float):
    a = math.radians(degrees)
    return cx + r * math.cos(a), cy - r * math.sin(a)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(P) -> str:
    """The fan of a pizza or multipizza as an SVG document (deterministic text)."""
    kind = P.domain.kind
    span = SPAN[kind]
    n = len(P.slices)
    step = span / n
    if kind is DomainKind.QUADRANT:
        cx, cy = SIZE * 0.2, SIZE * 0.8
        start = 0.0
    elif kind is DomainKind.TRIANGLE:
        cx, cy = SIZE * 0.2, SIZE * 0.8
        start = 15.0
    else:
        cx, cy = SIZE / 2, SIZE / 2
        start = 0.0
    out: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}" font-family="monospace" font-size="11">',
        f'<title>{escape(kind.value)} fan, {n} slices</title>',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    for i, s in enumerate(P.slices):
        a0, a1 = start + i * step, start + (i + 1) * step
        x0, y0 = _point(cx, cy, RADIUS, a0)
        x1, y1 = _point(cx, cy, RADIUS, a1)
        large = 1 if step > 180 else 0
        out.append(
            f'<path class="wedge" data-slice="{i}" d="M {_fmt(cx)} {_fmt(cy)} L {_fmt(x0)} {_fmt(y0)} '
            f'A {RADIUS} {RADIUS} 0 {large} 0 {_fmt(x1)} {_fmt(y1)} Z" '
            f'fill="{FILLS[i % len(FILLS)]}" stroke="#555" stroke-width="1"/>')
    for i, s in enumerate(P.slices):
        a0, a1 = start + i * step, start + (i + 1) * step
        if s.support in (LEFT, RIGHT):
            ang = a0 if s.support == LEFT else a1
            # pull the marker slightly into its own wedge so shared rays stay readable
            ang += step * 0.04 if s.support == LEFT else -step * 0.04
            x, y = _point(cx, cy, RADIUS, ang)
            out.append(f'<line class="support" data-slice="{i}" x1="{_fmt(cx)}" y1="{_fmt(cy)}" '
                       f'x2="{_fmt(x)}" y2="{_fmt(y)}" stroke="#b22" stroke-width="4"/>')
        mid = (a0 + a1) / 2
        lx, ly = _point(cx, cy, RADIUS * 0.62, mid)
        lines = [f"b={format_ext(s.beta)}"]
        for nu, c in enumerate(s.columns):
            tag = f"{nu + 1}:" if len(s.columns) > 1 else ""
            lines.append(f"{tag}{c.Q} {c.mu} {_sign_text(c.sign)}")
        out.append(f'<text class="label" data-slice="{i}" x="{_fmt(lx)}" y="{_fmt(ly)}" text-anchor="middle">')
        for k, line in enumerate(lines):
            dy = "0" if k == 0 else "1.2em"
            out.append(f'<tspan x="{_fmt(lx)}" dy="{dy}">{escape(line)}</tspan>')
        out.append('</text>')
    arcs = [s.left_arc for s in P.slices]
    if not P.cyclic:
        arcs.append(P.slices[-1].right_arc)
    for k, arc in enumerate(arcs):
        x, y = _point(cx, cy, RADIUS + 18, start + k * step)
        out.append(f'<text class="arc" x="{_fmt(x)}" y="{_fmt(y)}" text-anchor="middle" '
                   f'fill="#333">{escape(arc.describe())}</text>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
