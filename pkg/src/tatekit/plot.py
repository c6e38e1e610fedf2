"""Support diagrams on an integer exponent grid, as ASCII or SVG.

Cells are classified as

* ``SHADED``: a member of the subspace, or a known nonzero coefficient;
* ``HATCHED``: beyond the certified precision of a truncated series;
* ``BLANK``: certified absent.
"""

from __future__ import annotations

from html import escape
from typing import Optional, Sequence

from .errors import ArityUnsupported, SchemaError
from .geometry import OpenProfile
from .lattice import MonomialSubspace, member
from .series import TruncatedSeries

SHADED, HATCHED, BLANK = "#", "/", "."
CELL = 14


def _cell(obj, e: tuple) -> str:
    if isinstance(obj, TruncatedSeries):
        c = obj.coefficient(e)
        if c is None:
            return HATCHED
        return BLANK if c.is_zero() else SHADED
    if isinstance(obj, MonomialSubspace):
        return SHADED if member(obj, e) else BLANK
    if isinstance(obj, OpenProfile):
        return SHADED if e in obj else BLANK
    raise SchemaError(f"cannot plot {type(obj).__name__}")


def _arity(obj) -> int:
    return 2 if isinstance(obj, OpenProfile) else obj.n


def grid(obj, box: Sequence[range], axes: tuple = (1, 2), fixed: Optional[dict] = None) -> list:
    """Rows of cell classes, top row = largest value on the vertical axis.

    ``axes`` are the 1-based (horizontal, vertical) axes; the other axes are
    pinned by ``fixed`` (default 0).
    """
    n = _arity(obj)
    fixed = dict(fixed or {})
    h, v = axes
    if n < 2 or not (1 <= h <= n and 1 <= v <= n and h != v):
        raise ArityUnsupported(f"need two distinct axes of an arity >= 2 object, got {axes} for n={n}")
    xs, ys = box
    rows = []
    for y in reversed(ys):
        row = []
        for x in xs:
            e = [fixed.get(i + 1, 0) for i in range(n)]
            e[h - 1], e[v - 1] = x, y
            row.append(_cell(obj, tuple(e)))
        rows.append(row)
    return rows


def ascii_plot(obj, box: Sequence[range], axes: tuple = (1, 2), fixed: Optional[dict] = None) -> str:
    if _arity(obj) == 1:
        xs = box[0]
        line = "".join(_cell(obj, (x,)) for x in xs)
        return f"a1 {xs.start}..{xs.stop - 1}\n{line}\n"
    rows = grid(obj, box, axes, fixed)
    xs, ys = box
    width = max(len(str(ys.start)), len(str(ys.stop - 1)))
    out = [f"{'':>{width}} a{axes[0]} {xs.start}..{xs.stop - 1} ->"]
    for y, row in zip(reversed(ys), rows):
        out.append(f"{y:>{width}} " + "".join(row))
    out.append(f"{'':>{width}} (vertical: a{axes[1]})")
    return "\n".join(out) + "\n"


def svg_plot(obj, box: Sequence[range], axes: tuple = (1, 2), fixed: Optional[dict] = None, title: str = "") -> str:
    if _arity(obj) == 1:
        raise ArityUnsupported("arity-1 objects have no 2-D diagram; use ascii_plot")
    rows = grid(obj, box, axes, fixed)
    xs, ys = box
    pad = 30
    w, h = pad + CELL * len(xs) + 10, pad + CELL * len(ys) + 24
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        '<defs><pattern id="hatch" width="4" height="4" patternUnits="userSpaceOnUse">'
        '<path d="M0,4 L4,0" stroke="#888" stroke-width="1"/></pattern></defs>',
    ]
    if title:
        parts.append(f'<text x="{pad}" y="14" font-size="11" font-family="monospace">{escape(title)}</text>')
    fill = {SHADED: "#4a6fa5", HATCHED: "url(#hatch)", BLANK: "#ffffff"}
    for r, row in enumerate(rows):
        for c, cls in enumerate(row):
            x, y = pad + c * CELL, pad - 10 + r * CELL
            parts.append(f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill[cls]}" stroke="#ccc" stroke-width="0.5"/>')
    # Axis lines through the origin when it is inside the box.
    if 0 in xs:
        x0 = pad + xs.index(0) * CELL
        parts.append(f'<line x1="{x0}" y1="{pad - 10}" x2="{x0}" y2="{pad - 10 + CELL * len(ys)}" stroke="#000" stroke-width="1"/>')
    if 0 in ys:
        y0 = pad - 10 + (len(ys) - 1 - ys.index(0)) * CELL + CELL
        parts.append(f'<line x1="{pad}" y1="{y0}" x2="{pad + CELL * len(xs)}" y2="{y0}" stroke="#000" stroke-width="1"/>')
    parts.append(
        f'<text x="{pad}" y="{h - 4}" font-size="10" font-family="monospace">'
        f"a{axes[0]} in [{xs.start},{xs.stop - 1}], a{axes[1]} in [{ys.start},{ys.stop - 1}]</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_support(obj, box: Sequence[range], fmt: str = "ascii", axes: tuple = (1, 2), fixed: Optional[dict] = None, title: str = "") -> str:
    if fmt == "ascii":
        return ascii_plot(obj, box, axes, fixed)
    if fmt == "svg":
        return svg_plot(obj, box, axes, fixed, title)
    raise SchemaError(f"unknown plot format {fmt!r}")
