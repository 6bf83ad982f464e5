"""Affine cross-sections of GKZ decompositions rendered as SVG.

For r = 3 every cone is cut with the plane x1 + x2 + x3 = 1 and drawn in
the usual equilateral layout; for r = 2 the section is the segment
x1 + x2 = 1.  Vertex coordinates are exact rationals; floats appear only
when handing coordinates to matplotlib.
"""

from __future__ import annotations

import io
import math
from fractions import Fraction
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .cone import Cone  # noqa: E402
from .fanbunch import eff_cone, mov_cone, nef_cone  # noqa: E402
from .gkz import gkz_decomposition  # noqa: E402
from .lattice import IntMatrix  # noqa: E402

__all__ = ["PlotError", "section_vertices", "section_data", "render_svg", "golden_text", "PALETTE"]

PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7")


class PlotError(ValueError):
    pass


def _project(v: Sequence[int]) -> tuple[Fraction, ...]:
    s = sum(v)
    if s <= 0:
        raise PlotError(f"ray {tuple(v)} does not meet the section hyperplane")
    return tuple(Fraction(x, s) for x in v)


def _cycle(C: Cone) -> list[tuple[int, ...]]:
    """Rays of a 3-dimensional pointed cone in boundary order."""
    rays = list(C.generators)
    nbrs = {g: [] for g in rays}
    for h in C.facets:
        on = [g for g in rays if sum(a * b for a, b in zip(h, g)) == 0]
        a, b = on
        nbrs[a].append(b)
        nbrs[b].append(a)
    start = min(rays)
    order = [start]
    prev, cur = None, start
    while True:
        nxt = [x for x in sorted(nbrs[cur]) if x != prev][0]
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    # counter-clockwise in the (x2, x3) chart of the section
    pts = [_project(g) for g in order]
    area = sum(p[1] * q[2] - q[1] * p[2] for p, q in zip(pts, pts[1:] + pts[:1]))
    if area < 0:
        order = [order[0]] + order[:0:-1]
    return order


def section_vertices(C: Cone) -> list[tuple[Fraction, ...]]:
    """Section of ``C`` with the hyperplane where the coordinates sum to 1."""
    r = C.ambient_dim
    if r not in (2, 3):
        raise PlotError(f"sections are drawn for r = 2 or 3, not r = {r}")
    if not C.is_strongly_convex():
        raise PlotError("cone is not pointed")
    if r == 3 and C.dim == 3:
        return [_project(g) for g in _cycle(C)]
    return sorted((_project(g) for g in C.generators), reverse=True)


def section_data(Q, restrict_to_mov: bool = True, nef: Cone | None = None) -> dict:
    Q = IntMatrix.coerce(Q)
    if Q.nrows not in (2, 3):
        raise PlotError(f"sections are drawn for r = 2 or 3, not r = {Q.nrows}")
    d = gkz_decomposition(Q, restrict_to_mov)
    data = {
        "r": Q.nrows,
        "eff": section_vertices(eff_cone(Q)),
        "mov": section_vertices(mov_cone(Q)),
        "chambers": [(k, section_vertices(ch.cone)) for k, ch in enumerate(d.chambers, 1)],
        "anticanonical": _project([sum(c) for c in zip(*Q.columns())]),
        "nef": section_vertices(nef) if nef is not None and nef.dim > 0 else None,
    }
    return data


def _xy(p: Sequence[Fraction]) -> tuple[float, float]:
    if len(p) == 2:
        return float(p[1]), 0.0
    return float(p[1] + p[2] / 2), float(p[2]) * math.sqrt(3) / 2


def render_svg(Q, restrict_to_mov: bool = True, nef: Cone | None = None, title: str = "") -> bytes:
    data = section_data(Q, restrict_to_mov, nef)
    rc = {"svg.hashsalt": "wmdskit", "svg.fonttype": "none", "font.family": "DejaVu Sans"}
    with plt.rc_context(rc):
        if data["r"] == 3:
            fig = plt.figure(figsize=(5.0, 5.0 * math.sqrt(3) / 2 + 0.4))
            ax = fig.add_axes((0.02, 0.02, 0.96, 0.96))
            ax.set_xlim(-0.05, 1.05)
            ax.set_ylim(-0.05, math.sqrt(3) / 2 + 0.1)
            ax.set_aspect("equal")
            tri = [(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)]
            ax.add_patch(plt.Polygon(tri, closed=True, fill=False, ec="#bbbbbb", lw=0.6))
            for k, verts in data["chambers"]:
                xy = [_xy(v) for v in verts]
                ax.add_patch(plt.Polygon(xy, closed=True, fc=PALETTE[(k - 1) % 8], ec="black", lw=0.8, alpha=0.85))
                cx = sum(p[0] for p in xy) / len(xy)
                cy = sum(p[1] for p in xy) / len(xy)
                ax.text(cx, cy, str(k), ha="center", va="center", fontsize=11)
            for key, style in (("eff", dict(ec="black", lw=1.4)), ("mov", dict(ec="black", lw=1.0, ls="--"))):
                verts = data[key]
                if len(verts) >= 3:
                    ax.add_patch(plt.Polygon([_xy(v) for v in verts], closed=True, fill=False, **style))
        else:
            fig = plt.figure(figsize=(6.0, 1.4))
            ax = fig.add_axes((0.02, 0.05, 0.96, 0.9))
            ax.set_xlim(-0.05, 1.05)
            ax.set_ylim(-0.5, 0.5)
            ax.plot([0, 1], [0, 0], color="#bbbbbb", lw=0.6)
            for k, verts in data["chambers"]:
                xs = sorted(_xy(v)[0] for v in verts)
                ax.plot(xs, [0, 0], color=PALETTE[(k - 1) % 8], lw=8, solid_capstyle="butt")
                ax.text(sum(xs) / 2, 0.22, str(k), ha="center", va="center", fontsize=11)
                for x in xs:
                    ax.plot([x, x], [-0.1, 0.1], color="black", lw=0.8)
        if data["nef"] is not None:
            pts = [_xy(v) for v in data["nef"]]
            if len(pts) == 1:
                ax.plot(*pts[0], marker="o", ms=7, mfc="white", mec="black", zorder=5)
            else:
                ax.plot([p[0] for p in pts] + [pts[0][0]], [p[1] for p in pts] + [pts[0][1]], color="black", lw=2.0)
        ax.plot(*_xy(data["anticanonical"]), marker="*", ms=10, color="black", zorder=6)
        if title:
            ax.set_title(title, fontsize=10)
        ax.axis("off")
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def golden_text(Q, restrict_to_mov: bool = True) -> str:
    """Tab-separated chamber section vertices: exact rationals and 6-digit decimals."""
    data = section_data(Q, restrict_to_mov)
    lines = ["chamber\tvertex\texact\tdecimal"]
    for k, verts in data["chambers"]:
        for i, v in enumerate(verts):
            exact = ",".join(_frac(x) for x in v)
            dec = ",".join(f"{float(x):.6f}" for x in v)
            lines.append(f"{k}\t{i}\t{exact}\t{dec}")
    return "\n".join(lines) + "\n"
