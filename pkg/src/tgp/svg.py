"""Static SVG drawings of a terrain, its guards and their visibility.

Output is a pure function of the inputs: coordinates are scaled into a fixed
canvas and printed with three decimals, so identical inputs give identical
bytes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .discretization import CandidateSet, WitnessSet
from .geometry import Point2, Terrain
from .visibility import visibility_region

WIDTH, HEIGHT, MARGIN = 800, 400, 20


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


class _Frame:
    def __init__(self, t: Terrain):
        ys = [v.y for v in t.vertices]
        self.x0, self.y0 = t.x_min, min(ys)
        dx = t.x_max - t.x_min
        dy = max(ys) - self.y0 or Fraction(1)
        self.sx = Fraction(WIDTH - 2 * MARGIN) / dx
        self.sy = Fraction(HEIGHT - 2 * MARGIN) / dy

    def x(self, x) -> str:
        return _num(float(MARGIN + (x - self.x0) * self.sx))

    def y(self, y) -> str:
        # SVG y grows downwards
        return _num(float(HEIGHT - MARGIN - (y - self.y0) * self.sy))


def _marker(f: _Frame, p, cls: str, r: int) -> str:
    return f'  <circle class="{cls}" cx="{f.x(p.x)}" cy="{f.y(p.y)}" r="{r}"/>'


def plot_svg(
    t: Terrain,
    solution: Sequence[Point2] | None = None,
    discretization: CandidateSet | WitnessSet | None = None,
    shade: Sequence[int] | None = None,
) -> str:
    """Render ``t`` with optional guards and candidate/witness markers.

    ``solution`` is a sequence of guard points; ``shade`` picks which of them
    get a translucent band per visibility component (all by default).
    """
    f = _Frame(t)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        "  <style>.visibility{fill:#f0c040;fill-opacity:0.25}"
        ".terrain{fill:none;stroke:#333;stroke-width:2}"
        ".guard{fill:#c02020}.witness{fill:#2060c0}.candidate{fill:#888}</style>",
    ]
    guards = list(solution or [])
    chosen = range(len(guards)) if shade is None else shade
    for i in chosen:
        for iv in visibility_region(t, guards[i]).components:
            w = _num(max(float((iv.hi - iv.lo) * f.sx), 1.0))
            out.append(
                f'  <rect class="visibility" x="{f.x(iv.lo)}" y="{MARGIN}" '
                f'width="{w}" height="{HEIGHT - 2 * MARGIN}"/>'
            )
    pts = " ".join(f"{f.x(v.x)},{f.y(v.y)}" for v in t.vertices)
    out.append(f'  <polyline class="terrain" points="{pts}"/>')
    if isinstance(discretization, CandidateSet):
        out += [_marker(f, p, "candidate", 2) for p in discretization]
    elif isinstance(discretization, WitnessSet):
        out += [_marker(f, p, "witness", 3) for p in discretization.witnesses]
    out += [_marker(f, g, "guard", 5) for g in guards]
    out.append("</svg>")
    return "\n".join(out) + "\n"
