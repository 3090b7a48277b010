"""Terrain and solution files, the instance generator, and LP export.

Coordinates are written as JSON integers when they are small whole numbers
and as ``"p/q"`` strings otherwise, so files round-trip exactly on any host.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Any, Sequence

from .geometry import Point2, Terrain, TerrainError, TerrainPoint, validate_terrain
from .setcover import CoverSolution, SetCoverInstance
from .discretization import bits

TERRAIN_FORMAT = "tgp-terrain"
SOLUTION_FORMAT = "tgp-solution"
VERSION = 1
PROFILES = ("random-walk", "valleys", "convex")

_SAFE_INT = 2**53


class ParseError(ValueError):
    pass


def encode_rat(v: Fraction) -> int | str:
    if v.denominator == 1 and abs(v.numerator) < _SAFE_INT:
        return v.numerator
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def decode_rat(v: Any) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ParseError(f"coordinate {v!r} must be an integer or a 'p/q' string")
    try:
        r = Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {v!r}") from exc
    if isinstance(v, str) and "/" in v:
        num, den = v.split("/")
        if int(den) <= 0 or Fraction(int(num), int(den)) != r or int(den) != r.denominator:
            raise ParseError(f"rational {v!r} is not in lowest terms with positive denominator")
    return r


def encode_point(p: Point2 | TerrainPoint) -> list:
    return [encode_rat(p.x), encode_rat(p.y)]


def decode_point(v: Any) -> Point2:
    if not isinstance(v, list) or len(v) != 2:
        raise ParseError(f"point {v!r} must be a pair [x, y]")
    return Point2(decode_rat(v[0]), decode_rat(v[1]))


def _dumps(obj, compact: bool) -> str:
    if compact:
        return json.dumps(obj, separators=(",", ":"))
    return json.dumps(obj, indent=2) + "\n"


def terrain_to_dict(t: Terrain) -> dict:
    return {
        "format": TERRAIN_FORMAT,
        "version": VERSION,
        "vertices": [encode_point(v) for v in t.vertices],
    }


def dumps_terrain(t: Terrain, compact: bool = False) -> str:
    return _dumps(terrain_to_dict(t), compact)


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def _check_header(doc: Any, fmt: str) -> None:
    if not isinstance(doc, dict):
        raise ParseError(f"expected a JSON object for {fmt}")
    if doc.get("format") != fmt:
        raise ParseError(f"expected format {fmt!r}, got {doc.get('format')!r}")
    if doc.get("version") != VERSION:
        raise ParseError(f"unsupported {fmt} version {doc.get('version')!r}")


def loads_terrain(text: str, normalize: bool = False) -> Terrain:
    doc = _load_json(text)
    _check_header(doc, TERRAIN_FORMAT)
    verts = doc.get("vertices")
    if not isinstance(verts, list):
        raise ParseError("terrain file has no vertex list")
    return validate_terrain([decode_point(v) for v in verts], normalize=normalize)


def read_terrain(path: str, normalize: bool = False) -> Terrain:
    with open(path) as fh:
        return loads_terrain(fh.read(), normalize)


def write_text(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def solution_to_dict(
    sol: CoverSolution,
    guards: Sequence[TerrainPoint],
    metadata: dict | None = None,
    timing: dict | None = None,
) -> dict:
    doc = {
        "format": SOLUTION_FORMAT,
        "version": VERSION,
        "method": sol.method,
        "guards": [encode_point(guards[g]) for g in sol.chosen],
        "cardinality": sol.cardinality,
        "optimal": sol.optimal,
        "lower_bound": sol.lower_bound,
        "metadata": dict(sorted((metadata or {}).items())),
    }
    if timing:
        doc["timing"] = timing
    return doc


def dumps_solution(sol: CoverSolution, guards, metadata=None, timing=None) -> str:
    return _dumps(solution_to_dict(sol, guards, metadata, timing), compact=False)


def loads_solution(text: str) -> dict:
    """Parse a solution file; ``guards`` are returned as exact Point2s."""
    doc = _load_json(text)
    _check_header(doc, SOLUTION_FORMAT)
    guards = doc.get("guards")
    if not isinstance(guards, list):
        raise ParseError("solution file has no guard list")
    doc = dict(doc)
    doc["guards"] = [decode_point(g) for g in guards]
    if doc.get("cardinality") != len(doc["guards"]):
        raise ParseError("cardinality does not match the number of guards")
    return doc


def read_solution(path: str) -> dict:
    with open(path) as fh:
        return loads_solution(fh.read())


def points_to_dict(kind: str, points: Sequence[TerrainPoint], extra: Sequence[dict]) -> dict:
    return {
        "format": f"tgp-{kind}",
        "version": VERSION,
        "points": [dict(xy=encode_point(p), **e) for p, e in zip(points, extra)],
    }


def dumps_points(kind: str, points: Sequence[TerrainPoint], extra: Sequence[dict]) -> str:
    return _dumps(points_to_dict(kind, points, extra), compact=False)


# --- generator ----------------------------------------------------------------


def generate_terrain(n: int, seed: int, profile: str = "random-walk") -> Terrain:
    """Deterministic terrain for ``(n, seed, profile)``.

    ``random-walk``: integer steps, frequent collinearities and grazing
    contacts.  ``valleys``: the walled-valley family of
    ``valley_family`` (worst case for inclusion-minimal witnesses), shifted
    by a seed-dependent offset.
    ``convex``: strictly increasing slopes, so every pair of points is
    mutually visible.
    """
    if n < 2:
        raise TerrainError(f"n must be >= 2, got {n}")
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {', '.join(PROFILES)}")
    rng = random.Random(f"{profile}/{n}/{seed}")
    pts = []
    if profile == "random-walk":
        x, y = 0, 0
        for _ in range(n):
            pts.append((x, y))
            x += rng.randint(1, 3)
            y += rng.randint(-4, 4)
    elif profile == "convex":
        x, y = 0, 0
        slope = rng.randint(-n, 0)
        for _ in range(n):
            pts.append((x, y))
            dx = rng.randint(1, 3)
            x, y = x + dx, y + slope * dx
            slope += rng.randint(1, 3)
    elif n < 9:
        # too few vertices for one walled valley
        pts = [(2 * i, 6 * (i % 2 == 0)) for i in range(n)]
    else:
        t, _ = valley_family((n - 5) // 4, (n - 5) // 4)
        pts = [(v.x, v.y) for v in t.vertices]
        # pad to exactly n vertices with collinear points on the first ramp
        (x0, y0), (x1, y1) = pts[1], pts[2]
        pad = n - len(pts)
        pts[2:2] = [(x0 + (x1 - x0) * Fraction(j, pad + 1), y0 + (y1 - y0) * Fraction(j, pad + 1))
                    for j in range(1, pad + 1)]
        dx, dy = rng.randint(0, 9), rng.randint(0, 9)
        pts = [(x + dx, y + dy) for x, y in pts]
    return validate_terrain(pts)


_WALL, _SPAN, _FACE = 10, 14, 40


def valley_family(m: int, k: int) -> tuple[Terrain, list[TerrainPoint]]:
    """Walled valleys with ``k`` guards on each outer slope and one per valley.

    Every valley is ``wall, P, B, T`` with walls of equal height.  Left-slope
    guards look over the nearest wall onto the lower part of each valley's
    descending edge, right-slope guards see its upper part, and the hit
    points interleave, so each valley holds about ``k`` features with
    pairwise incomparable guard sets.  The inclusion-minimal witness count
    therefore grows like ``m * k``.
    """
    from .geometry import point_at

    D, H, Fc = _SPAN, _WALL, Fraction(_FACE)
    # far outer slopes keep the ray slopes nearly equal across valleys
    gap = 150 * D * m
    mid = (m - 1) * D // 2
    step = Fraction(7, 2 * k + 1)
    blues, reds = [], []
    for i in range(k):
        a = Fraction(3, 2) + (2 * i + 1) * step
        s = Fraction(1, 2) + Fraction(11, 2) / a
        blues.append((s * mid + H + Fc * gap) / (s - Fc))
    xg = m * D + gap
    for j in range(k):
        e = Fraction(3, 2) + (2 * j + 2) * step
        r = (Fraction(11, 2) + e / 2) / (14 - e)
        reds.append((Fc * xg + H - r * (mid + D)) / (Fc - r))
    xl, xr = min(blues) - 1, max(reds) + 1
    pts = [(xl, Fc * (-gap - xl)), (-gap, 0)]
    for v in range(m):
        w = v * D
        pts += [(w, H), (w + 1, 4), (w + 9, 0), (w + 12, 2)]
    pts += [(m * D, H), (xg, 0), (xr, Fc * (xr - xg))]
    t = validate_terrain(pts)
    guards = [point_at(t, x) for x in blues + reds] + [point_at(t, v * D + 9) for v in range(m)]
    return t, guards


# --- IP export ----------------------------------------------------------------


def _wrap_terms(prefix: str, terms: list[str], suffix: str = "", width: int = 200) -> list[str]:
    # LP readers cap line length; continuation lines start with whitespace
    lines = []
    cur = prefix + (terms[0] if terms else "")
    for term in terms[1:]:
        if len(cur) + len(term) + 3 > width:
            lines.append(cur)
            cur = "   + " + term
        else:
            cur += " + " + term
    lines.append(cur + suffix)
    return lines


def export_ip(inst: SetCoverInstance) -> str:
    """The covering IP in CPLEX LP text format.

    One binary ``x_g`` per guard, one ``>= 1`` row per witness over the guards
    that see it, objective the sum of all ``x_g``.
    """
    names = [f"x_{g}" for g in range(inst.n_guards)]
    out = ["\\ terrain guarding covering program", "Minimize"]
    out += _wrap_terms(" obj: ", names)
    if inst.rows:
        out.append("Subject To")
    for w, row in enumerate(inst.rows):
        out += _wrap_terms(f" w_{w}: ", [names[g] for g in bits(row)], " >= 1")
    out.append("Binary")
    for i in range(0, len(names), 10):
        out.append(" " + " ".join(names[i:i + 10]))
    out.append("End")
    return "\n".join(out) + "\n"
