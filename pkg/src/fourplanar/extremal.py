"""Optimal 4-planar drawings with exactly ``6(n-2)`` edges.

Construction: a stacked triangulation with ``t`` faces is subdivided into
a hexangulation (every edge gets a midpoint), and inside each hexagon all
nine diagonals are drawn.  The crossing structure of the nine diagonals is
read off once from straight-line geometry (a slightly perturbed regular
hexagon) and stamped into every hexagon as combinatorial data.  This is the
only module that touches coordinates.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .drawing import CrossingRec, DrawingSpec, EdgeRec, Planarization, end_ref, planarize
from .errors import BadParameterError, SelfCrossingError
from .topomap import CombMap

__all__ = [
    "Triangulation",
    "Hexangulation",
    "HexagonTemplate",
    "drawing_from_polylines",
    "hexagon_template",
    "stacked_triangulation",
    "hexangulate",
    "add_hexagon_diagonals",
    "generate_optimal",
    "hex1",
]

Point = tuple[float, float]


# ---------------------------------------------------------------------------
# straight-line oracle
# ---------------------------------------------------------------------------


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _intersect(p1: Point, p2: Point, p3: Point, p4: Point) -> tuple[float, float] | None:
    """Parameters ``(s, t)`` of a proper interior crossing of p1p2 and p3p4."""
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = p4[0] - p3[0], p4[1] - p3[1]
    den = _cross(rx, ry, sx, sy)
    if abs(den) < 1e-15:
        return None
    qx, qy = p3[0] - p1[0], p3[1] - p1[1]
    s = _cross(qx, qy, sx, sy) / den
    t = _cross(qx, qy, rx, ry) / den
    eps = 1e-12
    if eps < s < 1 - eps and eps < t < 1 - eps:
        return s, t
    return None


def drawing_from_polylines(
    vertices: Mapping[str, Point],
    edges: Sequence[tuple[str, str, str, Sequence[Point]]],
    crossing_prefix: str = "x",
) -> DrawingSpec:
    """Read a combinatorial drawing off polyline geometry.

    ``edges`` holds ``(id, tail, head, bends)`` where ``bends`` are the
    interior polyline points.  Input must be in general position.
    """
    paths = {}
    for eid, tail, head, bends in edges:
        paths[eid] = [tuple(vertices[tail]), *map(tuple, bends), tuple(vertices[head])]

    # (edge, piece index, param) for every crossing on every edge
    hits: dict[str, list[tuple[int, float, int]]] = {eid: [] for eid, *_ in edges}
    raw: list[tuple[str, str, float]] = []  # (first, second, orientation sign)
    ids = [e[0] for e in edges]
    for ia in range(len(ids)):
        a = ids[ia]
        pa = paths[a]
        for ib in range(ia, len(ids)):
            b = ids[ib]
            pb = paths[b]
            for i in range(len(pa) - 1):
                for j in range(len(pb) - 1):
                    if a == b and j <= i:
                        continue
                    r = _intersect(pa[i], pa[i + 1], pb[j], pb[j + 1])
                    if r is None:
                        continue
                    if a == b:
                        raise SelfCrossingError(f"polyline {a} crosses itself")
                    k = len(raw)
                    da = (pa[i + 1][0] - pa[i][0], pa[i + 1][1] - pa[i][1])
                    db = (pb[j + 1][0] - pb[j][0], pb[j + 1][1] - pb[j][1])
                    raw.append((a, b, 1 if _cross(*da, *db) > 0 else -1))
                    hits[a].append((i, r[0], k))
                    hits[b].append((j, r[1], k))

    crossings = [CrossingRec(f"{crossing_prefix}{k + 1}", (a, b), o) for k, (a, b, o) in enumerate(raw)]
    recs = []
    for eid, tail, head, _ in edges:
        order = sorted(hits[eid])
        recs.append(EdgeRec(eid, tail, head, tuple(f"{crossing_prefix}{k + 1}" for _, _, k in order)))

    ends: dict[str, list[tuple[float, str]]] = {v: [] for v in vertices}
    for eid, tail, head, _ in edges:
        p = paths[eid]
        for ref, v, q in ((end_ref(eid, True), tail, p[1]), (end_ref(eid, False), head, p[-2])):
            x, y = vertices[v]
            ends[v].append((math.atan2(q[1] - y, q[0] - x), ref))
    rotations = {v: tuple(ref for _, ref in sorted(lst)) for v, lst in ends.items()}
    return DrawingSpec(tuple(vertices), tuple(recs), tuple(crossings), rotations, dict(vertices))


@dataclass(frozen=True)
class HexagonTemplate:
    """Combinatorics of a hexagon with all nine diagonals.

    Corners ``0..5`` follow the hexagon's face walk (interior on the right).
    ``diagonals`` are corner pairs ``(i, j)``, drawn from ``i`` to ``j``;
    ``crossings[k] = (a, b, orientation)`` indexes into ``diagonals``;
    ``order[a]`` lists crossing indices along diagonal ``a``;
    ``corner_order[c]`` lists the diagonal ends at corner ``c`` counterclockwise,
    starting next to the side towards corner ``c - 1``.
    """

    diagonals: tuple[tuple[int, int], ...]
    crossings: tuple[tuple[int, int, int], ...]
    order: tuple[tuple[int, ...], ...]
    corner_order: tuple[tuple[str, ...], ...]
    points: tuple[Point, ...]


def _corner_points(seed: int) -> list[Point]:
    # clockwise corners; shifting corner 0 breaks the concurrency of the
    # three long diagonals with a fixed chirality, jitter only follows the seed
    rng = random.Random(seed)
    pts = []
    for k in range(6):
        ang = -k * math.pi / 3
        if k == 0:
            ang -= 0.12
        ang += rng.uniform(-1e-3, 1e-3)
        rad = 1.0 + rng.uniform(-1e-3, 1e-3)
        pts.append((rad * math.cos(ang), rad * math.sin(ang)))
    return pts


@lru_cache(maxsize=None)
def hexagon_template(seed: int = 0) -> HexagonTemplate:
    pts = _corner_points(seed)
    diagonals = tuple(sorted((i, j) for i in range(6) for j in range(i + 2, 6) if not (i == 0 and j == 5)))
    hits: list[list[tuple[float, int]]] = [[] for _ in diagonals]
    crossings = []
    for a in range(len(diagonals)):
        for b in range(a + 1, len(diagonals)):
            (i, j), (k, l) = diagonals[a], diagonals[b]
            r = _intersect(pts[i], pts[j], pts[k], pts[l])
            if r is None:
                continue
            da = (pts[j][0] - pts[i][0], pts[j][1] - pts[i][1])
            db = (pts[l][0] - pts[k][0], pts[l][1] - pts[k][1])
            hits[a].append((r[0], len(crossings)))
            hits[b].append((r[1], len(crossings)))
            crossings.append((a, b, 1 if _cross(*da, *db) > 0 else -1))
    if len(crossings) != 15:
        raise BadParameterError(f"seed {seed} gives {len(crossings)} crossings, not in general position")
    order = tuple(tuple(k for _, k in sorted(h)) for h in hits)

    corner_order = []
    for c in range(6):
        x, y = pts[c]
        base = math.atan2(pts[(c - 1) % 6][1] - y, pts[(c - 1) % 6][0] - x)
        last = (math.atan2(pts[(c + 1) % 6][1] - y, pts[(c + 1) % 6][0] - x) - base) % (2 * math.pi)
        ends = []
        for a, (i, j) in enumerate(diagonals):
            if c not in (i, j):
                continue
            other = j if c == i else i
            rel = (math.atan2(pts[other][1] - y, pts[other][0] - x) - base) % (2 * math.pi)
            assert 0 < rel < last
            ends.append((rel, f"{a}{'+' if c == i else '-'}"))
        corner_order.append(tuple(ref for _, ref in sorted(ends)))
    return HexagonTemplate(diagonals, tuple(crossings), order, tuple(corner_order), tuple(pts))


# ---------------------------------------------------------------------------
# triangulation -> hexangulation -> optimal drawing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Triangulation:
    """Straight-line stacked triangulation; ``outer`` is the unbounded triangle."""

    spec: DrawingSpec
    planarization: Planarization
    triangles: tuple[tuple[str, str, str], ...]
    outer: tuple[str, str, str]

    @property
    def map(self) -> CombMap:
        return self.planarization.map

    @property
    def t(self) -> int:
        return len(self.planarization.map.faces)


@dataclass(frozen=True)
class Hexangulation:
    """``hexagons[i]`` holds the six corner darts of face ``i`` in walk order."""

    spec: DrawingSpec
    planarization: Planarization
    hexagons: tuple[tuple[int, ...], ...]
    outer: int

    @property
    def map(self) -> CombMap:
        return self.planarization.map

    @property
    def n(self) -> int:
        return self.spec.n

    def corners(self, i: int) -> tuple[str, ...]:
        return tuple(self.map.origin[d] for d in self.hexagons[i])


def _straight_spec(coords: dict[str, Point], pairs: Iterable[tuple[str, str]], prefix: str) -> DrawingSpec:
    edges = [(f"{prefix}{k + 1}", a, b, ()) for k, (a, b) in enumerate(pairs)]
    return drawing_from_polylines(coords, edges)


def stacked_triangulation(s: int) -> Triangulation:
    """Triangle plus ``s`` stackings, each into the largest bounded face."""
    if s < 0:
        raise BadParameterError("number of stackings must be >= 0")
    coords: dict[str, Point] = {"v1": (0.0, 0.0), "v2": (1.0, 0.0), "v3": (0.5, math.sqrt(3) / 2)}
    inner = [("v1", "v2", "v3")]
    pairs = [("v1", "v2"), ("v2", "v3"), ("v1", "v3")]

    def area(tri: tuple[str, str, str]) -> float:
        (ax, ay), (bx, by), (cx, cy) = (coords[v] for v in tri)
        return abs(_cross(bx - ax, by - ay, cx - ax, cy - ay))

    for k in range(s):
        idx = max(range(len(inner)), key=lambda i: (area(inner[i]), -i))
        a, b, c = inner.pop(idx)
        w = f"v{k + 4}"
        coords[w] = tuple(sum(coords[v][i] for v in (a, b, c)) / 3 for i in range(2))  # type: ignore[assignment]
        inner += [(a, b, w), (b, c, w), (c, a, w)]
        pairs += [(a, w), (b, w), (c, w)]
    spec = _straight_spec(coords, pairs, "t")
    p = planarize(spec)
    return Triangulation(spec, p, tuple(inner), ("v1", "v2", "v3"))


def hexangulate(tri: Triangulation) -> Hexangulation:
    """Subdivide every edge once; every triangle becomes a hexagon."""
    coords = dict(tri.spec.coords)
    pairs = []
    for k, e in enumerate(tri.spec.edges):
        m = f"m{k + 1}"
        (ax, ay), (bx, by) = coords[e.tail], coords[e.head]
        coords[m] = ((ax + bx) / 2, (ay + by) / 2)
        pairs += [(e.tail, m), (m, e.head)]
    spec = _straight_spec(coords, pairs, "p")
    p = planarize(spec)
    hexagons = []
    outer = -1
    outer_set = set(tri.outer)
    for face in p.map.faces:
        start = min(range(len(face)), key=lambda i: _natural_name(p.map.origin[face[i]]))
        hexagons.append(face[start:] + face[:start])
    hexagons.sort(key=lambda h: [_natural_name(p.map.origin[d]) for d in h])
    for i, h in enumerate(hexagons):
        corners = [p.map.origin[d] for d in h]
        if set(corners) & outer_set == outer_set and _signed_area([coords[v] for v in corners]) > 0:
            outer = i
    return Hexangulation(spec, p, tuple(hexagons), outer)


def _natural_name(v: str) -> tuple:
    return (v[0], int(v[1:])) if v[1:].isdigit() else (v, 0)


def _signed_area(pts: Sequence[Point]) -> float:
    return sum(_cross(*pts[i], *pts[(i + 1) % len(pts)]) for i in range(len(pts))) / 2


def add_hexagon_diagonals(
    hexes: Hexangulation, seed: int = 0, only: Iterable[int] | None = None
) -> DrawingSpec:
    """Draw all nine diagonals inside every hexagon (or those in ``only``)."""
    tpl = hexagon_template(seed)
    pl = hexes.planarization
    cmap = pl.map
    chosen = set(range(len(hexes.hexagons)) if only is None else only)

    edges = list(pl.spec.edges)
    crossings: list[CrossingRec] = []
    # dart starting a hexagon corner -> diagonal ends to insert before it
    slot: dict[int, list[str]] = {}
    bends: dict[str, Point] = {}
    coords = hexes.spec.coords
    for hi in sorted(chosen):
        darts = hexes.hexagons[hi]
        corners = [cmap.origin[d] for d in darts]
        dnames = [f"h{hi + 1}_{i}{j}" for i, j in tpl.diagonals]
        xnames = [f"h{hi + 1}_x{k + 1}" for k in range(len(tpl.crossings))]
        for a, (i, j) in enumerate(tpl.diagonals):
            edges.append(EdgeRec(dnames[a], corners[i], corners[j], tuple(xnames[k] for k in tpl.order[a])))
        for k, (a, b, o) in enumerate(tpl.crossings):
            crossings.append(CrossingRec(xnames[k], (dnames[a], dnames[b]), o))
        for c, d in enumerate(darts):
            slot[d] = [dnames[int(ref[:-1])] + ref[-1] for ref in tpl.corner_order[c]]
        if coords:
            pts = [coords[v] for v in corners]
            cx = sum(x for x, _ in pts) / 6
            cy = sum(y for _, y in pts) / 6
            push = -1.6 if hi == hexes.outer else 0.45
            for a, (i, j) in enumerate(tpl.diagonals):
                mx, my = (pts[i][0] + pts[j][0]) / 2, (pts[i][1] + pts[j][1]) / 2
                bends[dnames[a]] = (round(mx + push * (cx - mx), 6), round(my + push * (cy - my), 6))

    rotations = {}
    for v in pl.spec.vertices:
        out: list[str] = []
        for d in cmap.rotations.get(v, ()):
            out.extend(slot.get(d, ()))
            out.append(pl.dart_end(d))
        rotations[v] = tuple(out)
    return DrawingSpec(
        pl.spec.vertices,
        tuple(edges),
        tuple(crossings),
        rotations,
        {v: (round(x, 6), round(y, 6)) for v, (x, y) in coords.items()},
        bends,
    )


def generate_optimal(t: int, seed: int = 0) -> DrawingSpec:
    """Optimal drawing with ``t`` hexagons: ``n = 2t + 2`` and ``|E| = 12t``."""
    if not isinstance(t, int) or t < 2 or t % 2:
        raise BadParameterError(f"t must be an even integer >= 2, got {t!r}")
    return add_hexagon_diagonals(hexangulate(stacked_triangulation((t - 2) // 2)), seed)


def hex1(seed: int = 0) -> DrawingSpec:
    """A single hexagon with its six sides and all nine diagonals."""
    return add_hexagon_diagonals(hexangulate(stacked_triangulation(0)), seed, only=[0])
