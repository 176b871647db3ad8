"""Face classification and neighbourhood relations of a planarization.

A face with ``v`` graph-vertex occurrences and ``s`` boundary segments is a
``v-s-gon``; sizes 3, 4 and 5 get the names triangle, quadrilateral and
pentagon ("1-triangle", "0-pentagon", ...).  All counts follow the boundary
walk, so repeated vertices and bridges count twice.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .drawing import Planarization
from .errors import ChainTooLongError, PreconditionFailedError
from .topomap import Diagnostic, NodeKind, natural_key

__all__ = [
    "FaceInfo",
    "FaceTable",
    "WedgeChain",
    "VertexNeighbor",
    "HStarBlock",
    "face_class",
    "classify",
    "i_neighbors",
    "wedge",
    "vertex_neighbors",
    "detect_hstar",
]

_SHAPES = {3: "triangle", 4: "quadrilateral", 5: "pentagon"}
MAX_WEDGE_QUADS = 4


def face_class(vcount: int, size: int) -> str:
    shape = _SHAPES.get(size)
    return f"{vcount}-{shape}" if shape else f"{vcount}-{size}-gon"


@dataclass(frozen=True)
class FaceInfo:
    id: str
    index: int
    boundary: tuple[int, ...]
    size: int
    vcount: int

    @property
    def cls(self) -> str:
        return face_class(self.vcount, self.size)

    def is_(self, vcount: int, size: int) -> bool:
        return self.vcount == vcount and self.size == size


class FaceTable:
    """Faces of a planarization, keyed by a stable id.

    A face's id is the name of its smallest dart (``"<edge>.<segment><+|->"``)
    under natural ordering, so ids survive re-planarizing the same drawing.
    """

    def __init__(self, p: Planarization):
        self.p = p
        cmap = p.map
        self.is_vertex_dart = tuple(cmap.kinds[o] is NodeKind.VERTEX for o in cmap.origin)
        faces = []
        for orbit in cmap.faces:
            dmin = min(orbit, key=lambda d: _dart_sort_key(p, d))
            vcount = sum(self.is_vertex_dart[d] for d in orbit)
            faces.append((cmap.names[dmin], orbit, vcount, _dart_sort_key(p, dmin)))
        faces.sort(key=lambda f: f[3])
        self.faces: tuple[FaceInfo, ...] = tuple(
            FaceInfo(fid, i, orbit, len(orbit), vc) for i, (fid, orbit, vc, _) in enumerate(faces)
        )
        self.by_id = {f.id: f for f in self.faces}
        owner = [0] * len(cmap)
        for f in self.faces:
            for d in f.boundary:
                owner[d] = f.index
        self.owner = tuple(owner)

    def __iter__(self) -> Iterator[FaceInfo]:
        return iter(self.faces)

    def __len__(self) -> int:
        return len(self.faces)

    def __getitem__(self, fid: str) -> FaceInfo:
        return self.by_id[fid]

    def of_dart(self, d: int) -> FaceInfo:
        return self.faces[self.owner[d]]

    def across(self, d: int) -> FaceInfo:
        """Face on the other side of the segment of dart ``d``."""
        return self.faces[self.owner[d ^ 1]]

    def side_i(self, d: int) -> int:
        return self.is_vertex_dart[d] + self.is_vertex_dart[d ^ 1]

    def is_planar_dart(self, d: int) -> bool:
        return len(self.p.segments[self.p.map.labels[d]]) == 1

    @cached_property
    def census(self) -> Counter:
        return Counter(f.cls for f in self.faces)

    def vcount_total(self) -> int:
        return sum(f.vcount for f in self.faces)

    def size_total(self) -> int:
        return sum(f.size for f in self.faces)


def _dart_sort_key(p: Planarization, d: int) -> tuple:
    eid, seg, direction = p.dart_key[d]
    return (natural_key(eid), seg, -direction)


def classify(p: Planarization) -> FaceTable:
    return FaceTable(p)


def i_neighbors(table: FaceTable, fid: str) -> list[tuple[str, int]]:
    """One ``(neighbour id, i)`` per boundary segment, in walk order."""
    return [(table.across(d).id, table.side_i(d)) for d in table[fid].boundary]


@dataclass(frozen=True)
class WedgeChain:
    origin: str
    chain: tuple[str, ...]
    terminal: str


def _zero_side(table: FaceTable, f: FaceInfo) -> int:
    sides = [d for d in f.boundary if table.side_i(d) == 0]
    if len(sides) != 1:
        raise PreconditionFailedError(f"{f.id} has {len(sides)} sides without vertices")
    return sides[0]


def wedge(table: FaceTable, fid: str) -> WedgeChain:
    """Follow 0-quadrilaterals across opposite sides from a 1-triangle."""
    f0 = table[fid]
    if not f0.is_(1, 3):
        raise PreconditionFailedError(f"{fid} is a {f0.cls}, not a 1-triangle")
    cmap = table.p.map
    entry = _zero_side(table, f0) ^ 1
    chain: list[str] = []
    cur = table.of_dart(entry)
    while cur.is_(0, 4):
        chain.append(cur.id)
        if len(chain) > MAX_WEDGE_QUADS:
            raise ChainTooLongError(f"wedge of {fid} runs through more than {MAX_WEDGE_QUADS} 0-quadrilaterals")
        opposite = cmap.phi(cmap.phi(entry))
        entry = opposite ^ 1
        cur = table.of_dart(entry)
    return WedgeChain(fid, tuple(chain), cur.id)


@dataclass(frozen=True)
class VertexNeighbor:
    face: str
    crossing: str
    degenerate: bool = False


def vertex_neighbors(table: FaceTable, fid: str) -> list[VertexNeighbor]:
    """Face in the opposite corner at every crossing corner of ``fid``."""
    cmap = table.p.map
    out = []
    for d in table[fid].boundary:
        if table.is_vertex_dart[d]:
            continue
        other = table.of_dart(cmap.next[cmap.next[d]]).id
        out.append(VertexNeighbor(other, cmap.origin[d], other == fid))
    return out


@dataclass(frozen=True)
class HStarBlock:
    center: str
    pentagons: tuple[str, ...]
    quads: tuple[str, ...]
    one_triangles: tuple[str, ...]
    interior: tuple[str, ...]
    boundary: tuple[int, ...] = field(repr=False)
    boundary_edges: tuple[str, ...] = ()

    @property
    def pattern(self) -> tuple[str, ...]:
        return (self.center, *self.pentagons, *self.quads, *self.one_triangles)

    def is_canonical(self, table: FaceTable) -> bool:
        """Interior is the 19 pattern faces plus six 2-triangles."""
        extra = set(self.interior) - set(self.pattern)
        return len(self.interior) == 25 and len(extra) == 6 and all(table[f].is_(2, 3) for f in extra)


def _match_pattern(table: FaceTable, t: FaceInfo) -> tuple[list[str], list[str], list[str]] | str:
    pents = [table.across(d) for d in t.boundary]
    if not all(f.is_(0, 5) for f in pents):
        return "0-neighbours are not all 0-pentagons"
    quads = [table[vn.face] for vn in vertex_neighbors(table, t.id)]
    if len(quads) != 3 or not all(f.is_(0, 4) for f in quads):
        return "vertex-neighbours are not three 0-quadrilaterals"
    ring = {f.id for f in pents} | {f.id for f in quads}
    if len(ring) != 6:
        return "ring faces are not distinct"
    inner = ring | {t.id}
    tris: list[str] = []
    for r in pents + quads:
        rest = [table.across(d) for d in r.boundary if table.side_i(d) == 0]
        rest = [g for g in rest if g.id not in inner]
        if len(rest) != 2 or not all(g.is_(1, 3) for g in rest):
            return f"remaining 0-neighbours of {r.id} are not two 1-triangles"
        tris += [g.id for g in rest]
    if len(set(tris)) != 12:
        return "the twelve 1-triangles are not distinct"
    return [f.id for f in pents], [f.id for f in quads], tris


def _closure(table: FaceTable, seeds: list[str]) -> tuple[set[int], list[int]] | None:
    """Flood across crossed segments only; ``None`` if the whole sphere is reached."""
    region = {table[f].index for f in seeds}
    stack = list(region)
    while stack:
        fi = stack.pop()
        for d in table.faces[fi].boundary:
            if table.is_planar_dart(d):
                continue
            g = table.owner[d ^ 1]
            if g not in region:
                region.add(g)
                stack.append(g)
    if len(region) == len(table):
        return None
    boundary = [d for fi in sorted(region) for d in table.faces[fi].boundary if table.owner[d ^ 1] not in region]
    return region, boundary


def detect_hstar(table: FaceTable, diagnostics: list[Diagnostic] | None = None) -> list[HStarBlock]:
    """All H* blocks, each closed off by its surrounding crossing-free edges.

    Problems are appended to ``diagnostics`` with rules ``PatternIncomplete``,
    ``OpenBlock`` and ``OverlappingBlocks``.
    """
    diags = diagnostics if diagnostics is not None else []
    blocks: list[HStarBlock] = []
    taken: dict[int, str] = {}
    pending: list[tuple[FaceInfo, str]] = []
    for t in table:
        if not t.is_(0, 3):
            continue
        m = _match_pattern(table, t)
        if isinstance(m, str):
            pending.append((t, m))
            continue
        pents, quads, tris = m
        closed = _closure(table, [t.id, *pents, *quads, *tris])
        if closed is None:
            diags.append(Diagnostic("OpenBlock", t.id, "crossed segments around the pattern reach every face"))
            continue
        region, boundary = closed
        clash = sorted({taken[i] for i in region if i in taken})
        if clash:
            diags.append(Diagnostic("OverlappingBlocks", t.id, f"shares faces with block(s) {', '.join(clash)}"))
            continue
        for i in region:
            taken[i] = t.id
        labels = table.p.map.labels
        blocks.append(
            HStarBlock(
                t.id,
                tuple(pents),
                tuple(quads),
                tuple(tris),
                tuple(table.faces[i].id for i in sorted(region)),
                tuple(boundary),
                tuple(sorted({labels[d] for d in boundary}, key=natural_key)),
            )
        )
    for t, why in pending:
        if t.index not in taken:
            diags.append(Diagnostic("PatternIncomplete", t.id, f"0-triangle outside any H*: {why}"))
    return blocks
