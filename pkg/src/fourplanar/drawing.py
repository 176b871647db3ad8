"""Drawings of multigraphs with crossings and their planarizations.

A drawing is given purely combinatorially: every edge lists the crossings
it passes through (tail to head), every crossing names its two edges and
an orientation bit, and every vertex lists its edge ends counterclockwise.
Edge ends are written ``"<edge>+"`` for the tail end and ``"<edge>-"`` for
the head end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import (
    DanglingReferenceError,
    DisconnectedMapError,
    NonSphereError,
    SelfCrossingError,
)
from .topomap import CombMap, Diagnostic, NodeKind, natural_key, validate_local_structure

__all__ = [
    "EdgeRec",
    "CrossingRec",
    "DrawingSpec",
    "Planarization",
    "CrossingCensus",
    "HomotopyFinding",
    "end_ref",
    "parse_end",
    "check_spec",
    "planarize",
    "crossing_census",
    "homotopy_violations",
    "cut_crossings",
]

K_PLANAR = 4


def end_ref(edge: str, at_tail: bool) -> str:
    return f"{edge}{'+' if at_tail else '-'}"


def parse_end(ref: str) -> tuple[str, bool]:
    """``"e3+"`` -> ``("e3", True)``."""
    if len(ref) < 2 or ref[-1] not in "+-":
        raise ValueError(f"bad edge-end reference {ref!r}")
    return ref[:-1], ref[-1] == "+"


@dataclass(frozen=True)
class EdgeRec:
    id: str
    tail: str
    head: str
    crossings: tuple[str, ...] = ()

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class CrossingRec:
    """``orientation=+1``: counterclockwise order is first-toward-tail,
    second-toward-tail, first-toward-head, second-toward-head."""

    id: str
    edges: tuple[str, str]
    orientation: int = 1


@dataclass(frozen=True, eq=True)
class DrawingSpec:
    vertices: tuple[str, ...]
    edges: tuple[EdgeRec, ...]
    crossings: tuple[CrossingRec, ...]
    rotations: Mapping[str, tuple[str, ...]]
    # optional geometry, only known for generated drawings
    coords: Mapping[str, tuple[float, float]] = field(default_factory=dict)
    bends: Mapping[str, tuple[float, float]] = field(default_factory=dict)

    __hash__ = None  # type: ignore[assignment]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge(self, eid: str) -> EdgeRec:
        return self.edge_map[eid]

    @property
    def edge_map(self) -> dict[str, EdgeRec]:
        return {e.id: e for e in self.edges}

    @property
    def crossing_map(self) -> dict[str, CrossingRec]:
        return {c.id: c for c in self.crossings}

    def without_geometry(self) -> "DrawingSpec":
        return DrawingSpec(self.vertices, self.edges, self.crossings, self.rotations)


def check_spec(spec: DrawingSpec) -> list[Diagnostic]:
    """Internal consistency of the record form (references, rotations)."""
    out: list[Diagnostic] = []
    verts = set(spec.vertices)
    if len(verts) != len(spec.vertices):
        out.append(Diagnostic("DuplicateId", "vertices", "vertex ids are not unique"))
    edges = {}
    for e in spec.edges:
        if e.id in edges:
            out.append(Diagnostic("DuplicateId", e.id, "edge id used twice"))
        edges[e.id] = e
        for end in (e.tail, e.head):
            if end not in verts:
                out.append(Diagnostic("DanglingReference", e.id, f"endpoint {end} is not a vertex"))
    crossings = {}
    for c in spec.crossings:
        if c.id in crossings or c.id in verts:
            out.append(Diagnostic("DuplicateId", c.id, "crossing id collides with another id"))
        crossings[c.id] = c
        if c.orientation not in (1, -1):
            out.append(Diagnostic("BadOrientation", c.id, f"orientation {c.orientation} not in +1/-1"))
        if c.edges[0] == c.edges[1]:
            out.append(Diagnostic("SelfCrossing", c.id, f"edge {c.edges[0]} crosses itself"))
        for eid in c.edges:
            if eid not in edges:
                out.append(Diagnostic("DanglingReference", c.id, f"crossing names unknown edge {eid}"))

    seen_on: dict[str, list[str]] = {}
    for e in spec.edges:
        for x in e.crossings:
            if x not in crossings:
                out.append(Diagnostic("DanglingReference", e.id, f"unknown crossing {x}"))
                continue
            seen_on.setdefault(x, []).append(e.id)
    for cid, c in crossings.items():
        on = seen_on.get(cid, [])
        if sorted(on) != sorted(c.edges):
            if len(on) != len(set(on)):
                out.append(Diagnostic("SelfCrossing", cid, f"crossing listed twice on edge {on[0]}"))
            else:
                out.append(
                    Diagnostic("CrossingMismatch", cid, f"crossing declared on {list(c.edges)} but listed on {on}")
                )

    ends_needed: dict[str, str] = {}
    for e in spec.edges:
        ends_needed[end_ref(e.id, True)] = e.tail
        ends_needed[end_ref(e.id, False)] = e.head
    placed: dict[str, str] = {}
    for v, rot in spec.rotations.items():
        if v not in verts:
            out.append(Diagnostic("DanglingReference", v, "rotation for unknown vertex"))
            continue
        for ref in rot:
            try:
                parse_end(ref)
            except ValueError:
                out.append(Diagnostic("BadEndRef", v, f"malformed edge end {ref!r}"))
                continue
            if ref not in ends_needed:
                out.append(Diagnostic("DanglingReference", v, f"rotation names unknown edge end {ref}"))
            elif ref in placed:
                out.append(Diagnostic("RotationDuplicate", v, f"edge end {ref} placed twice"))
            elif ends_needed[ref] != v:
                out.append(Diagnostic("RotationMismatch", v, f"edge end {ref} belongs to {ends_needed[ref]}"))
            placed[ref] = v
    for ref in sorted(set(ends_needed) - set(placed), key=natural_key):
        out.append(Diagnostic("RotationMissing", ends_needed[ref], f"edge end {ref} missing from rotation"))
    return out


@dataclass(frozen=True)
class Planarization:
    """The plane map of a drawing plus lookups back into the drawing.

    ``segments[e]`` lists the forward darts of edge ``e``'s segments in
    tail-to-head order; dart ``d`` and ``d ^ 1`` are twins.
    """

    spec: DrawingSpec
    map: CombMap
    segments: Mapping[str, tuple[int, ...]]
    crossing_at: Mapping[tuple[str, int], str]
    dart_key: tuple[tuple[str, int, int], ...]

    __hash__ = None  # type: ignore[assignment]

    def edge_of(self, d: int) -> str:
        return self.map.labels[d]

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def m(self) -> int:
        return self.spec.m

    def is_vertex(self, node: str) -> bool:
        return self.map.kinds[node] is NodeKind.VERTEX

    def dart_by_key(self, key: tuple[str, int, int]) -> int:
        eid, seg, direction = key
        d = self.segments[eid][seg]
        return d if direction > 0 else d ^ 1

    def end_dart(self, ref: str) -> int:
        """Dart leaving the vertex at edge end ``ref``."""
        eid, tail = parse_end(ref)
        segs = self.segments[eid]
        return segs[0] if tail else segs[-1] ^ 1

    def dart_end(self, d: int) -> str:
        """Inverse of :meth:`end_dart` for darts leaving a graph vertex."""
        eid, seg, direction = self.dart_key[d]
        if direction > 0:
            assert seg == 0
            return end_ref(eid, True)
        assert seg == len(self.segments[eid]) - 1
        return end_ref(eid, False)

    def is_planar_edge(self, eid: str) -> bool:
        return len(self.segments[eid]) == 1


def planarize(spec: DrawingSpec, *, allow_disconnected: bool = False) -> Planarization:
    """Build the planarization and check it is a sphere embedding.

    Raises :class:`DanglingReferenceError`, :class:`SelfCrossingError`,
    :class:`NonSphereError` or :class:`DisconnectedMapError`.
    """
    problems = check_spec(spec)
    if problems:
        selfx = [p for p in problems if p.rule == "SelfCrossing"]
        if selfx:
            raise SelfCrossingError("; ".join(map(str, selfx)))
        raise DanglingReferenceError("; ".join(map(str, problems)))

    origin: list[str] = []
    labels: list[str] = []
    names: list[str] = []
    keys: list[tuple[str, int, int]] = []
    segments: dict[str, tuple[int, ...]] = {}
    crossing_at: dict[tuple[str, int], str] = {}
    # darts at each crossing: edge -> (toward tail, toward head)
    at_crossing: dict[str, dict[str, tuple[int, int]]] = {}

    for e in spec.edges:
        path = [e.tail, *e.crossings, e.head]
        segs = []
        for j in range(len(path) - 1):
            d = len(origin)
            origin += [path[j], path[j + 1]]
            labels += [e.id, e.id]
            names += [f"{e.id}.{j}+", f"{e.id}.{j}-"]
            keys += [(e.id, j, 1), (e.id, j, -1)]
            segs.append(d)
        segments[e.id] = tuple(segs)
        for i, x in enumerate(e.crossings):
            crossing_at[(e.id, i)] = x
            at_crossing.setdefault(x, {})[e.id] = (segs[i] ^ 1, segs[i + 1])

    rotations: dict[str, list[int]] = {}
    for v, rot in spec.rotations.items():
        darts = []
        for ref in rot:
            eid, tail = parse_end(ref)
            darts.append(segments[eid][0] if tail else segments[eid][-1] ^ 1)
        if darts:
            rotations[v] = darts
    for c in spec.crossings:
        a, b = c.edges
        a_tail, a_head = at_crossing[c.id][a]
        b_tail, b_head = at_crossing[c.id][b]
        if c.orientation > 0:
            rotations[c.id] = [a_tail, b_tail, a_head, b_head]
        else:
            rotations[c.id] = [a_tail, b_head, a_head, b_tail]

    twin = [d ^ 1 for d in range(len(origin))]
    kinds = {v: NodeKind.VERTEX for v in spec.vertices}
    kinds.update({c.id: NodeKind.CROSSING for c in spec.crossings})
    cmap = CombMap.from_rotations(rotations, twin, kinds, labels, names)
    local = validate_local_structure(cmap)
    if local:
        raise NonSphereError("; ".join(map(str, local)))

    comps = cmap.components()
    isolated = sum(1 for v in kinds if v not in cmap.rotations)
    chi = cmap.n_nodes - cmap.n_edges + len(cmap.faces) + isolated
    if len(comps) > 1 and not allow_disconnected:
        raise DisconnectedMapError(f"drawing has {len(comps)} connected components")
    if chi != 2 * len(comps):
        raise NonSphereError(
            f"V-E+F = {cmap.n_nodes}-{cmap.n_edges}+{len(cmap.faces) + isolated} = {chi}, "
            f"expected {2 * len(comps)}: rotations/orientations do not describe a plane drawing"
        )
    return Planarization(spec, cmap, segments, crossing_at, tuple(keys))


@dataclass(frozen=True)
class CrossingCensus:
    counts: Mapping[str, int]
    maximum: int
    k: int = K_PLANAR

    @property
    def is_k_planar(self) -> bool:
        return self.maximum <= self.k

    @property
    def is_4_planar(self) -> bool:
        return self.maximum <= 4

    def offenders(self) -> list[str]:
        return [e for e, c in self.counts.items() if c > self.k]


def crossing_census(p: Planarization, k: int = K_PLANAR) -> CrossingCensus:
    counts = {}
    for eid, segs in p.segments.items():
        counts[eid] = sum(1 for d in segs[1:] if not p.is_vertex(p.map.origin[d]))
    return CrossingCensus(counts, max(counts.values(), default=0), k)


@dataclass(frozen=True)
class HomotopyFinding:
    """``status`` is ``"homotopic"`` or ``"not_checked"``."""

    edges: tuple[str, ...]
    status: str
    detail: str = ""

    def as_diagnostic(self) -> Diagnostic:
        rule = "HomotopicEdges" if self.status == "homotopic" else "NotChecked"
        return Diagnostic(rule, ",".join(self.edges), self.detail)


def _regions(p: Planarization, cut_edges: set[str]) -> list[int]:
    """Label faces by the region they fall in once ``cut_edges`` are drawn as walls."""
    cmap = p.map
    nf = len(cmap.faces)
    parent = list(range(nf))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for d in range(0, len(cmap), 2):
        if cmap.labels[d] in cut_edges:
            continue
        a, b = find(cmap.face_of[d]), find(cmap.face_of[d ^ 1])
        if a != b:
            parent[a] = b
    return [find(f) for f in range(nf)]


def _vertex_regions(p: Planarization, region: list[int], skip: set[str]) -> dict[int, set[str]]:
    """Region -> graph vertices lying strictly inside it."""
    cmap = p.map
    out: dict[int, set[str]] = {}
    for v, darts in cmap.rotations.items():
        if v in skip or not p.is_vertex(v):
            continue
        out.setdefault(region[cmap.face_of[darts[0]]], set()).add(v)
    return out


def _edges_cross(p: Planarization, a: str, b: str) -> bool:
    for x in p.spec.edge(a).crossings:
        if b in p.spec.crossing_map[x].edges:
            return True
    return False


def homotopy_violations(p: Planarization, only: set[str] | None = None) -> list[HomotopyFinding]:
    """Loops and parallel pairs whose closed curve has an empty side.

    With ``only``, just the loops and pairs involving those edges are examined.
    """
    spec = p.spec
    cmap = p.map
    out: list[HomotopyFinding] = []
    edges = sorted(spec.edges, key=lambda e: natural_key(e.id))
    cross_pairs: set[frozenset[str]] = set()
    for c in spec.crossings:
        cross_pairs.add(frozenset(c.edges))

    for e in edges:
        if not e.is_loop or (only is not None and e.id not in only):
            continue
        region = _regions(p, {e.id})
        sides = {region[cmap.face_of[d]] for d in p.segments[e.id]} | {
            region[cmap.face_of[d ^ 1]] for d in p.segments[e.id]
        }
        inside = _vertex_regions(p, region, {e.tail})
        empty = [r for r in sides if not inside.get(r)]
        if len(sides) < 2 or empty:
            out.append(HomotopyFinding((e.id,), "homotopic", f"loop at {e.tail} has a side without vertices"))

    groups: dict[tuple[str, str], list[EdgeRec]] = {}
    for e in edges:
        key = tuple(sorted((e.tail, e.head), key=natural_key))
        groups.setdefault(key, []).append(e)  # type: ignore[arg-type]
    for (u, v), group in sorted(groups.items()):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                a, b = group[i], group[j]
                if only is not None and a.id not in only and b.id not in only:
                    continue
                pair = (a.id, b.id)
                if frozenset(pair) in cross_pairs:
                    out.append(HomotopyFinding(pair, "not_checked", "parallel arcs cross each other"))
                    continue
                region = _regions(p, {a.id, b.id})
                inside = _vertex_regions(p, region, {u, v})
                if u != v:
                    sides = {region[f] for f in range(len(cmap.faces))}
                    if len(sides) < 2 or any(not inside.get(r) for r in sides):
                        out.append(HomotopyFinding(pair, "homotopic", f"parallel {u}-{v} arcs bound an empty region"))
                else:
                    # two loops at one vertex: a region touched by both must hold a vertex
                    touch_a = {region[cmap.face_of[d]] for s in p.segments[a.id] for d in (s, s ^ 1)}
                    touch_b = {region[cmap.face_of[d]] for s in p.segments[b.id] for d in (s, s ^ 1)}
                    if any(not inside.get(r) for r in touch_a & touch_b):
                        out.append(HomotopyFinding(pair, "homotopic", f"loops at {u} bound an empty region"))
    return out


def cut_crossings(p: Planarization) -> list[str]:
    """Crossing nodes whose removal disconnects the planarization."""
    cmap = p.map
    adj: dict[str, list[str]] = {v: [] for v in cmap.kinds}
    for d in range(len(cmap)):
        a, b = cmap.origin[d], cmap.origin[d ^ 1]
        if a != b:
            adj[a].append(b)
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    cut: set[str] = set()
    counter = 0
    for root in sorted(adj, key=natural_key):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        children = 0
        stack = [(root, None, iter(adj[root]))]
        while stack:
            node, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, node, iter(adj[w])))
                    advanced = True
                    break
                if w != parent:
                    low[node] = min(low[node], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[node])
                if parent == root:
                    children += 1
                elif low[node] >= disc[parent]:
                    cut.add(parent)
        if children > 1:
            cut.add(root)
    return sorted((x for x in cut if cmap.kinds[x] is NodeKind.CROSSING), key=natural_key)
