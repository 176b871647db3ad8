"""Local rewrite moves on drawings and a normalizer for the extremal potential.

Every move edits the record form of a drawing (edges, crossing lists,
rotations) and re-planarizes, so each result is revalidated from scratch.
Moves are pure: they return a new :class:`Planarization` or raise, leaving
the input untouched.  The potential ``(-|E|, -#H*, #crossings)`` is compared
lexicographically; every accepted move makes it strictly smaller.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .drawing import (
    CrossingRec,
    DrawingSpec,
    EdgeRec,
    Planarization,
    crossing_census,
    end_ref,
    homotopy_violations,
    parse_end,
    planarize,
)
from .errors import (
    AlreadyInBlockError,
    FourPlanarError,
    HomotopyCreatedError,
    IterationCapExceededError,
    NoEligiblePairError,
    NotA0TriangleError,
    ParseError,
    PreconditionFailedError,
)
from .extremal import hexagon_template
from .faces import FaceTable, classify, detect_hstar
from .topomap import natural_key

__all__ = [
    "MoveRecord",
    "NormalizeResult",
    "potential",
    "fill_face",
    "swap_bigon",
    "reroute_v2",
    "reroute_v1",
    "replace_with_hstar",
    "normalize",
    "apply_move",
    "replay",
    "moves_to_json",
    "moves_from_json",
]

KINDS = ("Fill", "SwapBigon", "RerouteV2", "RerouteV1", "HStarReplace")


# ---------------------------------------------------------------------------
# editable record form
# ---------------------------------------------------------------------------


class _Edit:
    """Mutable copy of a drawing's records; geometry is dropped."""

    def __init__(self, spec: DrawingSpec):
        self.vertices = list(spec.vertices)
        self.edges: dict[str, list[Any]] = {e.id: [e.tail, e.head, list(e.crossings)] for e in spec.edges}
        self.crossings: dict[str, list[Any]] = {c.id: [tuple(c.edges), c.orientation] for c in spec.crossings}
        self.rot: dict[str, list[str]] = {v: list(spec.rotations.get(v, ())) for v in spec.vertices}
        self._used = set(self.vertices) | set(self.edges) | set(self.crossings)

    def fresh(self, prefix: str) -> str:
        k = 1
        while f"{prefix}{k}" in self._used:
            k += 1
        name = f"{prefix}{k}"
        self._used.add(name)
        return name

    def vertex_of(self, ref: str) -> str:
        eid, tail = parse_end(ref)
        return self.edges[eid][0 if tail else 1]

    def insert_before(self, anchor: str, tokens: Iterable[str]) -> None:
        rot = self.rot[self.vertex_of(anchor)]
        i = rot.index(anchor)
        rot[i:i] = list(tokens)

    def replace_token(self, ref: str, tokens: Iterable[str]) -> None:
        rot = self.rot[self.vertex_of(ref)]
        i = rot.index(ref)
        rot[i : i + 1] = list(tokens)

    def remove_token(self, ref: str) -> None:
        self.rot[self.vertex_of(ref)].remove(ref)

    def delete_crossing(self, cid: str) -> None:
        pair, _ = self.crossings.pop(cid)
        for eid in pair:
            if eid in self.edges:
                self.edges[eid][2].remove(cid)

    def delete_edge(self, eid: str) -> None:
        for cid in list(self.edges[eid][2]):
            self.delete_crossing(cid)
        for ref in (end_ref(eid, True), end_ref(eid, False)):
            rot = self.rot[self.vertex_of(ref)]
            if ref in rot:
                rot.remove(ref)
        del self.edges[eid]

    def add_edge(self, eid: str, tail: str, head: str, crossings: Iterable[str] = ()) -> None:
        self.edges[eid] = [tail, head, list(crossings)]
        self._used.add(eid)

    def spec(self) -> DrawingSpec:
        return DrawingSpec(
            tuple(self.vertices),
            tuple(EdgeRec(e, t, h, tuple(xs)) for e, (t, h, xs) in self.edges.items()),
            tuple(CrossingRec(c, pair, o) for c, (pair, o) in self.crossings.items()),
            {v: tuple(r) for v, r in self.rot.items()},
        )

    def planarize(self) -> Planarization:
        try:
            return planarize(self.spec())
        except FourPlanarError as exc:
            raise PreconditionFailedError(f"edited drawing is invalid: {exc}") from exc


# ---------------------------------------------------------------------------
# potential and bookkeeping
# ---------------------------------------------------------------------------


def n_blocks(p: Planarization) -> int:
    return len(detect_hstar(classify(p)))


def potential(p: Planarization) -> tuple[int, int, int]:
    """``(-|E|, -#H*, #crossings)``; smaller is better."""
    return (-p.m, -n_blocks(p), len(p.spec.crossings))


def _homotopic(p: Planarization, only: set[str] | None = None) -> set[tuple[str, ...]]:
    return {f.edges for f in homotopy_violations(p, only) if f.status == "homotopic"}


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    target: str
    params: dict[str, Any] = field(default_factory=dict)
    delta: tuple[int, int, int] = (0, 0, 0)

    def as_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "target": self.target, "params": self.params, "delta": list(self.delta)}


# ---------------------------------------------------------------------------
# Fill
# ---------------------------------------------------------------------------


def _fill_pairs(table: FaceTable, fid: str) -> list[tuple[int, int]]:
    f = table[fid]
    pos = [i for i, d in enumerate(f.boundary) if table.is_vertex_dart[d]]
    s = f.size
    return [(i, j) for a, i in enumerate(pos) for j in pos[a + 1 :] if 2 <= j - i <= s - 2]


def fill_face(p: Planarization, fid: str, pair: tuple[int, int] | None = None) -> Planarization:
    """Add a crossing-free edge through face ``fid`` between two of its vertex corners.

    ``pair`` indexes the face's boundary walk; by default the first pair that
    creates no homotopic edge is used.
    """
    return _fill(p, fid, pair)[0]


def _fill(p: Planarization, fid: str, pair: Any = None) -> tuple[Planarization, dict[str, Any]]:
    table = classify(p)
    f = table[fid]
    candidates = _fill_pairs(table, fid) if f.vcount >= 2 and f.size >= 4 else []
    if pair is not None:
        if tuple(pair) not in candidates:
            raise NoEligiblePairError(f"{fid}: positions {pair} are not an eligible pair")
        candidates = [tuple(pair)]
    if not candidates:
        raise NoEligiblePairError(f"{fid} ({f.cls}) has no two vertex corners to join")
    for i, j in candidates:
        ed = _Edit(p.spec)
        di, dj = f.boundary[i], f.boundary[j]
        eid = ed.fresh("a")
        ed.add_edge(eid, p.map.origin[di], p.map.origin[dj])
        ed.insert_before(p.dart_end(di), [end_ref(eid, True)])
        ed.insert_before(p.dart_end(dj), [end_ref(eid, False)])
        q = ed.planarize()
        if not _homotopic(q, {eid}):
            return q, {"pair": [i, j]}
    raise HomotopyCreatedError(f"{fid}: every new edge would be homotopic to an existing one")


# ---------------------------------------------------------------------------
# SwapBigon
# ---------------------------------------------------------------------------


def swap_bigon(p: Planarization, fid: str) -> Planarization:
    """Exchange the two arcs bounding a 0- or 1-bigon, removing its crossings."""
    table = classify(p)
    f = table[fid]
    if f.size != 2 or f.vcount > 1:
        raise PreconditionFailedError(f"{fid} is a {f.cls}, not a 0- or 1-bigon")
    b0, b1 = f.boundary
    a, b = p.edge_of(b0), p.edge_of(b1)
    if a == b:
        raise PreconditionFailedError(f"{fid} is bounded twice by {a}")
    ed = _Edit(p.spec)
    if f.vcount == 0:
        for d in (b0, b1):
            ed.delete_crossing(p.map.origin[d])
    else:
        if not table.is_vertex_dart[b0]:
            b0, b1 = b1, b0
        x = p.map.origin[b1]
        ta, tb = p.dart_end(b0), p.dart_end(b1 ^ 1)
        rot = ed.rot[p.map.origin[b0]]
        ia, ib = rot.index(ta), rot.index(tb)
        rot[ia], rot[ib] = tb, ta
        ed.delete_crossing(x)
    return ed.planarize()


def _bigons(p: Planarization) -> list[str]:
    table = classify(p)
    return [f.id for f in table if f.size == 2 and f.vcount <= 1]


def _repair_bigons(p: Planarization) -> Planarization:
    while True:
        found = _bigons(p)
        if not found:
            return p
        p = swap_bigon(p, found[0])


# ---------------------------------------------------------------------------
# reroutes
# ---------------------------------------------------------------------------


def _node_index(p: Planarization, d: int, at_origin: bool) -> int:
    """Index of an end of dart ``d`` on its edge's path ``[tail, *crossings, head]``."""
    _, seg, direction = p.dart_key[d]
    lo, hi = seg, seg + 1
    if direction < 0:
        lo, hi = hi, lo
    return lo if at_origin else hi


def _reroute(p: Planarization, r: int, x_at_origin: bool, anchor: str) -> Planarization:
    """Cut the edge of ``r`` at crossing ``x`` (an end of ``r``), drop the part
    containing ``r``, and route the rest from ``x`` to the vertex of ``anchor``,
    entering its rotation just before ``anchor``."""
    eid = p.edge_of(r)
    if parse_end(anchor)[0] == eid:
        raise PreconditionFailedError(f"{eid} would be rerouted onto its own end")
    px = _node_index(p, r, x_at_origin)
    other = _node_index(p, r, not x_at_origin)
    ed = _Edit(p.spec)
    tail, head, xs = ed.edges[eid]
    if other > px:
        drop = xs[px:]
        moved = end_ref(eid, False)
    else:
        drop = xs[: px - 1]
        moved = end_ref(eid, True)
    for cid in drop:
        ed.delete_crossing(cid)
    ed.remove_token(moved)
    target = ed.vertex_of(anchor)
    if moved.endswith("-"):
        ed.edges[eid][1] = target
    else:
        ed.edges[eid][0] = target
    ed.insert_before(anchor, [moved])
    return ed.planarize()


def _accept_reroute(
    p: Planarization, candidates: list[tuple[int, bool, str]], what: str, offset: int
) -> tuple[Planarization, dict[str, Any]]:
    before = _homotopic(p)
    blocks = n_blocks(p)
    errors = []
    for variant, (r, at_origin, anchor) in enumerate(candidates):
        try:
            q = _repair_bigons(_reroute(p, r, at_origin, anchor))
        except PreconditionFailedError as exc:
            errors.append(str(exc))
            continue
        if len(q.spec.crossings) >= len(p.spec.crossings):
            errors.append("crossings did not decrease")
            continue
        if _homotopic(q) - before:
            errors.append("a homotopic pair would remain")
            continue
        if n_blocks(q) < blocks:
            errors.append("an H* block would be destroyed")
            continue
        return q, {"variant": offset + variant}
    raise HomotopyCreatedError(f"{what}: no valid reroute ({'; '.join(errors) or 'no candidates'})")


def _pick(candidates: list, variant: int | None) -> tuple[list, int]:
    if variant is None:
        return candidates, 0
    if not 0 <= variant < len(candidates):
        raise PreconditionFailedError(f"variant {variant} out of range")
    return [candidates[variant]], variant


def reroute_v2(p: Planarization, fid: str, variant: int | None = None) -> Planarization:
    return _reroute_v2(p, fid, variant)[0]


def _reroute_v2(p: Planarization, fid: str, variant: int | None = None) -> tuple[Planarization, dict[str, Any]]:
    """Face with two vertices joined by a planar side: shortcut the edge two steps away."""
    table = classify(p)
    f = table[fid]
    if f.vcount != 2 or f.size < 4:
        raise PreconditionFailedError(f"{fid} is a {f.cls}; needs two vertices and at least four sides")
    cmap = p.map
    prev = {cmap.phi(d): d for d in f.boundary}
    cands = []
    for d1 in f.boundary:
        if table.side_i(d1) != 2 or not table.is_planar_dart(d1):
            continue
        d2 = cmap.phi(d1)
        d0 = prev[d1]
        cands.append((cmap.phi(d2), True, p.dart_end(d1)))
        cands.append((prev[d0], False, p.dart_end(d2)))
    if not cands:
        raise PreconditionFailedError(f"{fid} has no planar side between its two vertices")
    chosen, offset = _pick(cands, variant)
    return _accept_reroute(p, chosen, fid, offset)


def reroute_v1(p: Planarization, fid: str, variant: int | None = None) -> Planarization:
    return _reroute_v1(p, fid, variant)[0]


def _reroute_v1(p: Planarization, fid: str, variant: int | None = None) -> tuple[Planarization, dict[str, Any]]:
    """Face with one vertex and at least five sides: shortcut a neighbouring edge to the vertex."""
    table = classify(p)
    f = table[fid]
    if f.vcount != 1 or f.size < 5:
        raise PreconditionFailedError(f"{fid} is a {f.cls}; needs one vertex and at least five sides")
    cmap = p.map
    prev = {cmap.phi(d): d for d in f.boundary}
    d1 = next(d for d in f.boundary if table.is_vertex_dart[d])
    d0 = prev[d1]
    anchor = p.dart_end(d1)
    cands = [(cmap.phi(d1), True, anchor), (prev[d0], False, anchor)]
    chosen, offset = _pick(cands, variant)
    return _accept_reroute(p, chosen, fid, offset)


# ---------------------------------------------------------------------------
# H* replacement
# ---------------------------------------------------------------------------


def _tree_leaf_cycle(ed: _Edit, E: list[str]) -> list[str]:
    """Leaf end refs of a spanning tree on the arcs of ``E``, in face-walk order."""
    eset = set(E)
    ports: dict[str, list[tuple[str, bool]]] = {}  # crossing -> ccw (edge, toward_head)
    for cid, ((a, b), o) in ed.crossings.items():
        if a in eset and b in eset:
            ports[cid] = [(a, False), (b, False), (a, True), (b, True)] if o > 0 else [
                (a, False),
                (b, True),
                (a, True),
                (b, False),
            ]
    parent: dict[str, str] = {}

    def find(u: str) -> str:
        while parent.setdefault(u, u) != u:
            u = parent[u]
        return u

    # half-edge (u, v, edge, toward_head_from_u)
    adj: dict[str, dict[tuple[str, bool], str]] = {}
    for e in sorted(E, key=natural_key):
        tail, head, xs = ed.edges[e]
        path = [end_ref(e, True), *[x for x in xs if x in ports], end_ref(e, False)]
        for u, v in zip(path, path[1:]):
            ru, rv = find(u), find(v)
            if ru == rv:
                continue
            parent[ru] = rv
            adj.setdefault(u, {})[(e, True)] = v
            adj.setdefault(v, {})[(e, False)] = u

    def ccw(node: str) -> list[tuple[str, bool]]:
        if node in ports:
            return [pt for pt in ports[node] if pt in adj[node]]
        return list(adj[node])

    start = end_ref(E[0], True)
    (port,) = adj[start]
    u, v, pt = start, adj[start][port], port
    leaves = []
    for _ in range(4 * len(adj) + 4):
        back = (pt[0], not pt[1])
        rot = ccw(v)
        nxt = rot[(rot.index(back) + 1) % len(rot)]
        if v not in ports:
            leaves.append(v)
        u, v, pt = v, adj[v][nxt], nxt
        if u == start and pt == port:
            break
    return leaves


def _replace_hstar(p: Planarization, fid: str) -> tuple[Planarization, dict[str, Any]]:
    table = classify(p)
    f = table[fid]
    if not f.is_(0, 3):
        raise NotA0TriangleError(f"{fid} is a {f.cls}, not a 0-triangle")
    blocks = detect_hstar(table)
    if any(fid in b.interior for b in blocks):
        raise AlreadyInBlockError(f"{fid} already lies in the H* block of {next(b.center for b in blocks if fid in b.interior)}")
    E = [p.edge_of(d) for d in f.boundary]
    if len(set(E)) != 3:
        raise PreconditionFailedError(f"{fid} is not bounded by three distinct edges")
    ed = _Edit(p.spec)
    # the six ends are occurrences; their vertices may repeat
    ends = [end_ref(e, t) for e in E for t in (True, False)]
    eset = set(E)
    crossers = sorted(
        {x for e in E for c in ed.edges[e][2] for x in ed.crossings[c][0]} - eset, key=natural_key
    )
    for c in crossers:
        ed.delete_edge(c)
    leaves = _tree_leaf_cycle(ed, E)
    if sorted(leaves) != sorted(ends):
        raise PreconditionFailedError(f"tree walk around {fid} does not visit all six ends")
    corners = leaves[::-1]
    verts = [ed.vertex_of(r) for r in corners]

    tpl = hexagon_template(0)
    sides = [ed.fresh("s") for _ in range(6)]
    dnames = [ed.fresh("d") for _ in tpl.diagonals]
    xnames = [ed.fresh("y") for _ in tpl.crossings]
    fans = []
    for k in range(6):
        diag = [dnames[int(ref[:-1])] + ref[-1] for ref in tpl.corner_order[k]]
        fans.append([end_ref(sides[k - 1], False), *diag, end_ref(sides[k], True)])
    for k, ref in enumerate(corners):
        ed.replace_token(ref, fans[k])
    for e in E:
        for c in list(ed.edges[e][2]):
            ed.delete_crossing(c)
        del ed.edges[e]
    for k in range(6):
        ed.add_edge(sides[k], verts[k], verts[(k + 1) % 6])
    for a, (i, j) in enumerate(tpl.diagonals):
        ed.add_edge(dnames[a], verts[i], verts[j], [xnames[c] for c in tpl.order[a]])
    for c, (a, b, o) in enumerate(tpl.crossings):
        ed.crossings[xnames[c]] = [(dnames[a], dnames[b]), o]

    q = ed.planarize()
    dropped = []
    for s in sides:
        if _homotopic(q, {s}):
            ed.delete_edge(s)
            dropped.append(s)
            q = ed.planarize()
    if _homotopic(q, set(dnames)):
        raise HomotopyCreatedError(f"{fid}: new diagonal homotopic to an existing edge: {sorted(_homotopic(q, set(dnames)))}")
    if q.m < p.m:
        raise PreconditionFailedError(f"{fid}: replacement would lose edges ({p.m} -> {q.m})")
    if not crossing_census(q).is_4_planar:
        raise PreconditionFailedError(f"{fid}: replacement is not 4-planar")
    if n_blocks(q) <= len(blocks):
        raise PreconditionFailedError(f"{fid}: replacement does not create a new H* block")
    return q, {"deleted": sorted(E + crossers, key=natural_key), "corners": verts, "dropped_sides": dropped}


def replace_with_hstar(p: Planarization, fid: str) -> Planarization:
    """Replace the edges through a bare 0-triangle and their crossers by an H* pattern."""
    return _replace_hstar(p, fid)[0]


# ---------------------------------------------------------------------------
# normalizer
# ---------------------------------------------------------------------------


def _run(kind: str, p: Planarization, target: str, params: dict[str, Any] | None) -> tuple[Planarization, dict]:
    params = params or {}
    if kind == "Fill":
        return _fill(p, target, params.get("pair"))
    if kind == "SwapBigon":
        return swap_bigon(p, target), {}
    if kind == "RerouteV2":
        return _reroute_v2(p, target, params.get("variant"))
    if kind == "RerouteV1":
        return _reroute_v1(p, target, params.get("variant"))
    if kind == "HStarReplace":
        return _replace_hstar(p, target)
    raise ParseError(f"unknown move kind {kind!r}")


def _candidates(p: Planarization) -> list[tuple[int, str, str]]:
    """(priority, kind, face id) for every face where some move might apply."""
    table = classify(p)
    in_block = {f for b in detect_hstar(table) for f in b.interior}
    out = []
    for f in table:
        if f.vcount >= 2 and f.size >= 4:
            out.append((0, "Fill", f.id))
        if f.is_(0, 3) and f.id not in in_block:
            out.append((1, "HStarReplace", f.id))
        if f.size == 2 and f.vcount <= 1:
            out.append((2, "SwapBigon", f.id))
        if f.vcount == 2 and f.size >= 4:
            out.append((2, "RerouteV2", f.id))
        if f.vcount == 1 and f.size >= 5:
            out.append((2, "RerouteV1", f.id))
    rank = {f.id: i for i, f in enumerate(table)}
    out.sort(key=lambda c: (c[0], rank[c[2]], KINDS.index(c[1])))
    return out


def apply_move(p: Planarization, move: MoveRecord) -> Planarization:
    """Re-run a logged move; its parameters pin down every choice."""
    return _run(move.kind, p, move.target, move.params)[0]


@dataclass(frozen=True)
class NormalizeResult:
    planarization: Planarization
    moves: tuple[MoveRecord, ...]
    potentials: tuple[tuple[int, int, int], ...]

    @property
    def spec(self) -> DrawingSpec:
        return self.planarization.spec


def default_cap(p: Planarization) -> int:
    return 50 * (p.n + p.m + len(p.spec.crossings))


def normalize(
    p: Planarization,
    cap: int | None = None,
    on_move: Callable[[MoveRecord], None] | None = None,
) -> NormalizeResult:
    """Apply the highest-priority improving move until none applies."""
    cap = default_cap(p) if cap is None else cap
    pot = potential(p)
    moves: list[MoveRecord] = []
    pots = [pot]
    while True:
        applied = False
        for _, kind, fid in _candidates(p):
            try:
                q, params = _run(kind, p, fid, None)
            except FourPlanarError:
                continue
            new = potential(q)
            if new >= pot:
                continue
            if len(moves) >= cap:
                raise IterationCapExceededError(f"normalize stopped after {cap} moves")
            delta = (q.m - p.m, pot[1] - new[1], new[2] - pot[2])
            rec = MoveRecord(kind, fid, params, delta)
            moves.append(rec)
            pots.append(new)
            if on_move:
                on_move(rec)
            p, pot = q, new
            applied = True
            break
        if not applied:
            return NormalizeResult(p, tuple(moves), tuple(pots))


def replay(p: Planarization, moves: Iterable[MoveRecord]) -> Planarization:
    for m in moves:
        p = apply_move(p, m)
    return p


def moves_to_json(moves: Iterable[MoveRecord]) -> str:
    return json.dumps({"moves": [m.as_dict() for m in moves]}, indent=2) + "\n"


def moves_from_json(text: str) -> list[MoveRecord]:
    try:
        data = json.loads(text)
        return [
            MoveRecord(m["kind"], m["target"], dict(m.get("params", {})), tuple(m.get("delta", (0, 0, 0))))
            for m in data["moves"]
        ]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad move log: {exc}") from exc
