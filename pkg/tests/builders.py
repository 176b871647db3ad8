"""Fixture builders shared by the unit and acceptance tests."""

from __future__ import annotations

import random

from fourplanar.drawing import DrawingSpec, Planarization, crossing_census, homotopy_violations, planarize
from fourplanar.errors import FourPlanarError
from fourplanar.extremal import _corner_points, drawing_from_polylines, generate_optimal, hex1
from fourplanar.rewrite import _Edit

# one "PASS/FAIL criterion k: ..." line per acceptance check, printed at session end
ACCEPTANCE: list[str] = []


def triangle() -> DrawingSpec:
    v = {"a": (0.0, 0.0), "b": (1.0, 0.0), "c": (0.0, 1.0)}
    return drawing_from_polylines(v, [("e1", "a", "b", ()), ("e2", "b", "c", ()), ("e3", "c", "a", ())])


def single_crossing(extra: bool = True) -> DrawingSpec:
    """Edges uv and xy crossing once; ``extra`` adds planar sides ux and vy."""
    v = {"u": (0.0, 0.0), "v": (2.0, 2.0), "x": (0.0, 2.0), "y": (2.0, 0.0)}
    edges = [("e1", "u", "v", ()), ("e2", "x", "y", ())]
    if extra:
        edges += [("e3", "u", "x", ()), ("e4", "v", "y", ())]
    return drawing_from_polylines(v, edges)


def hexagon_points(seed: int = 0) -> dict[str, tuple[float, float]]:
    return {f"c{k}": p for k, p in enumerate(_corner_points(seed))}


def hexagon(diagonals, seed: int = 0, sides: bool = True) -> DrawingSpec:
    """Straight-line hexagon ``c0..c5`` with the given corner-pair diagonals."""
    v = hexagon_points(seed)
    edges = [(f"s{k}", f"c{k}", f"c{(k + 1) % 6}", ()) for k in range(6)] if sides else []
    edges += [(f"d{i}{j}", f"c{i}", f"c{j}", ()) for i, j in diagonals]
    return drawing_from_polylines(v, edges)


LONG = [(0, 3), (1, 4), (2, 5)]


def lens(jitter: float = 0.0) -> DrawingSpec:
    """Square whose top edge dips twice through the bottom edge: one empty 0-bigon."""
    v = {"a": (0.0, 0.0), "b": (4.0, 0.0), "c": (0.0, 2.0), "d": (4.0, 2.0)}
    edges = [
        ("e1", "a", "b", ()),
        ("e2", "c", "d", [(1.0 + jitter, -1.0), (3.0 - jitter, -1.0 - jitter)]),
        ("e3", "a", "c", ()),
        ("e4", "b", "d", ()),
    ]
    return drawing_from_polylines(v, edges)


def one_bigon(jitter: float = 0.0) -> DrawingSpec:
    """Two edges leaving v and crossing once right away: one 1-bigon."""
    v = {"v": (0.0, 0.0), "p": (2.0, 1.0), "q": (2.0, -1.0)}
    edges = [
        ("e1", "v", "p", [(1.0, -0.5 - jitter)]),
        ("e2", "v", "q", [(1.0, 0.5 + jitter)]),
        ("e3", "p", "q", ()),
    ]
    return drawing_from_polylines(v, edges)


def delete_edges(spec: DrawingSpec, ids) -> DrawingSpec:
    ed = _Edit(spec)
    for e in ids:
        ed.delete_edge(e)
    return ed.spec()


def is_clean(p: Planarization) -> bool:
    """4-planar and free of homotopic pairs."""
    return crossing_census(p).is_4_planar and not any(f.status == "homotopic" for f in homotopy_violations(p))


def hexagon_family(seed: int) -> DrawingSpec:
    """Hexagon with its three long diagonals plus up to three bent short ones."""
    rng = random.Random(seed)
    pts = _corner_points(seed)
    v = {f"c{k}": pts[k] for k in range(6)}
    edges = [(f"s{k}", f"c{k}", f"c{(k + 1) % 6}", ()) for k in range(6)]
    edges += [(f"l{k}", f"c{k}", f"c{k + 3}", ()) for k in range(3)]
    for k in range(rng.randint(0, 3)):
        i = rng.randrange(6)
        j = (i + 2) % 6
        mx, my = (pts[i][0] + pts[j][0]) / 2, (pts[i][1] + pts[j][1]) / 2
        s = rng.uniform(0.4, 2.2)
        edges.append((f"b{k}", f"c{i}", f"c{j}", [(mx * s, my * s)]))
    return drawing_from_polylines(v, edges)


def opt_deletion(seed: int, t_choices=(2, 4), max_delete: int = 6) -> DrawingSpec:
    """Generated optimal drawing with a few random diagonals removed."""
    rng = random.Random(seed)
    base = generate_optimal(rng.choice(t_choices))
    diags = [e.id for e in base.edges if e.id.startswith("h")]
    return delete_edges(base, rng.sample(diags, rng.randint(1, max_delete)))


def random_polyline(seed: int) -> DrawingSpec:
    rng = random.Random(seed)
    n = rng.randint(4, 6)
    v = {f"v{i}": (rng.uniform(0, 10), rng.uniform(0, 10)) for i in range(n)}
    edges = []
    for k in range(rng.randint(n, 2 * n)):
        a, b = rng.sample(sorted(v), 2)
        edges.append((f"e{k}", a, b, [(rng.uniform(0, 10), rng.uniform(0, 10))]))
    return drawing_from_polylines(v, edges)


def _valid(spec: DrawingSpec) -> Planarization | None:
    try:
        p = planarize(spec)
    except FourPlanarError:
        return None
    return p if is_clean(p) else None


def rewrite_corpus() -> list[tuple[str, Planarization]]:
    """Drawings with bigons, fillable faces and bare 0-triangles."""
    out = []
    for j in range(6):
        out.append((f"lens{j}", planarize(lens(0.05 * j))))
        out.append((f"onebigon{j}", planarize(one_bigon(0.05 * j))))
    out.append(("hex1", planarize(hex1())))
    out.append(("long-diagonals", planarize(hexagon(LONG))))
    seed = 0
    while sum(name.startswith("hexfam") for name, _ in out) < 20:
        p = _valid(hexagon_family(seed))
        if p is not None:
            out.append((f"hexfam{seed}", p))
        seed += 1
    seed = 0
    while sum(name.startswith("optdel") for name, _ in out) < 20:
        p = _valid(opt_deletion(seed))
        if p is not None:
            out.append((f"optdel{seed}", p))
        seed += 1
    return out


def fuzz_corpus(count: int = 120) -> list[tuple[str, Planarization]]:
    """Validity-preserving mutations of generated drawings plus random polylines."""
    out: list[tuple[str, Planarization]] = []
    seed = 0
    while len(out) < count * 2 // 3:
        try:
            p = planarize(opt_deletion(seed, t_choices=(2, 4, 6), max_delete=12))
            out.append((f"optdel{seed}", p))
        except FourPlanarError:
            pass
        seed += 1
    seed = 0
    while len(out) < count:
        try:
            out.append((f"poly{seed}", planarize(random_polyline(seed))))
        except FourPlanarError:
            pass
        seed += 1
    return out
