import pytest

from builders import hexagon, hexagon_points, single_crossing, triangle
from fourplanar.drawing import (
    CrossingRec,
    DrawingSpec,
    EdgeRec,
    check_spec,
    crossing_census,
    cut_crossings,
    homotopy_violations,
    planarize,
)
from fourplanar.errors import DanglingReferenceError, DisconnectedMapError, NonSphereError, SelfCrossingError
from fourplanar.extremal import drawing_from_polylines, generate_optimal, hex1


def test_triangle_planarization():
    p = planarize(triangle())
    assert (p.map.n_nodes, p.map.n_edges, len(p.map.faces)) == (3, 3, 2)


def test_single_crossing_counts():
    p = planarize(single_crossing())
    assert (p.map.n_nodes, p.map.n_edges, len(p.map.faces)) == (5, 6, 3)
    bare = planarize(single_crossing(extra=False))
    assert (bare.map.n_nodes, bare.map.n_edges, len(bare.map.faces)) == (5, 4, 1)


def test_hex1_counts():
    p = planarize(hex1())
    assert (p.map.n_nodes, p.map.n_edges, len(p.map.faces)) == (21, 45, 26)


def test_hex1_crossings_per_edge():
    census = crossing_census(planarize(hex1()))
    for eid, c in census.counts.items():
        if eid.startswith("p"):
            assert c == 0
        else:
            i, j = int(eid[-2]), int(eid[-1])
            assert c == (4 if j - i == 3 else 3), eid
    assert census.maximum == 4 and census.is_4_planar


def test_hex1_matches_straight_line_oracle():
    """Generator's stamped template equals a fresh geometric read-off."""
    gen = planarize(hex1())
    oracle = planarize(hexagon([(i, j) for i in range(6) for j in range(i + 2, 6) if (i, j) != (0, 5)]))
    assert gen.map.n_nodes == oracle.map.n_nodes
    assert sorted(len(f) for f in gen.map.faces) == sorted(len(f) for f in oracle.map.faces)


def test_crossing_order_along_diagonals():
    diags = [(i, j) for i in range(6) for j in range(i + 2, 6) if (i, j) != (0, 5)]
    spec = hexagon(diags)
    xmap = spec.crossing_map

    def partners(eid):
        return [next(e for e in xmap[x].edges if e != eid) for x in spec.edge(eid).crossings]

    # short diagonal from c0 meets the three diagonals out of c1, farthest target first
    assert partners("d02") == ["d15", "d14", "d13"]
    # long diagonal from c0 meets c1c5 first and c2c4 last
    p03 = partners("d03")
    assert len(p03) == 4 and p03[0] == "d15" and p03[-1] == "d24"


def test_triangle_census_all_zero():
    assert crossing_census(planarize(triangle())).maximum == 0


def test_opt2_max_four():
    assert crossing_census(planarize(generate_optimal(2))).maximum == 4


def test_two_disjoint_triangles_rejected():
    v = {"a": (0, 0), "b": (1, 0), "c": (0, 1), "x": (5, 0), "y": (6, 0), "z": (5, 1)}
    e = [("e1", "a", "b", ()), ("e2", "b", "c", ()), ("e3", "c", "a", ())]
    e += [("f1", "x", "y", ()), ("f2", "y", "z", ()), ("f3", "z", "x", ())]
    with pytest.raises(DisconnectedMapError):
        planarize(drawing_from_polylines(v, e))
    assert planarize(drawing_from_polylines(v, e), allow_disconnected=True).map.n_nodes == 6


def test_self_crossing_record_rejected():
    spec = DrawingSpec(
        ("a", "b"),
        (EdgeRec("e1", "a", "b", ("x1", "x1")),),
        (CrossingRec("x1", ("e1", "e1"), 1),),
        {"a": ("e1+",), "b": ("e1-",)},
    )
    with pytest.raises(SelfCrossingError):
        planarize(spec)


def test_dangling_reference_rejected():
    spec = DrawingSpec(("a", "b"), (EdgeRec("e1", "a", "zz"),), (), {"a": ("e1+",), "b": ()})
    assert any(d.rule == "DanglingReference" for d in check_spec(spec))
    with pytest.raises(DanglingReferenceError):
        planarize(spec)


def test_wrong_orientation_is_not_a_sphere():
    spec = hex1()
    x, *rest = spec.crossings
    flipped = DrawingSpec(spec.vertices, spec.edges, (CrossingRec(x.id, x.edges, -x.orientation), *rest), spec.rotations)
    with pytest.raises(NonSphereError):
        planarize(flipped)


def test_homotopic_parallel_pair_reported():
    v = {"u": (0, 0), "w": (4, 0), "z": (2, 3)}
    e = [("e1", "u", "w", [(2, 0.5)]), ("e2", "u", "w", [(2, -0.5)]), ("e3", "u", "z", ()), ("e4", "z", "w", ())]
    found = homotopy_violations(planarize(drawing_from_polylines(v, e)))
    assert [(f.edges, f.status) for f in found] == [(("e1", "e2"), "homotopic")]


def test_parallel_pair_around_vertex_is_legal():
    v = {"u": (0, 0), "w": (4, 0), "z": (2, 1), "y": (2, -3)}
    e = [("e1", "u", "w", [(2, 2)]), ("e2", "u", "w", [(2, -1)]), ("e3", "u", "z", ()), ("e4", "w", "y", ())]
    assert homotopy_violations(planarize(drawing_from_polylines(v, e))) == []


def test_opt2_short_diagonals_not_homotopic():
    p = planarize(generate_optimal(2))
    assert [f for f in homotopy_violations(p) if f.status == "homotopic"] == []


def test_loop_enclosing_vertex_is_legal():
    v = {"a": (0, 0), "b": (2, 0), "c": (-3, 0)}
    e = [("l1", "a", "a", [(1, 1), (3, 0), (1, -1)]), ("e1", "a", "b", ()), ("e2", "a", "c", ())]
    assert homotopy_violations(planarize(drawing_from_polylines(v, e))) == []


def test_empty_loop_is_homotopic():
    v = {"a": (0, 0), "b": (2, 0)}
    e = [("l1", "a", "a", [(-1, 1), (-1, -1)]), ("e1", "a", "b", ())]
    found = homotopy_violations(planarize(drawing_from_polylines(v, e)))
    assert [f.edges for f in found] == [("l1",)]


def two_hexagons_joined_by_x():
    """Two copies of HEX1 far apart, linked by two edges crossing once."""
    diags = [(i, j) for i in range(6) for j in range(i + 2, 6) if (i, j) != (0, 5)]
    pts = list(hexagon_points().values())
    v, edges = {}, []
    for side, dx in (("L", -3.0), ("R", 3.0)):
        for k, (x, y) in enumerate(pts):
            v[f"{side}{k}"] = (x + dx, y)
        edges += [(f"{side}s{k}", f"{side}{k}", f"{side}{(k + 1) % 6}", ()) for k in range(6)]
        edges += [(f"{side}d{i}{j}", f"{side}{i}", f"{side}{j}", ()) for i, j in diags]
    left = sorted((k for k in range(6) if pts[k][0] > 0.2), key=lambda k: pts[k][1])
    right = sorted((k for k in range(6) if pts[k][0] < -0.2), key=lambda k: pts[k][1])
    edges.append(("j1", f"L{left[-1]}", f"R{right[0]}", ()))
    edges.append(("j2", f"L{left[0]}", f"R{right[-1]}", ()))
    return drawing_from_polylines(v, edges)


def brute_force_cut_crossings(p):
    cmap = p.map
    out = []
    for x in cmap.kinds:
        if p.is_vertex(x):
            continue
        adj = {}
        for d in range(len(cmap)):
            a, b = cmap.origin[d], cmap.origin[d ^ 1]
            if x in (a, b):
                continue
            adj.setdefault(a, set()).add(b)
        nodes = [n for n in cmap.kinds if n != x]
        seen, stack = {nodes[0]}, [nodes[0]]
        while stack:
            for w in adj.get(stack.pop(), ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) < len(nodes):
            out.append(x)
    return sorted(out)


def test_cut_crossing_gadget():
    p = planarize(two_hexagons_joined_by_x())
    found = cut_crossings(p)
    assert sorted(found) == brute_force_cut_crossings(p)
    joint = [c.id for c in p.spec.crossings if set(c.edges) == {"j1", "j2"}]
    assert found == joint and len(joint) == 1


def test_no_cut_crossings_in_opt4_or_triangle():
    assert cut_crossings(planarize(generate_optimal(4))) == []
    assert cut_crossings(planarize(triangle())) == []
