import pytest

from fourplanar.drawing import crossing_census, cut_crossings, homotopy_violations, planarize
from fourplanar.errors import BadParameterError
from fourplanar.extremal import (
    add_hexagon_diagonals,
    generate_optimal,
    hex1,
    hexagon_template,
    hexangulate,
    stacked_triangulation,
)
from fourplanar.faces import classify


@pytest.mark.parametrize("s,nv,ne,nf", [(0, 3, 3, 2), (1, 4, 6, 4), (3, 6, 12, 8)])
def test_stacked_triangulation_counts(s, nv, ne, nf):
    tri = stacked_triangulation(s)
    assert (tri.spec.n, tri.spec.m, tri.t) == (nv, ne, nf)
    assert tri.t == 2 + 2 * s


@pytest.mark.parametrize("s,n,m,t", [(0, 6, 6, 2), (1, 10, 12, 4), (3, 18, 24, 8)])
def test_hexangulation_counts(s, n, m, t):
    hx = hexangulate(stacked_triangulation(s))
    assert (hx.n, hx.spec.m, len(hx.hexagons)) == (n, m, t)
    assert all(len(h) == 6 for h in hx.hexagons)


def test_template_has_fifteen_crossings():
    tpl = hexagon_template()
    assert len(tpl.diagonals) == 9 and len(tpl.crossings) == 15
    per = [len(o) for o in tpl.order]
    assert sorted(per) == [3] * 6 + [4] * 3


def test_hex1_fixture():
    p = planarize(hex1())
    assert (p.n, p.m, len(p.spec.crossings)) == (6, 15, 15)


@pytest.mark.parametrize("t", [2, 4, 6, 8, 10])
def test_optimal_family(t):
    p = planarize(generate_optimal(t))
    assert p.n == 2 * t + 2 and p.m == 12 * t == 6 * (p.n - 2)
    assert crossing_census(p).maximum == 4
    assert homotopy_violations(p) == []
    assert cut_crossings(p) == []
    table = classify(p)
    assert len(table) == 25 * t
    assert dict(table.census) == {
        "0-triangle": t,
        "0-pentagon": 3 * t,
        "0-quadrilateral": 3 * t,
        "1-triangle": 12 * t,
        "2-triangle": 6 * t,
    }


@pytest.mark.parametrize("bad", [3, 0, -2, 1, 2.0, "4"])
def test_bad_parameter(bad):
    with pytest.raises(BadParameterError):
        generate_optimal(bad)


def test_seed_keeps_combinatorics():
    a, b = generate_optimal(4, seed=0), generate_optimal(4, seed=5)
    assert a.without_geometry() == b.without_geometry()


def test_generation_is_deterministic():
    assert generate_optimal(6) == generate_optimal(6)


def test_subset_of_hexagons():
    hx = hexangulate(stacked_triangulation(1))
    spec = add_hexagon_diagonals(hx, only=[0, 2])
    assert spec.m == 12 + 18 and len(spec.crossings) == 30
