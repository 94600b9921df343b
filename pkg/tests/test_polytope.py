from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toricstab.polytope import MAX_DIM, DegeneratePolytopeError, RationalPolytope

from conftest import CORPUS, model
from oracles import brute_lattice_points, float_hull, reflexive_polygon_rays, shoelace

F = Fraction
SQUARE = [(-1, -1), (1, -1), (1, 1), (-1, 1)]

point2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


def full_dimensional(pts):
    (x0, y0), rest = pts[0], pts[1:]
    return any((x1 - x0) * (y2 - y0) != (x2 - x0) * (y1 - y0) for x1, y1 in rest for x2, y2 in rest)


polygons = st.lists(point2, min_size=3, max_size=8, unique=True).filter(full_dimensional)

unimodular = st.sampled_from(
    [((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)), ((2, 1), (1, 1)), ((1, -2), (0, -1)), ((-1, 0), (3, 1))]
)


@pytest.mark.parametrize("stem", ["p2", "p1xp1", "bl1p2", "bl2p2", "bl3p2", "p113"])
def test_polygon_volume_and_barycenter_match_shoelace(stem):
    P = model(stem).polytope
    area, centroid = shoelace(P.vertices)
    assert P.volume == area
    assert P.barycenter == centroid


@given(polygons)
def test_random_polygons_match_shoelace(pts):
    P = RationalPolytope(pts)
    area, centroid = shoelace(P.vertices)
    assert P.volume == area
    assert P.barycenter == centroid
    assert P.contains(P.barycenter, strict=True)


@given(polygons, unimodular, point2)
def test_unimodular_invariance(pts, g, shift):
    P = RationalPolytope(pts)
    Q = P.transform(g, shift)
    assert Q.volume == P.volume
    moved = tuple(sum(F(r) * c for r, c in zip(row, P.barycenter)) + s for row, s in zip(g, shift))
    assert Q.barycenter == moved
    assert len(Q.lattice_points(2)) == len(P.lattice_points(2))
    assert sorted(Q.boundary_measures) == sorted(P.boundary_measures)


@pytest.mark.parametrize("stem", ["p2", "bl2p2", "p113", "p1xp1xp1", "p3"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_lattice_points_match_box_enumeration(stem, m):
    P = model(stem).polytope
    assert sorted(P.lattice_points(m)) == sorted(brute_lattice_points(P.vertices, m))


@pytest.mark.parametrize("stem", ["p2", "bl1p2", "p113"])
def test_lattice_counts_up_to_ten(stem):
    P = model(stem).polytope
    counts = [len(P.lattice_points(m)) for m in range(1, 11)]
    assert counts == [len(brute_lattice_points(P.vertices, m)) for m in range(1, 11)]
    assert counts == sorted(counts)


def test_ehrhart_counts_of_p2():
    P = model("p2").polytope
    assert [len(P.lattice_points(m)) for m in range(1, 6)] == [10, 28, 55, 91, 136]


@pytest.mark.parametrize("stem", ["p1xp1xp1", "p3"])
def test_volume_in_dimension_three_matches_qhull(stem):
    P = model(stem).polytope
    vol, _ = float_hull(P.vertices)
    assert float(P.volume) == pytest.approx(vol, rel=1e-12)


def test_known_three_dimensional_values():
    assert model("p1xp1xp1").polytope.volume == 8
    assert model("p3").polytope.volume == F(32, 3)
    assert model("p3").polytope.barycenter == (0, 0, 0)


@pytest.mark.parametrize("stem", ["p2", "p1xp1", "bl1p2", "bl2p2", "bl3p2", "p1xp1xp1", "p3"])
def test_boundary_measure_of_reflexive_polytope(stem):
    # for a reflexive polytope the cone over each facet has height 1
    P = model(stem).polytope
    assert sum(P.boundary_measures) == P.dim * P.volume


@pytest.mark.parametrize("stem", ["p2", "bl1p2", "bl2p2", "p113"])
def test_facet_normals_match_boundary_walk(stem):
    P = model(stem).polytope
    assert sorted(n for n, _ in P.facets) == reflexive_polygon_rays(P.vertices)


def test_interior_points_are_discarded():
    P = RationalPolytope(SQUARE + [(0, 0), (1, 0), (F(1, 2), F(1, 3))])
    assert len(P.vertices) == 4


def test_from_inequalities_round_trip():
    P = RationalPolytope(SQUARE)
    Q = RationalPolytope.from_inequalities([n for n, _ in P.facets], [o for _, o in P.facets])
    assert Q == P
    assert Q.facets == P.facets


def test_redundant_inequalities_are_dropped():
    Q = RationalPolytope.from_inequalities([(1, 0), (0, 1), (-1, -1), (2, 2)], [1, 1, 1, 5])
    assert len(Q.facets) == 3
    assert Q.volume == F(9, 2)


@pytest.mark.parametrize(
    "normals, offsets",
    [
        ([(1, 0), (0, 1)], [1, 1]),
        ([(1, 0), (0, 1), (1, 1), (1, -1)], [1, 1, 1, 5]),
    ],
)
def test_unbounded_region_is_rejected(normals, offsets):
    with pytest.raises(DegeneratePolytopeError):
        RationalPolytope.from_inequalities(normals, offsets)


def test_degenerate_and_oversized_inputs():
    with pytest.raises(DegeneratePolytopeError):
        RationalPolytope([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(ValueError):
        RationalPolytope.from_json({"dim": MAX_DIM + 1, "vertices": [[0] * (MAX_DIM + 1)]})
    with pytest.raises(ValueError):
        RationalPolytope.from_json({"dim": 2, "vertices": [[0, 0, 0]]})


def test_rational_vertices_and_ell0():
    P = model("p113").polytope
    assert P.ell0 == 3
    assert P.volume == F(25, 6)
    assert P.barycenter == (F(2, 3), F(-4, 9))


def test_json_round_trip():
    P = model("p113").polytope
    assert RationalPolytope.from_json(P.to_json()) == P
    assert (CORPUS / "p113.json").exists()


def test_support_function():
    P = model("p2").polytope
    value, where = P.support_min((1, 0))
    assert value == -1 and len(where) == 2
    assert P.support_max((1, 1)) == 1
