import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricstab.envelope import EnvelopeError, concave_envelope_integral
from toricstab.plfunction import PLFunction, random_pl

from conftest import model
from oracles import concave_envelope_lp, pl_integral_2d

F = Fraction


def p2_mesh(k, n):
    """Triangles of the ``1/n`` grid refining ``k P^2``; every triangle of
    the lattice tiling with slope -1 diagonals lies inside the dilate."""
    tris = []
    lo, top = -k * n, k * n
    for i in range(lo, 2 * top + 1):
        for j in range(lo, 2 * top + 1):
            for tri in (((i, j), (i + 1, j), (i, j + 1)), ((i + 1, j), (i + 1, j + 1), (i, j + 1))):
                if all(x >= lo and y >= lo and x + y <= top for x, y in tri):
                    tris.append(tuple((F(x, n), F(y, n)) for x, y in tri))
    return tris


@settings(max_examples=8)
@given(st.integers(0, 10**6))
def test_integral_between_quadrature_bounds(seed):
    # a concave function lies above its linear interpolant and, on each
    # triangle, below the tangent plane at the centroid
    rng = random.Random(seed)
    P = model("p2").polytope
    pts = P.lattice_points(1)
    heights = [F(rng.randint(-6, 6), 2) for _ in pts]
    exact = concave_envelope_integral(pts, heights, P.volume)
    lower = upper = 0.0
    cache = {}

    def env(q):
        if q not in cache:
            cache[q] = concave_envelope_lp(pts, heights, q)
        return cache[q]

    for tri in p2_mesh(1, 3):
        a = abs(float((tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1]) - (tri[2][0] - tri[0][0]) * (tri[1][1] - tri[0][1]))) / 2
        lower += a * sum(env(v) for v in tri) / 3
        c = tuple(sum(v[i] for v in tri) / 3 for i in range(2))
        upper += a * env(c)
    assert sum(1 for _ in p2_mesh(1, 3)) == 81
    assert lower - 1e-7 <= float(exact) <= upper + 1e-7


GRID_CONCAVE = [
    [((1, 0), 0), ((-1, 0), 0)],
    [((1, 0), 0), ((0, 1), 0)],
    [((1, 0), 0), ((-1, 0), 0), ((0, 1), 0)],
]


@pytest.mark.parametrize("pieces", GRID_CONCAVE)
def test_envelope_of_concave_grid_function_is_its_integral(pieces):
    # breakpoints on the integer lattice leave the envelope equal to f
    P = model("p1xp1").polytope
    f = PLFunction.min_of(P, pieces)
    assert all(x.denominator == 1 for v in f.vertices for x in v)
    pts = P.lattice_points(1)
    heights = [f(a) for a in pts]
    assert concave_envelope_integral(pts, heights, P.volume) == pl_integral_2d(P.vertices, f.pieces, "min")


def test_affine_heights():
    P = model("p2").polytope
    pts = P.lattice_points(2)
    value = concave_envelope_integral(pts, [3 * a[0] - a[1] + 1 for a in pts], 4 * P.volume)
    assert value == 4 * P.volume


def test_envelope_dominates_sample_integral():
    P = model("bl1p2").polytope
    rng = random.Random(2)
    f = random_pl(P, rng, kind="min")
    k = 8
    pts = P.lattice_points(k)
    heights = [k * f(tuple(F(x, k) for x in a)) for a in pts]
    value = concave_envelope_integral(pts, heights, P.volume * k ** 2) / k ** 3
    assert value <= f.integral
    assert f.integral - value <= F(2, k) * (f.max_value - f.min_value + 1) * P.volume


def test_one_dimensional_hull():
    pts = [(0,), (1,), (2,), (3,)]
    assert concave_envelope_integral(pts, [0, 5, 1, 0], 3) == F(15, 2)
    with pytest.raises(EnvelopeError):
        concave_envelope_integral(pts, [0, 0, 0, 0], 4)


def test_wrong_domain_volume_is_rejected():
    P = model("p2").polytope
    pts = P.lattice_points(1)
    with pytest.raises(EnvelopeError):
        concave_envelope_integral(pts, [0] * len(pts), P.volume + 1)
