from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from toricstab.filtration import ToricFiltration
from toricstab.model import ModelError, ToricFanoModel
from toricstab.polytope import RationalPolytope

from conftest import DEL_PEZZO, model
from oracles import shoelace

F = Fraction

rational = st.fractions(min_value=-3, max_value=3, max_denominator=6)
vec2 = st.tuples(rational, rational)
nonzero2 = vec2.filter(any)
positive = st.fractions(min_value=F(1, 5), max_value=5, max_denominator=5)
stems = st.sampled_from(DEL_PEZZO)


def oracle_delta(P, radius=3):
    """``min A/S`` over every nonzero integer vector in a box."""
    _, bc = shoelace(P.vertices)
    best = None
    for xi in product(range(-radius, radius + 1), repeat=2):
        if not any(xi):
            continue
        A = -min(v[0] * xi[0] + v[1] * xi[1] for v in P.vertices)
        S = bc[0] * xi[0] + bc[1] * xi[1] + A
        best = A / S if best is None else min(best, A / S)
    return best


# frozen from the box oracle above
DERIVED_DELTA = {
    "p2": F(1),
    "p1xp1": F(1),
    "bl1p2": F(6, 7),
    "bl2p2": F(21, 25),
    "bl3p2": F(1),
    "p113": F(3, 5),
}


@pytest.mark.parametrize("stem", sorted(DERIVED_DELTA))
def test_delta_matches_box_oracle(stem):
    m = model(stem)
    assert oracle_delta(m.polytope) == DERIVED_DELTA[stem]
    assert m.delta_toric == DERIVED_DELTA[stem]
    w = m.delta_witness
    assert m.log_discrepancy(w) / m.s_invariant(w) == m.delta_toric


def test_three_dimensional_delta():
    assert model("p3").delta_toric == 1
    assert model("p1xp1xp1").delta_toric == 1


@pytest.mark.parametrize("stem", DEL_PEZZO)
def test_log_discrepancy_is_one_on_rays(stem):
    m = model(stem)
    assert all(m.log_discrepancy(v) == 1 for v in m.rays)


@given(stems, nonzero2, positive)
def test_valuation_invariants_are_homogeneous(stem, xi, c):
    m = model(stem)
    scaled = tuple(c * x for x in xi)
    assert m.log_discrepancy(scaled) == c * m.log_discrepancy(xi)
    assert m.s_invariant(scaled) == c * m.s_invariant(xi)
    assert m.s_invariant(xi) > 0


@given(stems, vec2, vec2)
def test_beta_twist_law(stem, zeta, xi):
    m = model(stem)
    moved = tuple(a + b for a, b in zip(zeta, xi))
    assert m.beta(moved) == m.beta(zeta) - m.futaki(xi)


@given(stems, vec2, vec2, vec2)
def test_theta_cocycle(stem, zeta, xi1, xi2):
    m = model(stem)
    both = tuple(a + b for a, b in zip(xi1, xi2))
    moved = tuple(a + b for a, b in zip(zeta, xi2))
    assert m.theta(both, zeta) == m.theta(xi1, moved) + m.theta(xi2, zeta)


@given(stems, nonzero2)
def test_sandwich_for_valuations(stem, zeta):
    m = model(stem)
    S = m.s_invariant(zeta)
    J = ToricFiltration.of_valuation(m, zeta).jna
    assert J == m.jna_of_valuation(zeta)
    assert S / m.dim <= J <= m.dim * S


@pytest.mark.parametrize("stem", DEL_PEZZO + ("p113",))
@pytest.mark.parametrize("level", [4, 16])
def test_s_invariant_against_lattice_average(stem, level):
    m = model(stem)
    for v in m.rays:
        assert abs(m.s_invariant_at_level(v, level) - m.s_invariant(v)) <= F(2, level)


def test_futaki_is_barycenter():
    m = model("bl1p2")
    assert m.futaki_on_basis == (F(1, 12), F(1, 12))
    assert not m.futaki_vanishes
    assert model("bl3p2").futaki_vanishes


def test_rejects_non_anticanonical_polytopes():
    with pytest.raises(ModelError):
        ToricFanoModel(RationalPolytope([(-2, -2), (2, -2), (2, 2), (-2, 2)]))
    with pytest.raises(ModelError):
        ToricFanoModel(RationalPolytope([(0, 0), (1, 0), (0, 1)]))


def test_grid_is_cached():
    m = model("p2")
    assert m.grid(2) is m.grid(2)
    assert len(m.grid(2)) == 28
