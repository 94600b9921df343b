import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricstab.filtration import ToricFiltration
from toricstab.jnorm import (
    audit_certificate,
    jna_of_twist,
    jnat,
    jnat_grid,
    properness_certificate,
)
from toricstab.plfunction import PLFunction, random_pl

from conftest import DEL_PEZZO, model
from oracles import twist_grid_min

F = Fraction
stems = st.sampled_from(DEL_PEZZO)
seeds = st.integers(0, 10**6)
rational = st.fractions(min_value=-2, max_value=2, max_denominator=4)
vec2 = st.tuples(rational, rational)


def random_filtration(stem, seed):
    rng = random.Random(seed)
    m = model(stem)
    f = random_pl(m.polytope, rng, kind=rng.choice(["min", "max"]), pieces=rng.randint(2, 4))
    return ToricFiltration(m, f)


@given(stems, vec2, rational)
def test_products_have_zero_reduced_norm(stem, xi, c):
    res = jnat(ToricFiltration.product(model(stem), xi, c))
    assert res.minimum == 0 and res.is_product
    assert res.argmin == tuple(F(x) for x in xi)
    assert res.face_dim == 0


def test_coordinate_function_on_p2():
    res = jnat(ToricFiltration(model("p2"), PLFunction.affine(model("p2").polytope, (1, 0))))
    assert (res.minimum, res.argmin) == (0, (1, 0))


@given(stems, vec2.filter(any))
def test_valuation_filtrations_are_products(stem, zeta):
    res = jnat(ToricFiltration.of_valuation(model(stem), zeta))
    assert res.minimum == 0
    assert res.argmin == tuple(F(z) for z in zeta)


def test_known_minimum_on_p1xp1():
    # frozen from the quarter-step grid oracle
    mod = model("p1xp1")
    filt = ToricFiltration(mod, PLFunction.max_of(mod.polytope, [((0, 0), 0), ((1, 0), 0)]))
    value, where = twist_grid_min(lambda xi: jna_of_twist(filt, xi), 2)
    assert (value, where) == (F(1, 4), (F(1, 2), 0))
    res = jnat(filt)
    assert (res.minimum, res.argmin) == (F(1, 4), (F(1, 2), 0))
    assert filt.jna == F(3, 4)


@settings(max_examples=20)
@given(stems, seeds)
def test_grid_never_beats_lp(stem, seed):
    filt = random_filtration(stem, seed)
    res = jnat(filt)
    grid_value, where = jnat_grid(filt, step=F(1, 8), radius=3)
    assert grid_value >= res.minimum
    assert jna_of_twist(filt, where) == grid_value
    assert jna_of_twist(filt, res.argmin) == res.minimum
    assert res.minimum >= 0


@settings(max_examples=20)
@given(stems, seeds, vec2)
def test_reduced_norm_ignores_pre_twist(stem, seed, xi):
    filt = random_filtration(stem, seed)
    base = jnat(filt)
    moved = jnat(filt.twist(xi))
    assert moved.minimum == base.minimum
    assert jna_of_twist(filt.twist(xi), tuple(a - b for a, b in zip(base.argmin, xi))) == base.minimum


@settings(max_examples=20)
@given(stems, seeds, vec2)
def test_twist_objective_matches_twisted_filtration(stem, seed, xi):
    filt = random_filtration(stem, seed)
    assert jna_of_twist(filt, xi) == filt.twist(xi).jna


@settings(max_examples=15)
@given(stems, seeds)
def test_properness_certificate(stem, seed):
    filt = random_filtration(stem, seed)
    cert = properness_certificate(filt)
    assert cert.theta > 0
    assert audit_certificate(filt, cert, samples=50, seed=seed) == []


def test_certificate_theta_values():
    for stem in ("p2", "p1xp1"):
        filt = ToricFiltration.trivial(model(stem))
        assert properness_certificate(filt).theta == 1
    cert = properness_certificate(ToricFiltration.trivial(model("bl1p2")))
    assert cert.C1 == cert.theta / 2


def test_face_dimension_detects_flat_minimum():
    # on P^1, f = |u| gives J(F_xi) = max(1 - xi, 1 + xi) - 1/2, a strict minimum
    mod = model("p1")
    filt = ToricFiltration(mod, PLFunction.max_of(mod.polytope, [((1,), 0), ((-1,), 0)]))
    res = jnat(filt)
    assert res.minimum == F(1, 2) and res.argmin == (0,)
    assert res.face_dim == 0
