"""Toric Q-Fano varieties through their anticanonical polytope.

For ``xi`` in ``N_Q`` the monomial valuation ``wt_xi`` sends a character
``chi^u`` to ``<u, xi>``.  Everything below is a closed form in terms of the
support function of ``P`` and its barycenter.
"""
from fractions import Fraction
from functools import cached_property
from math import gcd

from .linalg import as_fraction, dot
from .polytope import RationalPolytope

__all__ = ["ModelError", "ToricFanoModel", "as_vector"]


class ModelError(ValueError):
    """The polytope is not the anticanonical polytope of a toric Q-Fano."""


def as_vector(xi, dim):
    xi = tuple(as_fraction(x) for x in xi)
    if len(xi) != dim:
        raise ValueError(f"expected a vector of length {dim}, got {len(xi)}")
    return xi


class ToricFanoModel:
    """A toric Q-Fano variety ``X`` with polarization ``-K_X``.

    The polytope must contain the origin in its interior and every facet must
    read ``<u, v_i> >= -1`` with ``v_i`` primitive; the ``v_i`` are the rays of
    the fan of ``X``.
    """

    def __init__(self, polytope):
        if not isinstance(polytope, RationalPolytope):
            polytope = RationalPolytope(polytope)
        zero = (Fraction(0),) * polytope.dim
        if not polytope.contains(zero, strict=True):
            raise ModelError("the origin must be an interior point of the polytope")
        bad = [n for n, o in polytope.facets if o != 1]
        if bad:
            raise ModelError(
                f"facets {bad} are not at lattice distance one from the origin; "
                "not an anticanonical polytope"
            )
        self.polytope = polytope
        self.rays = tuple(n for n, _ in polytope.facets)

    @classmethod
    def from_json(cls, obj):
        return cls(RationalPolytope.from_json(obj))

    @property
    def name(self):
        return self.polytope.name

    @property
    def dim(self):
        return self.polytope.dim

    @property
    def ell0(self):
        return self.polytope.ell0

    @property
    def volume(self):
        return self.polytope.volume

    @property
    def barycenter(self):
        return self.polytope.barycenter

    def __repr__(self):
        return f"ToricFanoModel({self.polytope!r})"

    def grid(self, m):
        """Lattice points of ``m l0 P`` (cached per ``m``)."""
        cache = self.__dict__.setdefault("_grid_cache", {})
        if m not in cache:
            cache[m] = self.polytope.lattice_points(m * self.ell0)
        return cache[m]

    def vector(self, xi):
        return as_vector(xi, self.dim)

    # valuation invariants --------------------------------------------------

    def log_discrepancy(self, xi):
        return -self.polytope.support_min(self.vector(xi))[0]

    def s_invariant(self, xi):
        xi = self.vector(xi)
        return dot(self.barycenter, xi) - self.polytope.support_min(xi)[0]

    def s_invariant_at_level(self, xi, m):
        """Finite-level average ``(1/N_m) sum_u wt_xi(u)/(m l0)`` over the
        lattice points of ``m l0 P``, each section normalized to vanish at the
        minimizing vertex."""
        xi = self.vector(xi)
        k = m * self.ell0
        pts = self.grid(m)
        low = self.polytope.support_min(xi)[0]
        den = 1
        for x in xi:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in xi]
        total = sum(sum(a * b for a, b in zip(u, ints)) for u in pts)
        return Fraction(total, len(pts) * k * den) - low

    def beta(self, xi):
        return self.log_discrepancy(xi) - self.s_invariant(xi)

    def futaki(self, xi):
        return dot(self.barycenter, self.vector(xi))

    def theta(self, xi, zeta):
        """``theta_xi(wt_zeta) = A(wt_{zeta+xi}) - A(wt_zeta)``."""
        xi, zeta = self.vector(xi), self.vector(zeta)
        return self.log_discrepancy(tuple(a + b for a, b in zip(zeta, xi))) - self.log_discrepancy(zeta)

    def lambda_max_of_valuation(self, xi):
        xi = self.vector(xi)
        return self.polytope.support_max(xi) - self.polytope.support_min(xi)[0]

    def jna_of_valuation(self, xi):
        return self.lambda_max_of_valuation(xi) - self.s_invariant(xi)

    @cached_property
    def futaki_on_basis(self):
        return tuple(self.barycenter)

    @cached_property
    def futaki_vanishes(self):
        return all(x == 0 for x in self.barycenter)

    @cached_property
    def delta_toric(self):
        """``min_v A(wt_v)/S(wt_v)`` over the rays, i.e. ``min 1/(1 + <bc, v>)``."""
        best = None
        for v in self.rays:
            s = self.s_invariant(v)
            if s <= 0:
                raise ArithmeticError(f"S vanishes on ray {v}; polytope is degenerate")
            r = self.log_discrepancy(v) / s
            best = r if best is None or r < best else best
        return best

    @cached_property
    def delta_witness(self):
        """A ray attaining :attr:`delta_toric`."""
        return min(self.rays, key=lambda v: (self.log_discrepancy(v) / self.s_invariant(v), v))

    def vertex_cone(self, vertex):
        """Rays of the facets through ``vertex``: the generators of the
        normal-fan cone on which ``A`` equals ``-<vertex, .>``."""
        return tuple(n for n, o in self.polytope.facets if dot(n, vertex) == -o)
