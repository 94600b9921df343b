"""Torus-equivariant filtrations of the anticanonical ring.

A toric filtration is recorded by a PL function ``f`` on ``P``: the monomial
``chi^a`` of ``R_m = H^0(m l0 L)`` has jumping number
``lambda(a) = m l0 f(a / (m l0))``, and ``F^x R_m`` is spanned by the
monomials with ``lambda >= x``.  Filtrations coming from test configurations
have concave ``f``; the calculus below does not need that except where noted.

Twisting by ``xi`` subtracts the linear form ``<., xi>``: section weights are
the negatives of character exponents, which is the convention under which
``E(F_xi) = E(F) - Fut(xi)`` and ``phi^{F_xi}(w) = phi^F(w_xi) + theta_xi(w)``
hold on the nose.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor, gcd

from .envelope import concave_envelope_integral
from .linalg import as_fraction, dot
from .model import ToricFanoModel
from .plfunction import PLFunction

__all__ = [
    "DEFAULT_SCHEDULE",
    "DHMeasure",
    "LimitResult",
    "ToricFiltration",
    "doubling_schedule",
]

DEFAULT_SCHEDULE = (8, 16, 32)


def doubling_schedule(m_cap):
    """``8, 16, 32, ...`` up to ``m_cap``, always ending at ``m_cap``."""
    out = [m for m in DEFAULT_SCHEDULE if m < m_cap]
    out.append(m_cap)
    return tuple(out)


def _lcm(a, b):
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class LimitResult:
    """A limit approximated along a schedule of levels.

    ``history`` holds ``(m, value)`` pairs, ``value`` the last one and
    ``exact`` the closed-form limit when one is available.
    """

    value: Fraction
    history: tuple
    converged: bool
    tol: Fraction
    exact: Fraction = None

    @property
    def error_bar(self):
        if len(self.history) < 2:
            return None
        return abs(self.history[-1][1] - self.history[-2][1])


def _judge(history, tol, exact=None, rate=None):
    """Cauchy-style stopping rule along the schedule."""
    tol = as_fraction(tol)
    steps = [abs(b[1] - a[1]) for a, b in zip(history, history[1:])]
    ok = bool(steps) and steps[-1] < tol
    if ok and exact is not None and rate is not None:
        m, v = history[-1]
        ok = abs(v - exact) <= rate / m
    return LimitResult(history[-1][1], tuple(history), ok, tol, exact)


@dataclass(frozen=True)
class DHMeasure:
    """Atoms ``(value, mass)`` at a finite level, or limit moments.

    For the limit only ``mass``, ``mean``, ``second_moment`` and the support
    interval are stored; the measure itself is the push-forward of the
    normalized Lebesgue measure of ``P`` under ``f``.
    """

    atoms: tuple = ()
    mean: Fraction = None
    second_moment: Fraction = None
    support: tuple = None
    level: int = None
    mass: Fraction = field(default=Fraction(1))

    @classmethod
    def from_atoms(cls, values, level):
        counts = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        n = len(values)
        atoms = tuple(sorted((v, Fraction(c, n)) for v, c in counts.items()))
        mean = sum((v * w for v, w in atoms), Fraction(0))
        second = sum((v * v * w for v, w in atoms), Fraction(0))
        mass = sum((w for _, w in atoms), Fraction(0))
        return cls(atoms, mean, second, (atoms[0][0], atoms[-1][0]), level, mass)


class ToricFiltration:
    """Filtration of ``R(X, -K_X)`` encoded by a PL function on ``P``."""

    def __init__(self, model, f):
        if not isinstance(model, ToricFanoModel):
            raise TypeError("model must be a ToricFanoModel")
        if not isinstance(f, PLFunction):
            raise TypeError("f must be a PLFunction")
        if f.domain != model.polytope:
            raise ValueError("PL function lives on a different polytope")
        self.model = model
        self.f = f

    # constructors -----------------------------------------------------------------

    @classmethod
    def trivial(cls, model):
        return cls(model, PLFunction.constant(model.polytope, 0))

    @classmethod
    def of_valuation(cls, model, zeta):
        """``F_v`` for ``v = wt_zeta``: ``f(u) = <u, zeta> - min_P <., zeta>``."""
        zeta = model.vector(zeta)
        low = model.polytope.support_min(zeta)[0]
        return cls(model, PLFunction.affine(model.polytope, zeta, -low))

    @classmethod
    def product(cls, model, xi, c=0):
        """Product configuration ``f = <., xi> + c``."""
        return cls(model, PLFunction.affine(model.polytope, model.vector(xi), c))

    @classmethod
    def from_test_configuration(cls, model, g):
        """Filtration of the toric test configuration with convex PL datum ``g``."""
        if not g.is_convex:
            raise ValueError("a toric test configuration needs a convex PL function")
        return cls(model, g.negate())

    def __eq__(self, other):
        return isinstance(other, ToricFiltration) and self.model is other.model and self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __repr__(self):
        return f"ToricFiltration({self.f!r})"

    @property
    def ell0(self):
        return self.model.ell0

    @cached_property
    def e_plus(self):
        """``ceil(l0 * max f)``: integral upper bound on jumps per unit grade."""
        return ceil(self.ell0 * self.f.max_value)

    @cached_property
    def e_minus(self):
        return floor(self.ell0 * self.f.min_value)

    @property
    def is_concave(self):
        return self.f.is_concave

    # level-m data -------------------------------------------------------------------

    def _values(self, m, zeta=None):
        """Scaled values ``D * (lambda(a) - <a, zeta>)`` on the lattice points of
        ``m l0 P`` and the scale ``D``."""
        pts = self.model.grid(m)
        f = self.f
        if zeta is not None:
            den = 1
            for x in zeta:
                den = _lcm(den, x.denominator)
            f = f.with_denominator(den)
        return f.scaled_values(pts, m * self.ell0, zeta), pts

    def successive_minima(self, m):
        (vals, D), _ = self._values(m)
        return sorted((Fraction(v, D) for v in vals), reverse=True)

    def ena_m(self, m):
        (vals, D), _ = self._values(m)
        return Fraction(sum(vals), D * len(vals) * m * self.ell0)

    def lambda_max_m(self, m):
        (vals, D), _ = self._values(m)
        return Fraction(max(vals), D * m * self.ell0)

    def dh(self, m=None):
        if m is None:
            return DHMeasure(
                mean=self.ena,
                second_moment=self.f.second_moment,
                support=(self.f.min_value, self.f.max_value),
            )
        (vals, D), _ = self._values(m)
        scale = D * m * self.ell0
        return DHMeasure.from_atoms([Fraction(v, scale) for v in vals], m)

    # limit functionals -------------------------------------------------------------

    @property
    def ena(self):
        return self.f.mean

    @property
    def lambda_max(self):
        return self.f.max_value

    @property
    def jna(self):
        return self.lambda_max - self.ena

    def ena_limit(self, m_cap=40, tol=Fraction(1, 100)):
        hist = [(m, self.ena_m(m)) for m in doubling_schedule(m_cap)]
        return _judge(hist, tol, self.ena, 2 * (self.e_plus - self.e_minus))

    # operations --------------------------------------------------------------------

    def shift(self, theta):
        return ToricFiltration(self.model, self.f + as_fraction(theta))

    def twist(self, xi):
        xi = self.model.vector(xi)
        return ToricFiltration(self.model, self.f.add_affine(tuple(-x for x in xi)))

    def rescale(self, b):
        """Filtration whose metric is ``b o phi``: the PL datum scales by ``b``."""
        return ToricFiltration(self.model, self.f.scale(b))

    # non-Archimedean metric --------------------------------------------------------

    def ideal_generators(self, m, vertex):
        """Monomial generators of ``I_m^{F(e+)}`` on the chart of ``vertex``.

        Returns ``(beta, k)`` pairs for ``chi^beta t^k``: one per lattice point
        ``a`` of ``m l0 P`` with ``beta = a - m l0 vertex`` and
        ``k = m e+ - lambda(a)``, plus ``t^{m (e+ - e-)}``.
        """
        k = m * self.ell0
        (vals, D), pts = self._values(m)
        shift = tuple(k * x for x in vertex)
        gens = [(tuple(0 for _ in vertex), Fraction(m * (self.e_plus - self.e_minus)))]
        for a, v in zip(pts, vals):
            beta = tuple(ai - si for ai, si in zip(a, shift))
            gens.append((beta, m * self.e_plus - Fraction(v, D)))
        return gens

    def gauss_value(self, m, zeta):
        """``G(wt_zeta)(I_m)``: the monomial valuation ``(zeta, 1)`` on the
        ideal, evaluated on all generators at once."""
        zeta = self.model.vector(zeta)
        k = m * self.ell0
        (vals, D), _ = self._values(m, zeta)
        A = self.model.log_discrepancy(zeta)
        best = Fraction(max(vals), D)  # max_a (lambda(a) - <a, zeta>)
        return min(Fraction(m * (self.e_plus - self.e_minus)), k * A + m * self.e_plus - best)

    def phi_value(self, m, zeta):
        """``phi^F_m(wt_zeta) = -G(wt_zeta)(I_m)/(m l0) + e+/l0``."""
        G = self.gauss_value(m, zeta)
        return -G / (m * self.ell0) + Fraction(self.e_plus, self.ell0)

    def phi_exact(self, zeta):
        """Limit of ``phi_m``: ``max_P (f - <., zeta>) + min_P <., zeta>``."""
        zeta = self.model.vector(zeta)
        top = max(self.f(v) - dot(v, zeta) for v in self.f.vertices)
        return max(top + self.model.polytope.support_min(zeta)[0], Fraction(self.e_minus, self.ell0))

    def phi_limit(self, zeta, m_cap=40, tol=Fraction(1, 100)):
        zeta = self.model.vector(zeta)
        hist = [(m, self.phi_value(m, zeta)) for m in doubling_schedule(m_cap)]
        return _judge(hist, tol, self.phi_exact(zeta))

    def rescaled_phi(self, b, m, zeta):
        """``(b o phi_m)(wt_zeta) = b * phi_m(wt_{zeta/b})``."""
        b = as_fraction(b)
        if b <= 0:
            raise ValueError("rescaling factor must be positive")
        zeta = self.model.vector(zeta)
        return b * self.phi_value(m, tuple(z / b for z in zeta))

    # approximating test configurations ------------------------------------------------

    def approximation_energy(self, m):
        """``E^NA(phi_m)``: mean over ``P`` of the least concave function lying
        above the level-``m`` jumping numbers.

        For affine ``f`` and for concave ``f`` whose breakpoints lie on the
        level-``m`` grid this is just the mean of ``f``.
        """
        k = m * self.ell0
        f = self.f
        if f.is_affine:
            return self.ena
        if f.is_concave and all((k * x).denominator == 1 for v in f.vertices for x in v):
            return self.ena
        (vals, D), pts = self._values(m)
        dom = self.model.polytope.volume * k ** self.model.dim
        total = concave_envelope_integral(pts, [Fraction(v, D) for v in vals], dom)
        return total / (dom * k)
