"""Log canonical thresholds, ``L^NA``, ``D^NA`` and the CM weight.

Everything is torus-invariant, so log canonical thresholds are computed over
monomial valuations only.  On the chart of ``X x C`` attached to a vertex
``u`` of ``P`` a valuation is ``w = sum_i mu_i v_i + s e_t`` with ``mu >= 0``
and ``v_i`` the rays of the cone dual to ``u``; the log discrepancy is
``sum mu_i + s`` because every facet of ``P`` sits at lattice distance one.
"""
from dataclasses import dataclass
from fractions import Fraction

from .filtration import LimitResult, ToricFiltration, _judge, doubling_schedule
from .linalg import as_fraction, dot
from .lp import OPTIMAL, UNBOUNDED, minimize_pl_convex, solve_lp

__all__ = [
    "Chart",
    "NotSubLCError",
    "NotConcaveError",
    "lct_monomial",
    "newton_lct",
    "chart_of_vertex",
    "lct_level",
    "lna_level",
    "lna_level_envelope",
    "lna_exact",
    "lna",
    "dna",
    "dna_exact",
    "cm",
    "cm_pin",
]


class NotSubLCError(ArithmeticError):
    """The pair is not sub-log-canonical for any coefficient of the divisor."""


class NotConcaveError(ValueError):
    """The filtration does not come from a toric test configuration."""


@dataclass(frozen=True)
class Chart:
    """A torus-invariant affine chart: cone generators and the log
    discrepancy of each generator (``A`` is linear on the cone)."""

    rays: tuple
    discrepancies: tuple

    @classmethod
    def smooth(cls, dim):
        rays = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
        return cls(rays, (Fraction(1),) * dim)


def _pairings(chart, beta):
    return [dot(beta, v) for v in chart.rays]


def _lct_lp(chart, generators, coefficient, divisor):
    """Solve the lct LP; returns ``(value, mu, tau)``.

    Without a divisor: ``min A(w)`` s.t. ``<beta_j, w> >= 1``, then divide by
    the coefficient.  With a divisor ``D = chi^delta``:
    ``min A(w) - c tau`` s.t. ``tau <= <beta_j, w>``, ``<delta, w> = 1``.
    """
    r = len(chart.rays)
    c = as_fraction(coefficient)
    if c <= 0:
        raise ValueError("coefficient must be positive")
    a = list(chart.discrepancies)
    positivity = [([Fraction(int(i == j)) for j in range(r)], 0) for i in range(r)]
    if divisor is None:
        cons = positivity + [(_pairings(chart, b), 1) for b in generators]
        sol = solve_lp(a, cons)
        if sol.status != OPTIMAL:
            raise ArithmeticError(f"lct LP is {sol.status}")
        return sol.optimum / c, sol.argmin, None
    d = _pairings(chart, divisor)
    cons = [(row + [0], 0) for row, _ in positivity]
    cons += [(_pairings(chart, b) + [-1], 0) for b in generators]
    cons += [(d + [0], 1), ([-x for x in d] + [0], -1)]
    sol = solve_lp(a + [-c], cons)
    if sol.status == UNBOUNDED:
        raise NotSubLCError("lct is minus infinity on this chart")
    if sol.status != OPTIMAL:
        raise ArithmeticError(f"lct LP is {sol.status}")
    # valuations with <delta, w> = 0 must keep the pair sub-lc
    hcons = [(row + [0], 0) for row, _ in positivity]
    hcons += [(_pairings(chart, b) + [-1], 0) for b in generators]
    hcons += [(d + [0], 0), ([-x for x in d] + [0], 0)]
    if solve_lp(a + [-c], hcons).status == UNBOUNDED:
        raise NotSubLCError("pair is not sub-lc along the divisor's complement")
    return sol.optimum, sol.argmin[:r], sol.argmin[r]


def lct_monomial(generators, chart=None, coefficient=1, divisor=None):
    """Log canonical threshold of a monomial ideal on a toric chart.

    ``generators`` are exponent vectors of the ideal's monomial generators.
    Without ``divisor`` this is ``lct(I^c)``; with ``divisor`` (an exponent
    vector) it is ``sup {s : (chart, I^c * D^s) sub-lc}``.
    """
    gens = [tuple(as_fraction(x) for x in b) for b in generators]
    if not gens:
        raise ValueError("empty generator set")
    if chart is None:
        chart = Chart.smooth(len(gens[0]))
    if divisor is not None:
        divisor = tuple(as_fraction(x) for x in divisor)
    return _lct_lp(chart, gens, coefficient, divisor)[0]


def newton_lct(generators):
    """Independent Newton-polyhedron formula on ``C^n``: ``1/t`` for the
    least ``t`` with ``(t, ..., t)`` in the Newton polyhedron.

    Solved as ``min t`` s.t. ``t * 1 >= sum_j lambda_j beta_j`` coordinatewise
    with ``sum lambda_j = 1``; the Newton polyhedron is
    ``conv(generators) + R_{>=0}^n``.
    """
    gens = [tuple(as_fraction(x) for x in b) for b in generators]
    n, k = len(gens[0]), len(gens)
    # variables (lambda_1..lambda_k, t)
    cons = [([Fraction(int(i == j)) for j in range(k)] + [0], 0) for i in range(k)]
    for c in range(n):
        cons.append(([-g[c] for g in gens] + [1], 0))
    ones = [Fraction(1)] * k
    cons += [(ones + [0], 1), ([-x for x in ones] + [0], -1)]
    sol = solve_lp([0] * k + [1], cons)
    return 1 / sol.optimum


# filtrations ---------------------------------------------------------------------


def chart_of_vertex(model, vertex):
    """Chart of ``X x C`` over the vertex ``vertex`` of ``P``; the last ray is
    the ``t`` direction."""
    n = model.dim
    rays = tuple(tuple(v) + (0,) for v in model.vertex_cone(vertex))
    rays += (tuple([0] * n + [1]),)
    return Chart(rays, (Fraction(1),) * len(rays))


def _chart_lct(filt, m, vertex):
    """lct of ``(I_m)^{1/(m l0)}`` against ``(t)`` on one chart, by
    constraint generation over the ideal's generators.

    Generators are ``chi^(a - m l0 vertex) t^(m e+ - lambda(a))`` for lattice
    points ``a`` of ``m l0 P`` plus ``t^(m (e+ - e-))``.  The LP starts from
    the generators at the vertices of ``P``; the most violated generator is
    found with one pass of the lattice kernel and added until none remains.
    """
    model = filt.model
    n = model.dim
    k = m * filt.ell0
    chart = chart_of_vertex(model, vertex)
    delta = (0,) * n + (1,)
    top = m * filt.e_plus

    def generator(a, lam):
        return tuple(Fraction(x) - k * v for x, v in zip(a, vertex)) + (top - lam,)

    active = {(0,) * n + (Fraction(m * (filt.e_plus - filt.e_minus)),)}
    for V in model.polytope.vertices:
        active.add(generator(tuple(k * x for x in V), k * filt.f(V)))
    while True:
        value, mu, tau = _lct_lp(chart, sorted(active), Fraction(1, k), delta)
        w = tuple(sum(mu[i] * chart.rays[i][c] for i in range(len(mu))) for c in range(n))
        (vals, D), pts = filt._values(m, w)
        j = max(range(len(vals)), key=vals.__getitem__)
        a = pts[j]
        lam = Fraction(vals[j], D) + dot(a, w)
        g = generator(a, lam)
        if dot(g[:n], w) + g[n] >= tau:
            return value
        active.add(g)


def lct_level(filt, m):
    """``lct(X x C, (I_m^{F(e+)})^{1/(m l0)}; (t))``, minimized over charts."""
    return min(_chart_lct(filt, m, v) for v in filt.model.polytope.vertices)


def lna_level(filt, m):
    """``L^NA`` of the ``m``-th approximation through the lct LPs."""
    return lct_level(filt, m) + Fraction(filt.e_plus, filt.ell0) - 1


def lna_level_envelope(filt, m):
    """Same quantity via ``inf_xi max_a (f(a') - <a', xi>)`` over the
    level-``m`` grid; an independent path used for cross-checks."""
    k = m * filt.ell0
    (vals, D), pts = filt._values(m)
    forms = [([-Fraction(x, k) for x in a], Fraction(v, D * k)) for a, v in zip(pts, vals)]
    return minimize_pl_convex(forms)[0]


def lna_exact(filt):
    """Limit value ``inf_xi max_V (f(V) - <V, xi>)`` over subdivision vertices."""
    forms = [([-x for x in V], filt.f(V)) for V in filt.f.vertices]
    return minimize_pl_convex(forms)[0]


def lna(filt, m_cap=40, tol=Fraction(1, 100), schedule=None):
    schedule = schedule or doubling_schedule(m_cap)
    hist = [(m, lna_level(filt, m)) for m in schedule]
    return _judge(hist, tol, lna_exact(filt))


def dna_exact(filt):
    return -filt.ena + lna_exact(filt)


def dna(filt, m_cap=40, tol=Fraction(1, 100), schedule=None):
    L = lna(filt, m_cap, tol, schedule)
    e = filt.ena
    return LimitResult(
        -e + L.value,
        tuple((m, -e + v) for m, v in L.history),
        L.converged,
        L.tol,
        -e + L.exact,
    )


def cm(filt):
    """CM weight of the toric test configuration whose filtration is ``filt``.

    ``CM = -(1/vol P) [int_dP f dsigma - (sigma(dP)/vol P) int_P f]`` with
    ``sigma`` the lattice boundary measure.
    """
    if not filt.f.is_concave:
        raise NotConcaveError("CM weight needs the (concave) filtration of a test configuration")
    P = filt.model.polytope
    vol = P.volume
    sigma = sum(P.boundary_measures, Fraction(0))
    bracket = filt.f.boundary_integral - sigma / vol * filt.f.integral
    return -bracket / vol


def cm_pin(model):
    """``(xi, cm(twist(trivial, xi)), futaki(xi))`` over the standard basis."""
    out = []
    triv = ToricFiltration.trivial(model)
    for i in range(model.dim):
        xi = tuple(int(i == j) for j in range(model.dim))
        out.append((xi, cm(triv.twist(xi)), model.futaki(xi)))
    return out
