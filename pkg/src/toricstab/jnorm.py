"""The reduced J-norm ``inf_xi J^NA(F_xi)`` and its properness certificate."""
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import kernels
from .linalg import dot, rank
from .lp import OPTIMAL, minimize_pl_convex, solve_lp

__all__ = [
    "JnatResult",
    "Certificate",
    "twist_objective",
    "jna_of_twist",
    "jnat",
    "jnat_grid",
    "properness_certificate",
    "audit_certificate",
]


@dataclass(frozen=True)
class JnatResult:
    minimum: Fraction
    argmin: tuple
    face_dim: int

    @property
    def is_product(self):
        return self.minimum == 0


@dataclass(frozen=True)
class Certificate:
    """``J^NA(F_xi) >= C1 |xi|_1 - C2`` for every ``xi``."""

    theta: Fraction
    C1: Fraction
    C2: Fraction

    def bound(self, xi):
        return self.C1 * sum(abs(x) for x in xi) - self.C2


def twist_objective(filt):
    """Affine forms whose max is ``xi -> J^NA(F_xi)``:
    ``f(V) - <V, xi> + <bc, xi> - E^NA(F)`` over subdivision vertices ``V``."""
    bc = filt.model.barycenter
    e = filt.ena
    return [
        (tuple(b - v for b, v in zip(bc, V)), filt.f(V) - e) for V in filt.f.vertices
    ]


def jna_of_twist(filt, xi):
    xi = filt.model.vector(xi)
    return max(dot(g, xi) + c for g, c in twist_objective(filt))


def _face_dimension(forms, value):
    """Dimension of ``{xi : max_j form_j(xi) <= value}``."""
    n = len(forms[0][0])
    cons = [([-x for x in g], c - value) for g, c in forms]
    tight = []
    for g, c in forms:
        # largest slack value - form_j on the optimal set
        sol = solve_lp(list(g), cons, offset=c - value)
        if sol.status == OPTIMAL and sol.optimum == 0:
            tight.append(g)
    return n - (rank(tight) if tight else 0)


def jnat(filt):
    """Exact reduced J-norm with the lexicographically least minimizer."""
    forms = twist_objective(filt)
    value, xi = minimize_pl_convex(forms, lexicographic=True)
    return JnatResult(value, tuple(xi), _face_dimension(forms, value))


def _lcm(a, b):
    return a * b // gcd(a, b)


def jnat_grid(filt, step=Fraction(1, 20), radius=3):
    """Brute-force minimum of ``J^NA(F_xi)`` over ``xi in step Z^n``, ``|xi|_inf <= radius``."""
    step = Fraction(step)
    forms = twist_objective(filt)
    n = filt.model.dim
    N = int(radius / step)
    den = 1
    for g, c in forms:
        for x in tuple(a * step for a in g) + (c,):
            den = _lcm(den, x.denominator)
    # value at xi = step * p is max_j (g_j . p * step + c_j); scale by den
    grads = [tuple(int(x * step * den) for x in g) for g, _ in forms]
    consts = [int(c * den) for _, c in forms]
    box = [-N] * n, [N] * n
    pts = kernels.lattice_points([], [], box[0], box[1], (2 * N + 1) ** n + 1)
    vals, _ = kernels.max_affine_int(pts, grads, consts)
    j = min(range(len(vals)), key=vals.__getitem__)
    return Fraction(vals[j], den), tuple(step * x for x in pts[j])


def properness_certificate(filt):
    """Largest ``theta`` with ``bc +- theta e_k`` in ``P`` for all ``k``;
    ``C1 = theta / n`` and ``C2 = E^NA(F) - e_-/l0``."""
    model = filt.model
    P = model.polytope
    bc = model.barycenter
    n = model.dim
    theta = None
    for k in range(n):
        for sign in (1, -1):
            for v, o in P.facets:
                step = sign * v[k]
                if step < 0:
                    t = (dot(bc, v) + o) / -step
                    theta = t if theta is None or t < theta else theta
    C1 = theta / n
    C2 = filt.ena - Fraction(filt.e_minus, filt.ell0)
    return Certificate(theta, C1, C2)


def audit_certificate(filt, cert=None, samples=200, radius=10, seed=0):
    """Check the certificate on random rational ``xi`` with ``|xi|_inf <= radius``.

    Returns the list of violating ``xi`` (empty when the bound holds).
    """
    cert = cert or properness_certificate(filt)
    rng = random.Random(seed)
    n = filt.model.dim
    bad = []
    for _ in range(samples):
        xi = tuple(Fraction(rng.randint(-radius * 12, radius * 12), 12) for _ in range(n))
        if jna_of_twist(filt, xi) < cert.bound(xi):
            bad.append(xi)
    return bad
