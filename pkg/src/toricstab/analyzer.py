"""Stability verdicts and the invariant report for one toric Fano model.

With the full torus acting, every invariant valuation is some ``wt_zeta`` and
its twist orbit contains the trivial valuation, so the reduced uniform
criterion collapses to the vanishing of the Futaki invariant, that is
``bc(P) = 0``.  The plain uniform criterion always fails through product
configurations.  K-semistability is audited by sampling CM weights.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .filtration import ToricFiltration, doubling_schedule
from .functionals import cm, cm_pin, lna
from .io import fmt, fmt_vec
from .linalg import as_fraction, dot
from .plfunction import PLFunction, random_pl

__all__ = [
    "SCHEMA",
    "UNDETERMINED",
    "AnalysisConfig",
    "KernelConsistencyError",
    "analyze",
    "valuative_scan",
    "valuative_sup",
    "ScanRow",
]

SCHEMA = "toricstab.report/1"
UNDETERMINED = "undetermined"
SEMISTABLE_LABEL = "audited ({} samples)"
DEGENERATE_LABEL = "criterion degenerate under full-torus twisting"


class KernelConsistencyError(AssertionError):
    """An invariant that must hold for every model failed."""


@dataclass(frozen=True)
class AnalysisConfig:
    m_cap: int = 40
    tol: Fraction = Fraction(1, 20)
    samples: int = 24
    seed: int = 0
    verbosity: int = 1
    point_budget: int = 250_000

    def __post_init__(self):
        if self.m_cap < 1:
            raise ValueError("m_cap must be positive")
        object.__setattr__(self, "tol", as_fraction(self.tol))

    def levels(self, model):
        """Doubling schedule, truncated where ``m l0 P`` would exceed the point budget."""
        out = []
        for m in doubling_schedule(self.m_cap):
            est = model.volume * (m * model.ell0) ** model.dim
            if est <= self.point_budget or not out:
                out.append(m)
        return tuple(out)


def _lim(res):
    return {
        "value": fmt(res.value),
        "exact": fmt(res.exact) if res.exact is not None else None,
        "history": [[m, fmt(v)] for m, v in res.history],
        "converged": res.converged,
    }


def _semistability_audit(model, config):
    """CM weights of sampled toric test configurations; returns
    ``(min_cm, witness_pl, n_samples)``."""
    rng = random.Random(config.seed)
    P = model.polytope
    candidates = []
    for k in range(model.dim):
        for sign in (1, -1):
            e = tuple(sign * int(i == k) for i in range(model.dim))
            candidates.append(PLFunction.affine(P, e))
    while len(candidates) < config.samples:
        candidates.append(random_pl(P, rng, kind="max", pieces=rng.randint(2, 3)))
    best = None
    for g in candidates:
        w = cm(ToricFiltration.from_test_configuration(model, g))
        if best is None or w < best[0]:
            best = (w, g)
    return best[0], best[1], len(candidates)


def analyze(model, config=None):
    """Full invariant report as a JSON-ready dict."""
    config = config or AnalysisConfig()
    P = model.polytope
    bc = model.barycenter
    n = model.dim
    delta = model.delta_toric
    fut_zero = model.futaki_vanishes
    if delta > 1:
        raise KernelConsistencyError(f"delta_toric = {delta} exceeds 1")
    if delta == 1 and not fut_zero:
        raise KernelConsistencyError("delta_toric = 1 with non-vanishing Futaki invariant")

    verdicts = {}
    witnesses = {}
    diagnostics = {}
    levels = config.levels(model)

    # (a) Futaki
    verdicts["futaki_vanishes"] = fut_zero
    if not fut_zero:
        xi = model.delta_witness
        witnesses["futaki_vanishes"] = {"xi": list(xi), "futaki": fmt(model.futaki(xi))}

    # (b) reduced uniform stability
    verdicts["G_uniformly_K_stable"] = fut_zero
    if not fut_zero:
        xi = model.delta_witness
        witnesses["G_uniformly_K_stable"] = {
            "xi": list(xi),
            "futaki": fmt(model.futaki(xi)),
            "delta_toric": fmt(delta),
        }

    # (c) plain uniform stability fails along a product configuration
    e1 = tuple(int(i == 0) for i in range(n))
    xi = e1 if model.futaki(e1) >= 0 else tuple(-x for x in e1)
    prod = ToricFiltration.product(model, xi)
    L = lna(prod, config.m_cap, config.tol, schedule=levels)
    dna_value = -prod.ena + L.value
    if not L.converged:
        verdicts["uniformly_K_stable"] = UNDETERMINED
    else:
        verdicts["uniformly_K_stable"] = False
    witnesses["uniformly_K_stable"] = {
        "pl": prod.f.to_json(),
        "dna": fmt(dna_value),
        "jna": fmt(prod.jna),
    }
    diagnostics["lna_product_witness"] = _lim(L)

    # (d) K-semistability audit
    min_cm, g, count = _semistability_audit(model, config)
    verdicts["toric_K_semistable"] = min_cm >= 0
    if min_cm < 0:
        witnesses["toric_K_semistable"] = {"test_configuration": g.to_json(), "cm": fmt(min_cm)}
    diagnostics["semistability_audit"] = {"samples": count, "min_cm": fmt(min_cm)}

    if config.verbosity >= 1:
        m = levels[-1]
        rows = []
        for v in model.rays:
            exact = model.s_invariant(v)
            approx = model.s_invariant_at_level(v, m)
            rows.append(
                {
                    "ray": list(v),
                    "closed_form": fmt(exact),
                    "level": m,
                    "oracle": fmt(approx),
                    "within_bound": abs(approx - exact) <= Fraction(2, m),
                }
            )
        diagnostics["s_invariant_oracle"] = rows
        diagnostics["cm_pin"] = [
            {"xi": list(x), "cm": fmt(c), "futaki": fmt(f), "match": c == f} for x, c, f in cm_pin(model)
        ]
        if not all(r["within_bound"] for r in rows) or not all(r["match"] for r in diagnostics["cm_pin"]):
            raise KernelConsistencyError("closed forms disagree with their finite-level oracles")

    return {
        "schema": SCHEMA,
        "name": model.name,
        "dim": n,
        "vertices": [fmt_vec(v) for v in P.vertices],
        "rays": [list(v) for v in model.rays],
        "ell0": model.ell0,
        "volume": fmt(model.volume),
        "barycenter": fmt_vec(bc),
        "futaki_on_basis": fmt_vec(model.futaki_on_basis),
        "delta_toric": fmt(delta),
        "delta_witness_ray": list(model.delta_witness),
        "verdicts": verdicts,
        "labels": {
            "toric_K_semistable": SEMISTABLE_LABEL.format(count),
            "G_uniformly_K_stable": DEGENERATE_LABEL,
        },
        "witnesses": witnesses,
        "diagnostics": diagnostics,
        "config": {
            "m_cap": config.m_cap,
            "tol": fmt(config.tol),
            "samples": config.samples,
            "seed": config.seed,
            "levels": list(levels),
            "e_plus": "ceil(l0 * max f)",
        },
    }


def is_undetermined(report):
    return any(v == UNDETERMINED for v in report["verdicts"].values())


# valuative scan ----------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    zeta: tuple
    xi: tuple
    margin: Fraction
    sup: object = field(default=None)  # Fraction(0) or float("inf")


def _gauge(model, point):
    """Minkowski gauge of ``P`` at ``point``: least ``c >= 0`` with ``point in cP``."""
    c = Fraction(0)
    for v, o in model.polytope.facets:
        # <point, v> >= -c * o  <=>  c >= -<point, v> / o
        c = max(c, -dot(point, v) / o)
    return c


def valuative_sup(model, delta):
    """``sup_eta [A(wt_eta) - delta S(wt_eta)]``: ``0`` or ``inf``.

    ``A - delta S = (1 - delta) A - delta <bc, .>`` is positively homogeneous,
    and it is positive somewhere exactly when ``bc`` lies outside
    ``(1 - 1/delta) P``.
    """
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta < 1:
        return float("inf")
    return Fraction(0) if _gauge(model, model.barycenter) <= 1 - 1 / delta else float("inf")


def margin(model, delta, eta):
    return model.log_discrepancy(eta) - as_fraction(delta) * model.s_invariant(eta)


def valuative_scan(model, delta, step=Fraction(1, 2), radius=2, twist_radius=None):
    """For each ``zeta`` on the grid, the best twist ``xi`` on a grid of
    twists and the margin ``A(wt_{zeta+xi}) - delta S(wt_{zeta+xi})``."""
    delta = as_fraction(delta)
    step = as_fraction(step)
    twist_radius = twist_radius if twist_radius is not None else 2 * radius
    n = model.dim

    def grid(r):
        N = int(ceil(as_fraction(r) / step))
        pts = [()]
        for _ in range(n):
            pts = [p + (step * i,) for p in pts for i in range(-N, N + 1)]
        return pts

    twists = grid(twist_radius)
    sup = valuative_sup(model, delta)
    rows = []
    for zeta in grid(radius):
        best = None
        for xi in twists:
            eta = tuple(a + b for a, b in zip(zeta, xi))
            val = margin(model, delta, eta)
            if best is None or val > best[0]:
                best = (val, xi)
        rows.append(ScanRow(zeta, best[1], best[0], sup))
    return rows
