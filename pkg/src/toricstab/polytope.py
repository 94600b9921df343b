"""Exact rational polytopes.

A :class:`RationalPolytope` is built from a finite point set.  Its facets are
found by brute force over affinely independent subsets, which is plenty for the
handful of vertices a moment polytope of a low-dimensional toric variety has.
Facets are stored as ``(normal, offset)`` with ``normal`` a primitive integer
vector and the facet inequality reading ``<u, normal> >= -offset``.

Volumes, centroids and integrals of affine functions come from a pulling
triangulation: cone the lowest vertex (lexicographically) over every facet that
avoids it, recursively.
"""
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import factorial, floor, ceil

from . import kernels
from .linalg import as_fraction, det, dot, nullspace, primitive, rank, solve
from .lp import UNBOUNDED, solve_lp

__all__ = [
    "MAX_DIM",
    "DegeneratePolytopeError",
    "RationalPolytope",
    "volume",
    "barycenter",
    "lattice_points",
    "support_min",
    "simplex_volume",
]

MAX_DIM = 4
DEFAULT_POINT_CAP = 2_000_000


class DegeneratePolytopeError(ValueError):
    """The point set does not span its ambient space."""


def _vec(v):
    return tuple(as_fraction(x) for x in v)


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _affine_rank(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([_sub(p, p0) for p in points[1:]])


def _independent_coords(points, k):
    """Coordinate indices onto which the affine hull of ``points`` (of
    dimension ``k``) projects bijectively."""
    p0 = points[0]
    diffs = [_sub(p, p0) for p in points[1:]]
    chosen = []
    for c in range(len(p0)):
        trial = chosen + [c]
        if rank([[d[i] for i in trial] for d in diffs]) == len(trial):
            chosen = trial
            if len(chosen) == k:
                break
    return chosen


def _hull_facets(points):
    """Facets of a full-dimensional point set in ``Q^d`` as a list of
    ``(normal, rhs, frozenset(indices))`` with ``normal . p >= rhs`` for all
    points and equality exactly on ``indices``."""
    d = len(points[0])
    if d == 1:
        vals = [p[0] for p in points]
        lo, hi = min(vals), max(vals)
        return [
            ((1,), lo, frozenset(i for i, v in enumerate(vals) if v == lo)),
            ((-1,), -hi, frozenset(i for i, v in enumerate(vals) if v == hi)),
        ]
    seen = {}
    for combo in combinations(range(len(points)), d):
        base = points[combo[0]]
        diffs = [_sub(points[i], base) for i in combo[1:]]
        ns = nullspace(diffs, d)
        if len(ns) != 1:
            continue
        normal = tuple(primitive(ns[0]))
        vals = [dot(normal, p) for p in points]
        rhs = dot(normal, base)
        if all(v >= rhs for v in vals):
            pass
        elif all(v <= rhs for v in vals):
            normal = tuple(-x for x in normal)
            rhs = -rhs
            vals = [-v for v in vals]
        else:
            continue
        if normal in seen:
            continue
        on = frozenset(i for i, v in enumerate(vals) if v == rhs)
        seen[normal] = (normal, rhs, on)
    return list(seen.values())


def _triangulate(points, indices):
    """Pulling triangulation of the polytope spanned by ``points[indices]``.

    Returns a list of simplices, each a tuple of indices into ``points``.  Works
    for faces of any dimension by projecting onto independent coordinates.
    """
    idx = sorted(set(indices), key=lambda i: points[i])
    sub = [points[i] for i in idx]
    k = _affine_rank(sub)
    if k == 0:
        return [(idx[0],)]
    coords = _independent_coords(sub, k)
    proj = [tuple(p[c] for c in coords) for p in sub]
    apex = 0  # lowest lexicographic vertex after the sort above
    out = []
    for _, _, on in _hull_facets(proj):
        if apex in on:
            continue
        for simplex in _triangulate(proj, on):
            out.append((idx[apex],) + tuple(idx[j] for j in simplex))
    return out


def simplex_volume(verts):
    """Euclidean volume of a full-dimensional simplex given by ``d+1`` points."""
    d = len(verts[0])
    v0 = verts[0]
    return abs(det([_sub(v, v0) for v in verts[1:]])) / factorial(d)


class RationalPolytope:
    """Convex hull of finitely many rational points, stored exactly.

    Parameters
    ----------
    points : iterable of sequences
        Rational coordinates (``int``, ``Fraction`` or ``"p/q"`` strings).
        Points that are not vertices of the hull are discarded.
    name : str, optional
        Free-form label carried into reports.
    """

    __slots__ = ("vertices", "facets", "dim", "name", "__dict__")

    def __init__(self, points, name=None):
        pts = sorted({_vec(p) for p in points})
        if not pts:
            raise DegeneratePolytopeError("empty point set")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise ValueError("points have inconsistent dimensions")
        if d < 1 or d > MAX_DIM:
            raise ValueError(f"dimension {d} outside the supported range 1..{MAX_DIM}")
        if _affine_rank(pts) < d:
            raise DegeneratePolytopeError("polytope is not full-dimensional")
        raw = _hull_facets(pts)
        verts = []
        for i, p in enumerate(pts):
            normals = [n for n, _, on in raw if i in on]
            if len(normals) >= d and rank(normals) == d:
                verts.append(p)
        self._set(verts, [(n, -Fraction(rhs)) for n, rhs, _ in raw], name)

    def _set(self, vertices, facets, name):
        self.vertices = tuple(sorted(vertices))
        self.facets = tuple(sorted(facets))
        self.dim = len(self.vertices[0])
        self.name = name

    # construction helpers -------------------------------------------------

    @classmethod
    def from_inequalities(cls, normals, offsets, name=None):
        """Polytope ``{u : <u, n_i> >= -offset_i}``; must be bounded."""
        normals = [_vec(n) for n in normals]
        offsets = [as_fraction(o) for o in offsets]
        d = len(normals[0])
        pts = set()
        for combo in combinations(range(len(normals)), d):
            x = solve([normals[i] for i in combo], [-offsets[i] for i in combo])
            if x is None:
                continue
            if all(dot(n, x) >= -o for n, o in zip(normals, offsets)):
                pts.add(tuple(x))
        if not pts:
            raise DegeneratePolytopeError("inequalities define an empty or unbounded set")
        pts = sorted(pts)
        if _affine_rank(pts) < d:
            raise DegeneratePolytopeError("polytope is not full-dimensional")
        facets = {}
        for n, o in zip(normals, offsets):
            if not any(n):
                continue
            p = tuple(primitive(n))
            scale = next(a / b for a, b in zip(p, n) if b != 0)
            tight = [v for v in pts if dot(n, v) == -o]
            if len(tight) >= d and _affine_rank(tight) == d - 1:
                facets[p] = (p, scale * o)
        verts = [
            v for v in pts
            if rank([n for n, o in facets.values() if dot(n, v) == -o]) == d
        ]
        # bounded iff the recession cone {r : <n_i, r> >= 0} is trivial
        cone = [(n, 0) for n in normals]
        for k in range(d):
            for sign in (1, -1):
                c = [sign * int(i == k) for i in range(d)]
                if solve_lp(c, cone).status == UNBOUNDED:
                    raise DegeneratePolytopeError("inequalities define an unbounded set")
        poly = cls.__new__(cls)
        poly._set(verts, list(facets.values()), name)
        return poly

    @classmethod
    def from_json(cls, obj):
        """Parse ``{"dim": n, "vertices": [[...], ...], "name": ...}``."""
        if not isinstance(obj, dict) or "vertices" not in obj:
            raise ValueError("polytope JSON needs a 'vertices' list")
        verts = obj["vertices"]
        if not isinstance(verts, list) or not verts:
            raise ValueError("'vertices' must be a non-empty list")
        pts = []
        for v in verts:
            if not isinstance(v, list):
                raise ValueError(f"vertex {v!r} is not a list")
            pts.append(tuple(as_fraction(x) for x in v))
        dim = obj.get("dim", len(pts[0]))
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise ValueError("'dim' must be an integer")
        if dim > MAX_DIM:
            raise ValueError(f"dimension {dim} exceeds the cap of {MAX_DIM}")
        if any(len(p) != dim for p in pts):
            raise ValueError(f"every vertex must have {dim} coordinates")
        return cls(pts, name=obj.get("name"))

    def to_json(self):
        out = {"dim": self.dim, "vertices": [[_fmt(x) for x in v] for v in self.vertices]}
        if self.name is not None:
            out["name"] = self.name
        return out

    # basic predicates ------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, RationalPolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<RationalPolytope{label} dim={self.dim} vertices={len(self.vertices)}>"

    def contains(self, u, strict=False):
        u = _vec(u)
        if strict:
            return all(dot(n, u) > -o for n, o in self.facets)
        return all(dot(n, u) >= -o for n, o in self.facets)

    def facet_vertices(self, i):
        n, o = self.facets[i]
        return tuple(v for v in self.vertices if dot(n, v) == -o)

    def transform(self, matrix, shift=None):
        """Image under ``u -> matrix @ u + shift``."""
        shift = _vec(shift) if shift is not None else (Fraction(0),) * self.dim
        rows = [_vec(r) for r in matrix]
        img = [tuple(dot(r, v) + s for r, s in zip(rows, shift)) for v in self.vertices]
        return RationalPolytope(img, name=self.name)

    def scaled(self, factor):
        f = as_fraction(factor)
        return RationalPolytope([tuple(f * x for x in v) for v in self.vertices], name=self.name)

    # measure theory ---------------------------------------------------------

    @cached_property
    def simplices(self):
        """Pulling triangulation as tuples of vertex coordinates."""
        verts = list(self.vertices)
        return tuple(
            tuple(verts[i] for i in s) for s in _triangulate(verts, range(len(verts)))
        )

    @cached_property
    def volume(self):
        return sum((simplex_volume(s) for s in self.simplices), Fraction(0))

    @cached_property
    def barycenter(self):
        d = self.dim
        acc = [Fraction(0)] * d
        for s in self.simplices:
            w = simplex_volume(s)
            for i in range(d):
                acc[i] += w * sum(p[i] for p in s) / (d + 1)
        vol = self.volume
        return tuple(a / vol for a in acc)

    def integrate_affine(self, grad, const):
        """Exact ``int_P (<grad, u> + const) du``."""
        grad = _vec(grad)
        return self.volume * (dot(grad, self.barycenter) + as_fraction(const))

    @cached_property
    def boundary_measures(self):
        """Lattice-normalized ``(n-1)``-volume of each facet.

        On the facet with primitive normal ``v`` the measure is the Euclidean
        area divided by ``|v|``, which is the same as the volume of the
        projection that drops a coordinate ``k`` with ``v_k != 0``, divided by
        ``|v_k|``.
        """
        return tuple(_facet_measure(self.facet_vertices(i), n) for i, (n, _) in enumerate(self.facets))

    def facet_barycenter(self, i):
        verts = self.facet_vertices(i)
        return _facet_centroid(verts, self.facets[i][0])

    # lattice points ----------------------------------------------------------

    @cached_property
    def ell0(self):
        """Least positive integer ``l`` such that ``l * P`` is a lattice polytope."""
        den = 1
        for v in self.vertices:
            for x in v:
                den = den * x.denominator // _gcd(den, x.denominator)
        return den

    def lattice_points(self, m=1, cap=DEFAULT_POINT_CAP):
        """Integer points of the dilate ``m * P`` in lexicographic order."""
        m = as_fraction(m)
        if m <= 0:
            raise ValueError("dilation factor must be positive")
        normals = [n for n, _ in self.facets]
        rhs = [ceil(-m * o) for _, o in self.facets]
        lo = [floor(m * min(v[i] for v in self.vertices)) for i in range(self.dim)]
        hi = [ceil(m * max(v[i] for v in self.vertices)) for i in range(self.dim)]
        return kernels.lattice_points(normals, rhs, lo, hi, cap)

    def support_min(self, xi):
        """``min_{u in P} <u, xi>`` and the tuple of vertices attaining it."""
        xi = _vec(xi)
        vals = [(dot(v, xi), v) for v in self.vertices]
        best = min(val for val, _ in vals)
        return best, tuple(v for val, v in vals if val == best)

    def support_max(self, xi):
        xi = _vec(xi)
        return max(dot(v, xi) for v in self.vertices)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _fmt(x):
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _facet_projection(normal):
    k = next(i for i, x in enumerate(normal) if x != 0)
    keep = [i for i in range(len(normal)) if i != k]
    return keep, abs(normal[k])


def _facet_simplices(verts, normal):
    keep, scale = _facet_projection(normal)
    if not keep:
        return [((), verts[0])], scale
    proj = [tuple(v[i] for i in keep) for v in verts]
    order = list(range(len(verts)))
    simplices = _triangulate(proj, order)
    return [(tuple(proj[i] for i in s), tuple(verts[i] for i in s)) for s in simplices], scale


def _facet_measure(verts, normal):
    simplices, scale = _facet_simplices(list(verts), normal)
    if len(normal) == 1:
        return Fraction(1)
    return sum((simplex_volume(p) for p, _ in simplices), Fraction(0)) / scale


def _facet_centroid(verts, normal):
    verts = list(verts)
    if len(normal) == 1:
        return verts[0]
    simplices, _ = _facet_simplices(verts, normal)
    d = len(normal)
    acc = [Fraction(0)] * d
    total = Fraction(0)
    for p, full in simplices:
        w = simplex_volume(p)
        total += w
        for i in range(d):
            acc[i] += w * sum(q[i] for q in full) / len(full)
    return tuple(a / total for a in acc)


def volume(P):
    return P.volume


def barycenter(P):
    return P.barycenter


def lattice_points(P, m=1, cap=DEFAULT_POINT_CAP):
    return P.lattice_points(m, cap=cap)


def support_min(P, xi):
    return P.support_min(xi)
