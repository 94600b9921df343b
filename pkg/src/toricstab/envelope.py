"""Upper concave envelopes of lifted lattice points, integrated exactly.

Qhull proposes the upper facets in floating point.  Every facet is then
re-derived from its integer vertices and the result is certified exactly: the
projected simplices must tile the domain, neighbouring facets must fold
downwards, and every lifted point must lie on or below the facet whose
projection contains it.  Only then is the integral formed, in rationals.
"""
from fractions import Fraction
from math import factorial

import numpy as np
from scipy.spatial import ConvexHull

from . import kernels
from .linalg import det, primitive, solve

__all__ = ["EnvelopeError", "concave_envelope_integral"]


class EnvelopeError(ArithmeticError):
    """The floating-point hull could not be certified."""


def _upper_hull_1d(points, heights):
    pairs = sorted(zip((p[0] for p in points), heights))
    hull = []
    for x, h in pairs:
        if hull and hull[-1][0] == x:
            if h <= hull[-1][1]:
                continue
            hull.pop()
        while len(hull) >= 2:
            (x1, h1), (x2, h2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or below the chord
            if (h2 - h1) * (x - x1) <= (h - h1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, h))
    return hull


def concave_envelope_integral(points, heights, domain_volume):
    """``int h`` over ``conv(points)`` for the least concave ``h`` with
    ``h(p) >= height(p)``.

    ``points`` are integer tuples, ``heights`` rationals and ``domain_volume``
    the exact volume of ``conv(points)``, used as a tiling certificate.
    """
    points = [tuple(int(x) for x in p) for p in points]
    heights = [Fraction(h) for h in heights]
    d = len(points[0])
    if d == 1:
        hull = _upper_hull_1d(points, heights)
        total = sum(
            ((x2 - x1) * (h1 + h2) / 2 for (x1, h1), (x2, h2) in zip(hull, hull[1:])), Fraction(0)
        )
        if hull[-1][0] - hull[0][0] != domain_volume:
            raise EnvelopeError("1D envelope does not span the domain")
        return total

    lifted = [list(p) + [float(h)] for p, h in zip(points, heights)]
    # an extra point strictly below the samples keeps qhull's input full
    # dimensional when the heights are affine; it never touches an upper facet
    lifted.append(list(points[0]) + [float(min(heights)) - 1.0])
    lifted = np.array(lifted, dtype=float)
    try:
        hull = ConvexHull(lifted)
    except Exception as exc:  # qhull raises its own error type
        raise EnvelopeError(f"qhull failed: {exc}") from exc
    upper = [i for i, eq in enumerate(hull.equations) if eq[d] > 1e-12]

    planes = {}
    total = Fraction(0)
    area = Fraction(0)
    for i in upper:
        simplex = [int(j) for j in hull.simplices[i]]
        if len(points) in simplex:
            raise EnvelopeError("auxiliary point reached an upper facet")
        base = points[simplex[0]]
        rows = [[a - b for a, b in zip(points[j], base)] for j in simplex[1:]]
        vol = abs(det(rows)) / factorial(d)
        if vol == 0:
            # triangulating a flat region can leave slivers; they carry no mass
            continue
        grad = solve(rows, [heights[j] - heights[simplex[0]] for j in simplex[1:]])
        const = heights[simplex[0]] - sum(g * b for g, b in zip(grad, base))
        planes[i] = (simplex, grad, const)
        area += vol
        total += vol * sum(heights[j] for j in simplex) / (d + 1)
    if area != domain_volume:
        raise EnvelopeError(f"upper facets cover {area}, expected {domain_volume}")

    def plane_value(k, p):
        _, grad, const = planes[k]
        return sum(g * x for g, x in zip(grad, p)) + const

    # neighbouring upper facets fold downwards
    for k in planes:
        for nb in hull.neighbors[k]:
            if nb not in planes:
                continue
            other = [int(j) for j in hull.simplices[nb] if j not in planes[k][0]]
            for j in other:
                if heights[j] > plane_value(k, points[j]):
                    raise EnvelopeError("facets do not form a concave surface")

    # every lifted point sits below the facet containing its projection
    covered = set()
    lookup = {p: h for p, h in zip(points, heights)}
    for k, (simplex, grad, const) in planes.items():
        normals, rhs = _simplex_inequalities([points[j] for j in simplex])
        verts = [points[j] for j in simplex]
        lo = [min(v[c] for v in verts) for c in range(d)]
        hi = [max(v[c] for v in verts) for c in range(d)]
        for p in kernels.lattice_points(normals, rhs, lo, hi, 10**7):
            h = lookup.get(p)
            if h is None:
                raise EnvelopeError(f"lattice point {p} missing from the input")
            if h > plane_value(k, p):
                raise EnvelopeError(f"point {p} lies above the proposed envelope")
            covered.add(p)
    if len(covered) != len(lookup):
        raise EnvelopeError("some lattice points are not covered by the envelope")
    return total


def _simplex_inequalities(verts):
    """Integer H-representation ``normals @ u >= rhs`` of a full simplex."""
    d = len(verts[0])
    normals, rhs = [], []
    for skip in range(d + 1):
        face = [v for j, v in enumerate(verts) if j != skip]
        opposite = verts[skip]
        rows = [[a - b for a, b in zip(v, face[0])] for v in face[1:]]
        # normal orthogonal to the face: cofactor expansion
        n = []
        for c in range(d):
            minor = [[r[j] for j in range(d) if j != c] for r in rows]
            n.append((-1) ** c * (det(minor) if minor else 1))
        n = primitive(n)
        b = sum(x * y for x, y in zip(n, face[0]))
        if sum(x * y for x, y in zip(n, opposite)) < b:
            n = [-x for x in n]
            b = -b
        normals.append(tuple(n))
        rhs.append(int(b))
    return normals, rhs
