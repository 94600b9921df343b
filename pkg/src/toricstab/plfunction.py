"""Piecewise-linear functions on a rational polytope.

A :class:`PLFunction` is the pointwise max (convex) or min (concave) of finitely
many rational affine forms, restricted to a domain polytope.  The cells of the
induced regular subdivision are computed exactly, which makes integrals,
extrema and boundary integrals closed-form.
"""
import random
from fractions import Fraction
from functools import cached_property
from math import gcd

from . import kernels
from .linalg import as_fraction, dot, rank
from .polytope import (
    DegeneratePolytopeError,
    RationalPolytope,
    _facet_centroid,
    _facet_measure,
    simplex_volume,
)

__all__ = ["PLFunction", "random_pl"]

_KINDS = ("max", "min")


def _lcm(a, b):
    return a * b // gcd(a, b)


def _piece(p, dim):
    grad, const = p
    grad = tuple(as_fraction(x) for x in grad)
    if len(grad) != dim:
        raise ValueError(f"gradient {grad} does not have {dim} entries")
    return grad, as_fraction(const)


class PLFunction:
    """``f(u) = max_k (<g_k, u> + c_k)`` (``kind="max"``) or the min
    (``kind="min"``) over affine pieces, on ``domain``.

    Pieces whose cell is not full-dimensional are dropped, so two functions that
    agree on the domain end up with the same piece set.
    """

    def __init__(self, domain, pieces, kind="max"):
        if kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        pieces = sorted({_piece(p, domain.dim) for p in pieces})
        if not pieces:
            raise ValueError("a PL function needs at least one affine piece")
        self.domain = domain
        self.kind = kind
        self._raw = tuple(pieces)

    # constructors ---------------------------------------------------------------

    @classmethod
    def affine(cls, domain, grad, const=0):
        return cls(domain, [(grad, const)])

    @classmethod
    def constant(cls, domain, c):
        return cls(domain, [((0,) * domain.dim, c)])

    @classmethod
    def max_of(cls, domain, pieces):
        return cls(domain, pieces, "max")

    @classmethod
    def min_of(cls, domain, pieces):
        return cls(domain, pieces, "min")

    @classmethod
    def from_json(cls, domain, obj):
        """Accept ``{"kind": "max"|"min", "pieces": [...]}`` or a bare list.

        Each piece is ``{"gradient": [...], "constant": c}`` or a pair
        ``[gradient, constant]``.
        """
        kind = "max"
        if isinstance(obj, dict):
            kind = obj.get("kind", "max")
            obj = obj.get("pieces")
        if not isinstance(obj, list) or not obj:
            raise ValueError("PL function JSON needs a non-empty list of pieces")
        pieces = []
        for p in obj:
            if isinstance(p, dict):
                pieces.append((p["gradient"], p.get("constant", 0)))
            elif isinstance(p, list) and len(p) == 2:
                pieces.append((p[0], p[1]))
            else:
                raise ValueError(f"cannot read affine piece {p!r}")
        return cls(domain, pieces, kind)

    def to_json(self):
        return {
            "kind": self.kind,
            "pieces": [
                {"gradient": [_fmt(x) for x in g], "constant": _fmt(c)} for g, c in self.pieces
            ],
        }

    # structure ------------------------------------------------------------------

    @cached_property
    def cells(self):
        """``(cell, (grad, const))`` for every piece with a full-dimensional cell."""
        P = self.domain
        sign = 1 if self.kind == "max" else -1
        out = []
        for k, (gk, ck) in enumerate(self._raw):
            normals = [n for n, _ in P.facets]
            offsets = [o for _, o in P.facets]
            empty = False
            for j, (gj, cj) in enumerate(self._raw):
                if j == k:
                    continue
                n = tuple(sign * (a - b) for a, b in zip(gk, gj))
                off = sign * (ck - cj)
                if not any(n):
                    if off < 0:
                        empty = True
                        break
                    continue
                normals.append(n)
                offsets.append(off)
            if empty:
                continue
            try:
                cell = RationalPolytope.from_inequalities(normals, offsets)
            except DegeneratePolytopeError:
                continue
            out.append((cell, (gk, ck)))
        if not out:
            raise ArithmeticError("no piece has a full-dimensional cell")
        return tuple(out)

    @cached_property
    def pieces(self):
        return tuple(p for _, p in self.cells)

    @property
    def dim(self):
        return self.domain.dim

    @cached_property
    def is_affine(self):
        return len(self.pieces) == 1

    @property
    def is_convex(self):
        return self.kind == "max" or self.is_affine

    @property
    def is_concave(self):
        return self.kind == "min" or self.is_affine

    def __call__(self, u):
        u = tuple(as_fraction(x) for x in u)
        vals = [dot(g, u) + c for g, c in self.pieces]
        return max(vals) if self.kind == "max" else min(vals)

    def __eq__(self, other):
        if not isinstance(other, PLFunction) or other.domain != self.domain:
            return NotImplemented
        if self.is_affine and other.is_affine:
            return self.pieces == other.pieces
        return self.kind == other.kind and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.kind if not self.is_affine else "affine", self.pieces))

    def __repr__(self):
        return f"PLFunction(kind={self.kind!r}, pieces={len(self._raw)})"

    @cached_property
    def vertices(self):
        """Vertices of the induced subdivision of the domain."""
        pts = set()
        for cell, _ in self.cells:
            pts.update(cell.vertices)
        return tuple(sorted(pts))

    @cached_property
    def max_value(self):
        return max(self(v) for v in self.vertices)

    @cached_property
    def min_value(self):
        return min(self(v) for v in self.vertices)

    @cached_property
    def integral(self):
        return sum((cell.integrate_affine(g, c) for cell, (g, c) in self.cells), Fraction(0))

    @cached_property
    def mean(self):
        return self.integral / self.domain.volume

    @cached_property
    def second_moment(self):
        """``int_P f^2 / vol(P)``, exact on every simplex of every cell."""
        d = self.dim
        total = Fraction(0)
        for cell, (g, c) in self.cells:
            for s in cell.simplices:
                vals = [dot(g, p) + c for p in s]
                sq = sum(vals[i] * vals[j] for i in range(len(vals)) for j in range(i, len(vals)))
                total += simplex_volume(s) * 2 * sq / ((d + 1) * (d + 2))
        return total / self.domain.volume

    @cached_property
    def boundary_integral(self):
        """``sum_F int_F f dsigma`` with the lattice boundary measure."""
        P = self.domain
        total = Fraction(0)
        for i, (n, o) in enumerate(P.facets):
            for cell, (g, c) in self.cells:
                face = [v for v in cell.vertices if dot(n, v) == -o]
                if len(face) < P.dim:
                    continue
                if P.dim == 1:
                    total += dot(g, face[0]) + c
                    continue
                if rank([tuple(a - b for a, b in zip(v, face[0])) for v in face[1:]]) < P.dim - 1:
                    continue
                meas = _facet_measure(face, n)
                total += meas * (dot(g, _facet_centroid(face, n)) + c)
        return total

    # algebra --------------------------------------------------------------------

    def _with(self, pieces, kind=None):
        return PLFunction(self.domain, pieces, kind or self.kind)

    def add_affine(self, grad, const=0):
        """``f + <grad, .> + const``; the subdivision is unchanged."""
        grad = tuple(as_fraction(x) for x in grad)
        const = as_fraction(const)
        new = self._with([(tuple(a + b for a, b in zip(g, grad)), c + const) for g, c in self.pieces])
        # cells only move by the common affine term, so reuse them
        new.__dict__["cells"] = tuple(
            (cell, (tuple(a + b for a, b in zip(g, grad)), c + const)) for cell, (g, c) in self.cells
        )
        return new

    def __add__(self, other):
        return self.add_affine((0,) * self.dim, other)

    def negate(self):
        kind = "min" if self.kind == "max" else "max"
        new = self._with([(tuple(-a for a in g), -c) for g, c in self.pieces], kind)
        new.__dict__["cells"] = tuple(
            (cell, (tuple(-a for a in g), -c)) for cell, (g, c) in self.cells
        )
        return new

    def scale(self, b):
        b = as_fraction(b)
        if b <= 0:
            raise ValueError("scale factor must be positive")
        new = self._with([(tuple(b * a for a in g), b * c) for g, c in self.pieces])
        new.__dict__["cells"] = tuple(
            (cell, (tuple(b * a for a in g), b * c)) for cell, (g, c) in self.cells
        )
        return new

    # lattice sampling -------------------------------------------------------------

    @cached_property
    def _common_denominator(self):
        den = 1
        for g, c in self.pieces:
            for x in g + (c,):
                den = _lcm(den, x.denominator)
        return den

    def integer_forms(self, k):
        """Integer data ``(grads, consts, D)`` with
        ``D * k * f(a / k) = max_j (grads[j] . a + consts[j])`` for kind max
        (``min`` for kind min)."""
        D = self._common_denominator
        grads = [tuple(int(x * D) for x in g) for g, _ in self.pieces]
        consts = [int(c * D * k) for _, c in self.pieces]
        return grads, consts, D

    def scaled_values(self, points, k, shift=None):
        """``D * (k * f(a/k) - <a, shift>)`` for integer points ``a``, with
        ``D`` a common denominator; returns ``(values, D)``.

        The shift must be such that ``D * shift`` is integral; callers pass a
        denominator-compatible function via :meth:`with_denominator`.
        """
        grads, consts, D = self.integer_forms(k)
        if shift is not None:
            s = [x * D for x in shift]
            if any(x.denominator != 1 for x in s):
                raise ValueError("shift is not compatible with the common denominator")
            grads = [tuple(a - int(b) for a, b in zip(g, s)) for g in grads]
        if self.kind == "max":
            vals, _ = kernels.max_affine_int(points, grads, consts)
        else:
            neg, _ = kernels.max_affine_int(
                points, [tuple(-a for a in g) for g in grads], [-c for c in consts]
            )
            vals = [-v for v in neg]
        return vals, D

    def with_denominator(self, extra):
        """Copy whose common denominator is also divisible by ``extra``."""
        new = self._with(self.pieces)
        new.__dict__["cells"] = self.cells
        new.__dict__["_common_denominator"] = _lcm(self._common_denominator, extra)
        return new


def _fmt(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def random_pl(domain, rng=None, kind="min", pieces=3, grad_range=2, denominator=4):
    """Random PL function in which every piece has a full-dimensional cell.

    Gradients are small integers and constants lie on ``(1/denominator) Z``,
    so cell vertices keep small denominators.  Used by property tests and the
    semistability audit.
    """
    rng = rng or random.Random(0)
    d = domain.dim
    f = None
    for _ in range(500):
        out = {
            (
                tuple(Fraction(rng.randint(-grad_range, grad_range)) for _ in range(d)),
                Fraction(rng.randint(-2 * denominator, 2 * denominator), denominator),
            )
            for _ in range(pieces)
        }
        f = PLFunction(domain, out, kind)
        if len(f.pieces) == pieces:
            return f
    return f
