"""Small exact linear algebra over ``Fraction``.

Dimensions here never exceed five, so plain Gaussian elimination is fine.
"""
from fractions import Fraction
from math import gcd

__all__ = ["as_fraction", "det", "solve", "rank", "nullspace", "dot", "primitive"]


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"refusing inexact value {x!r}; pass an int, Fraction or 'p/q' string")


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _echelon(rows):
    m = [list(r) for r in rows]
    if not m:
        return m, [], 1
    ncols = len(m[0])
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            sign = -sign
        piv = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots, sign


def det(rows):
    rows = [[as_fraction(x) for x in r] for r in rows]
    n = len(rows)
    m, pivots, sign = _echelon(rows)
    if len(pivots) < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def rank(rows):
    rows = [[as_fraction(x) for x in r] for r in rows]
    return len(_echelon(rows)[1])


def solve(a, b):
    """Solve the square system ``a x = b``; returns None when singular."""
    n = len(a)
    aug = [[as_fraction(x) for x in row] + [as_fraction(bi)] for row, bi in zip(a, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def nullspace(rows, ncols):
    """Basis of ``{x : rows @ x = 0}``."""
    rows = [[as_fraction(x) for x in r] for r in rows]
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def primitive(v):
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = [as_fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return [x // g for x in ints]
