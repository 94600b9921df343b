"""Hot integer kernels with a compiled backend and a pure-Python fallback.

The compiled module works on int64.  Inputs whose magnitudes could overflow
are routed to the Python implementation, which uses unbounded ints, so both
paths return identical results.  Set ``TORICSTAB_PURE_PYTHON=1`` to force the
fallback.
"""
import os

from . import _pykernels

__all__ = ["BACKEND", "lattice_points", "max_affine_int", "python_backend", "compiled_backend"]

_LIMIT = 1 << 62

compiled_backend = None
if os.environ.get("TORICSTAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

python_backend = _pykernels
BACKEND = "compiled" if compiled_backend is not None else "python"


def _absmax(rows):
    return max((abs(int(x)) for r in rows for x in r), default=0)


def lattice_points(normals, rhs, lo, hi, cap):
    if not normals:
        # a trivially satisfied row keeps array shapes two-dimensional
        normals, rhs = [(0,) * len(lo)], [0]
    if compiled_backend is not None:
        box = max(_absmax([lo]), _absmax([hi]))
        coef = _absmax(normals)
        d = len(lo)
        if (coef * box * d + _absmax([rhs])) < _LIMIT:
            return compiled_backend.lattice_points(normals, rhs, lo, hi, cap)
    return _pykernels.lattice_points(normals, rhs, lo, hi, cap)


def max_affine_int(points, grads, consts):
    if not points:
        return [], []
    if compiled_backend is not None and grads:
        d = len(grads[0])
        bound = _absmax(points) * _absmax(grads) * d + _absmax([consts])
        if bound < _LIMIT:
            return compiled_backend.max_affine_int(points, grads, consts)
    return _pykernels.max_affine_int(points, grads, consts)
