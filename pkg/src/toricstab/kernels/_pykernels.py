"""Pure-Python kernels; arbitrary-precision ints, no overflow concerns."""

__all__ = ["lattice_points", "max_affine_int"]


def _ceil_div(a, b):
    return -((-a) // b)


def _last_axis_range(normals, rhs, prefix, lo, hi):
    """Interval of the last coordinate compatible with every inequality."""
    d = len(lo)
    low, high = lo[d - 1], hi[d - 1]
    for a, r in zip(normals, rhs):
        s = r
        for i in range(d - 1):
            s -= a[i] * prefix[i]
        ad = a[d - 1]
        # ad * x >= s
        if ad > 0:
            low = max(low, _ceil_div(s, ad))
        elif ad < 0:
            high = min(high, (-s) // (-ad))
        elif s > 0:
            return 1, 0
        if low > high:
            return 1, 0
    return low, high


def lattice_points(normals, rhs, lo, hi, cap):
    """Integer points ``u`` of the box ``[lo, hi]`` with ``normals @ u >= rhs``.

    Points come out in lexicographic order.  Raises ``OverflowError`` once the
    count exceeds ``cap``.
    """
    normals = [tuple(int(x) for x in a) for a in normals]
    rhs = [int(r) for r in rhs]
    lo = [int(x) for x in lo]
    hi = [int(x) for x in hi]
    d = len(lo)
    out = []
    if any(l > h for l, h in zip(lo, hi)):
        return out
    prefix = list(lo[: d - 1])
    while True:
        low, high = _last_axis_range(normals, rhs, prefix, lo, hi)
        if low <= high:
            if len(out) + high - low + 1 > cap:
                raise OverflowError(f"more than {cap} lattice points")
            base = tuple(prefix)
            out.extend(base + (x,) for x in range(low, high + 1))
        # odometer over the first d-1 coordinates
        i = d - 2
        while i >= 0:
            prefix[i] += 1
            if prefix[i] <= hi[i]:
                break
            prefix[i] = lo[i]
            i -= 1
        if i < 0:
            return out


def max_affine_int(points, grads, consts):
    """For each point ``p`` return ``max_k (grads[k] . p + consts[k])`` and the
    first maximizing ``k``."""
    grads = [tuple(int(x) for x in g) for g in grads]
    consts = [int(c) for c in consts]
    values = []
    index = []
    for p in points:
        best = None
        arg = 0
        for k, (g, c) in enumerate(zip(grads, consts)):
            v = c
            for gi, pi in zip(g, p):
                v += gi * pi
            if best is None or v > best:
                best = v
                arg = k
        values.append(best)
        index.append(arg)
    return values, index
