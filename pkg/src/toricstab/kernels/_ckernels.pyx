# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels on int64; callers guarantee inputs fit without overflow."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64


cdef inline i64 _ceil_div(i64 a, i64 b) nogil:
    # b > 0
    if a >= 0:
        return (a + b - 1) // b
    return -((-a) // b)


cdef inline i64 _floor_div(i64 a, i64 b) nogil:
    # b > 0
    if a >= 0:
        return a // b
    return -((-a + b - 1) // b)


cdef int _range_last(const i64[:, ::1] normals, const i64[::1] rhs, i64[::1] prefix,
                     const i64[::1] lo, const i64[::1] hi, i64* low_out, i64* high_out) nogil:
    cdef Py_ssize_t nf = normals.shape[0]
    cdef Py_ssize_t d = lo.shape[0]
    cdef i64 low = lo[d - 1]
    cdef i64 high = hi[d - 1]
    cdef i64 s, ad
    cdef Py_ssize_t f, i
    for f in range(nf):
        s = rhs[f]
        for i in range(d - 1):
            s -= normals[f, i] * prefix[i]
        ad = normals[f, d - 1]
        if ad > 0:
            s = _ceil_div(s, ad)
            if s > low:
                low = s
        elif ad < 0:
            s = _floor_div(-s, -ad)
            if s < high:
                high = s
        elif s > 0:
            return 0
        if low > high:
            return 0
    low_out[0] = low
    high_out[0] = high
    return 1


def _scan(const i64[:, ::1] normals, const i64[::1] rhs, const i64[::1] lo,
          const i64[::1] hi, i64[:, ::1] out, bint fill):
    cdef Py_ssize_t d = lo.shape[0]
    cdef i64[::1] prefix = np.zeros(max(d - 1, 1), dtype=np.int64)
    cdef Py_ssize_t i, j
    cdef i64 low = 0, high = 0, x
    cdef Py_ssize_t count = 0
    for i in range(d - 1):
        prefix[i] = lo[i]
    while True:
        if _range_last(normals, rhs, prefix, lo, hi, &low, &high):
            if fill:
                x = low
                while x <= high:
                    for j in range(d - 1):
                        out[count, j] = prefix[j]
                    out[count, d - 1] = x
                    count += 1
                    x += 1
            else:
                count += high - low + 1
        i = d - 2
        while i >= 0:
            prefix[i] += 1
            if prefix[i] <= hi[i]:
                break
            prefix[i] = lo[i]
            i -= 1
        if i < 0:
            return count


def lattice_points(normals, rhs, lo, hi, cap):
    cdef i64[:, ::1] a = np.ascontiguousarray(normals, dtype=np.int64)
    cdef i64[::1] r = np.ascontiguousarray(rhs, dtype=np.int64)
    cdef i64[::1] l = np.ascontiguousarray(lo, dtype=np.int64)
    cdef i64[::1] h = np.ascontiguousarray(hi, dtype=np.int64)
    d = l.shape[0]
    for i in range(d):
        if l[i] > h[i]:
            return []
    dummy = np.zeros((1, d), dtype=np.int64)
    n = _scan(a, r, l, h, dummy, False)
    if n > cap:
        raise OverflowError(f"more than {cap} lattice points")
    out = np.zeros((n, d), dtype=np.int64)
    _scan(a, r, l, h, out, True)
    return [tuple(row) for row in out.tolist()]


def max_affine_int(points, grads, consts):
    cdef i64[:, ::1] p = np.ascontiguousarray(points, dtype=np.int64).reshape(len(points), -1)
    cdef i64[:, ::1] g = np.ascontiguousarray(grads, dtype=np.int64).reshape(len(grads), -1)
    cdef i64[::1] c = np.ascontiguousarray(consts, dtype=np.int64)
    cdef Py_ssize_t n = p.shape[0], k = g.shape[0], d = g.shape[1]
    values = np.empty(n, dtype=np.int64)
    index = np.empty(n, dtype=np.int64)
    cdef i64[::1] vv = values
    cdef i64[::1] ii = index
    cdef Py_ssize_t a, b, t
    cdef i64 best, v
    cdef Py_ssize_t arg
    with nogil:
        for a in range(n):
            best = 0
            arg = -1
            for b in range(k):
                v = c[b]
                for t in range(d):
                    v += g[b, t] * p[a, t]
                if arg < 0 or v > best:
                    best = v
                    arg = b
            vv[a] = best
            ii[a] = arg
    return values.tolist(), index.tolist()
