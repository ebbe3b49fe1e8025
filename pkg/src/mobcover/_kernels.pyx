# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the two hot loops: directed Hausdorff reduction and
the farthest-point selection sweep. Semantics (including lowest-index
tie-breaking) mirror mobcover._kernels_py.

Distances use the difference form (robust near zero, exact 0 for identical
rows); the FPS gap updates go through BLAS dgemv, keeping the scan loops in
C with no per-step temporaries.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, INFINITY
from scipy.linalg.cython_blas cimport dgemm, dgemv

NAME = "compiled"


cdef inline void _matvec(const double[:, ::1] mat, const double *x,
                         double *out) noexcept nogil:
    # out = mat @ x for a C-contiguous (n, d) matrix: in Fortran view mat is
    # (d, n) with lda=d, so trans='T' gives the row-major product.
    cdef int d = <int>mat.shape[1]
    cdef int n = <int>mat.shape[0]
    cdef int inc = 1
    cdef double one = 1.0, zero = 0.0
    dgemv("T", &d, &n, &one, <double*><void*>&mat[0, 0], &d,
          <double*><void*>x, &inc, &zero, out, &inc)


cdef inline double _sqdist(const double *x, const double *y,
                           Py_ssize_t d) noexcept nogil:
    # Four fixed-order partial sums: deterministic and wide enough for the
    # compiler to keep the pipeline full under strict IEEE semantics.
    cdef double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0, diff
    cdef Py_ssize_t k = 0
    while k + 4 <= d:
        diff = x[k] - y[k]
        a0 += diff * diff
        diff = x[k + 1] - y[k + 1]
        a1 += diff * diff
        diff = x[k + 2] - y[k + 2]
        a2 += diff * diff
        diff = x[k + 3] - y[k + 3]
        a3 += diff * diff
        k += 4
    while k < d:
        diff = x[k] - y[k]
        a0 += diff * diff
        k += 1
    return (a0 + a1) + (a2 + a3)


def directed_hausdorff(const double[:, ::1] a, const double[:, ::1] b):
    """max over rows of a of (min over rows of b of Euclidean distance)."""
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], d = a.shape[1]
    cdef Py_ssize_t i, j
    cdef double best_sq, acc, worst_sq = 0.0
    with nogil:
        for i in range(na):
            best_sq = INFINITY
            for j in range(nb):
                acc = _sqdist(&a[i, 0], &b[j, 0], d)
                if acc < best_sq:
                    best_sq = acc
            if best_sq > worst_sq:
                worst_sq = best_sq
    return sqrt(worst_sq)


def seed_gaps(const double[:, ::1] v, const cnp.intp_t[::1] seed):
    """Per-row min over seed rows of the cosine gap 1 - dot(v_i, v_s)."""
    cdef Py_ssize_t n = v.shape[0], d = v.shape[1], m = seed.shape[0]
    cdef Py_ssize_t i, j
    cdef double gap
    cdef int mi = <int>m, ni = <int>n, di = <int>d, inc = 1
    cdef double one = 1.0, zero = 0.0
    out = np.full(n, INFINITY, dtype=np.float64)
    gathered = np.empty((m, d), dtype=np.float64)
    dots = np.empty((n, m), dtype=np.float64)
    cdef double[::1] out_v = out
    cdef double[:, ::1] gath_v = gathered
    cdef double[:, ::1] dots_v = dots
    with nogil:
        for j in range(m):
            for i in range(d):
                gath_v[j, i] = v[seed[j], i]
        # dots (n, m) = V @ gathered^T: in Fortran views, dots_f (m, n) =
        # gathered_f^T (m, d) * v_f (d, n).
        dgemm("T", "N", &mi, &ni, &di, &one, &gath_v[0, 0], &di,
              <double*><void*>&v[0, 0], &di, &zero, &dots_v[0, 0], &mi)
        for i in range(n):
            gap = INFINITY
            for j in range(m):
                if 1.0 - dots_v[i, j] < gap:
                    gap = 1.0 - dots_v[i, j]
            out_v[i] = gap
    return out


def fps(const double[:, ::1] v, double[::1] gaps, cnp.uint8_t[::1] selected,
        Py_ssize_t budget):
    """Greedy farthest-point loop over the cosine gap 1 - cos.

    Updates `gaps` and `selected` in place; ties at the argmax go to the
    lowest index. Returns (picked indices, gap of each pick, largest gap
    left over unselected rows, 0.0 when none remain).
    """
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t t, i, best_i
    cdef double best_gap, step, final
    out_idx = np.empty(budget, dtype=np.int64)
    out_gaps = np.empty(budget, dtype=np.float64)
    dots = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] idx_v = out_idx
    cdef double[::1] gap_v = out_gaps
    cdef double[::1] dots_v = dots
    with nogil:
        for t in range(budget):
            best_i = -1
            best_gap = -INFINITY
            for i in range(n):
                if not selected[i] and gaps[i] > best_gap:
                    best_gap = gaps[i]
                    best_i = i
            idx_v[t] = best_i
            gap_v[t] = best_gap
            selected[best_i] = 1
            _matvec(v, &v[best_i, 0], &dots_v[0])
            for i in range(n):
                step = 1.0 - dots_v[i]
                if step < gaps[i]:
                    gaps[i] = step
        final = -INFINITY
        for i in range(n):
            if not selected[i] and gaps[i] > final:
                final = gaps[i]
    return out_idx, out_gaps, (final if final > -INFINITY else 0.0)
