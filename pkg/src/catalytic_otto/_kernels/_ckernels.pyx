# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for protocol enumeration and cycle-map evaluation.

Each function mirrors the one of the same name in ``_pykernels`` and must
return identical arrays (same row order, same vertex order).
"""
import numpy as np


cdef Py_ssize_t _telephone(Py_ssize_t m):
    # number of partial matchings (involutions) on m points
    cdef Py_ssize_t a = 1, b = 1, c, k
    if m <= 0:
        return 1
    for k in range(2, m + 1):
        c = b + (k - 1) * a
        a = b
        b = c
    return b


def partition_size(Py_ssize_t n, Py_ssize_t first):
    return _telephone(n - first - 2)


cdef void _dfs(Py_ssize_t[::1] img, Py_ssize_t n, Py_ssize_t last,
               Py_ssize_t[:, ::1] out, Py_ssize_t* row) noexcept nogil:
    cdef Py_ssize_t c, e, v
    for v in range(n):
        out[row[0], v] = img[v]
    row[0] += 1
    for c in range(last + 1, n):
        if img[c] != c:
            continue
        for e in range(c + 1, n):
            if img[e] != e:
                continue
            img[c] = e
            img[e] = c
            _dfs(img, n, c, out, row)
            img[c] = c
            img[e] = e


def matching_images(Py_ssize_t n, Py_ssize_t a, Py_ssize_t b):
    cdef Py_ssize_t count = _telephone(n - a - 2)
    out = np.empty((count, n), dtype=np.intp)
    img_arr = np.arange(n, dtype=np.intp)
    cdef Py_ssize_t[:, ::1] o = out
    cdef Py_ssize_t[::1] img = img_arr
    cdef Py_ssize_t row = 0
    img[a] = b
    img[b] = a
    with nogil:
        _dfs(img, n, a, o, &row)
    return out


def linear_data(Py_ssize_t[:, ::1] images, double[::1] weights, Py_ssize_t d,
                double omega_h, double omega_c):
    cdef Py_ssize_t N = images.shape[0], n = images.shape[1]
    M_arr = np.zeros((N, d, d))
    qh_arr = np.zeros((N, d))
    qc_arr = np.zeros((N, d))
    cdef double[:, :, ::1] M = M_arr
    cdef double[:, ::1] qh = qh_arr
    cdef double[:, ::1] qc = qc_arr
    cdef Py_ssize_t r, l, m, ij, ij2, k, k2
    cdef double wl
    with nogil:
        for r in range(N):
            for l in range(n):
                ij = l // d
                k = l % d
                m = images[r, l]
                ij2 = m // d
                k2 = m % d
                wl = weights[ij]
                M[r, k2, k] += wl
                qh[r, k] += wl * (omega_h * ((ij >> 1) - (ij2 >> 1)))
                qc[r, k] += wl * (omega_c * ((ij & 1) - (ij2 & 1)))
    return M_arr, qh_arr, qc_arr


cdef void _gth(double[:, ::1] A, Py_ssize_t n, double[::1] x) noexcept nogil:
    cdef Py_ssize_t k, i, j
    cdef double scale, total
    for k in range(n):
        x[k] = 0.0
    for k in range(n - 1):
        scale = 0.0
        for j in range(k + 1, n):
            scale += A[k, j]
        if scale <= 0.0:
            n = k + 1
            break
        for i in range(k + 1, n):
            A[i, k] /= scale
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i, j] += A[i, k] * A[k, j]
    x[n - 1] = 1.0
    for k in range(n - 2, -1, -1):
        x[k] = 0.0
        for i in range(k + 1, n):
            x[k] += x[i] * A[i, k]
    total = 0.0
    for k in range(n):
        total += x[k]
    for k in range(n):
        x[k] /= total


def fixed_point_vertices(double[:, :, ::1] M):
    cdef Py_ssize_t N = M.shape[0], d = M.shape[1]
    counts_arr = np.zeros(N, dtype=np.intp)
    V_arr = np.zeros((N, d, d))
    reach_arr = np.zeros((d, d), dtype=np.uint8)
    A_arr = np.zeros((d, d))
    x_arr = np.zeros(d)
    members_arr = np.zeros(d, dtype=np.intp)
    cdef Py_ssize_t[::1] counts = counts_arr
    cdef double[:, :, ::1] V = V_arr
    cdef unsigned char[:, ::1] reach = reach_arr
    cdef double[:, ::1] A = A_arr
    cdef double[::1] x = x_arr
    cdef Py_ssize_t[::1] members = members_arr
    cdef Py_ssize_t r, k, l, m, i, j, s, nv
    cdef bint closed
    with nogil:
        for r in range(N):
            for k in range(d):
                for l in range(d):
                    reach[k, l] = (k == l) or (M[r, l, k] > 0.0)
            for m in range(d):
                for k in range(d):
                    if reach[k, m]:
                        for l in range(d):
                            if reach[m, l]:
                                reach[k, l] = 1
            nv = 0
            for k in range(d):
                closed = True
                for l in range(d):
                    if reach[k, l] and (l < k or not reach[l, k]):
                        closed = False
                        break
                if not closed:
                    continue
                s = 0
                for l in range(d):
                    if reach[k, l]:
                        members[s] = l
                        s += 1
                for i in range(s):
                    for j in range(s):
                        A[i, j] = M[r, members[j], members[i]]
                _gth(A, s, x)
                for i in range(s):
                    V[r, nv, members[i]] = x[i]
                nv += 1
            counts[r] = nv
    return counts_arr, V_arr
