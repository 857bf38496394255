"""Pure Python / numpy versions of the compiled kernels.

Row order, vertex order and floating-point summation order follow the
compiled module so that both backends agree bit for bit on the same input.
"""
import numpy as np


def _telephone(m):
    a, b = 1, 1
    for k in range(2, m + 1):
        a, b = b, b + (k - 1) * a
    return b


def partition_size(n, first):
    return _telephone(n - first - 2)


def matching_images(n, a, b):
    """All partial matchings on ``n`` points whose lowest swap is ``(a, b)``.

    Rows are image arrays of the involution, in lexicographic order of the
    sorted swap lists.
    """
    img = list(range(n))
    img[a], img[b] = b, a
    rows = []

    def dfs(last):
        rows.append(img.copy())
        for c in range(last + 1, n):
            if img[c] != c:
                continue
            for e in range(c + 1, n):
                if img[e] != e:
                    continue
                img[c], img[e] = e, c
                dfs(c)
                img[c], img[e] = c, e

    dfs(a)
    return np.array(rows, dtype=np.intp).reshape(len(rows), n)


def linear_data(images, weights, d, omega_h, omega_c):
    images = np.ascontiguousarray(images, dtype=np.intp)
    N, n = images.shape
    ell = np.arange(n)
    ij, k = np.divmod(ell, d)
    ij2, k2 = np.divmod(images, d)
    wl = np.broadcast_to(np.asarray(weights, dtype=float)[ij], (N, n))
    dh = omega_h * ((ij >> 1) - (ij2 >> 1))
    dc = omega_c * ((ij & 1) - (ij2 & 1))

    M = np.zeros((N, d, d))
    qh = np.zeros((N, d))
    qc = np.zeros((N, d))
    rows = np.broadcast_to(np.arange(N)[:, None], (N, n))
    kk = np.broadcast_to(k, (N, n))
    # add.at accumulates in index order, matching the compiled loop
    np.add.at(M, (rows, k2, kk), wl)
    np.add.at(qh, (rows, kk), wl * dh)
    np.add.at(qc, (rows, kk), wl * dc)
    return M, qh, qc


def _gth(A):
    A = A.copy()
    n = A.shape[0]
    x = np.zeros(n, dtype=A.dtype)
    for k in range(n - 1):
        scale = 0.0
        for j in range(k + 1, n):
            scale += A[k, j]
        if scale <= 0.0:
            n = k + 1
            break
        A[k + 1:n, k] /= scale
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i, j] += A[i, k] * A[k, j]
    x[n - 1] = 1.0
    for k in range(n - 2, -1, -1):
        acc = 0.0
        for i in range(k + 1, n):
            acc += x[i] * A[i, k]
        x[k] = acc
    total = x.dtype.type(0)
    for v in x:
        total += v
    return x / total


def fixed_point_vertices(M):
    M = np.ascontiguousarray(M, dtype=float)
    N, d, _ = M.shape
    counts = np.zeros(N, dtype=np.intp)
    V = np.zeros((N, d, d))
    eye = np.eye(d, dtype=bool)
    for r in range(N):
        reach = eye | (M[r].T > 0.0)
        for m in range(d):
            reach |= np.outer(reach[:, m], reach[m])
        nv = 0
        for k in range(d):
            out = reach[k]
            if out[:k].any() or not reach[out, k].all():
                continue
            members = np.flatnonzero(out)
            x = _gth(M[r][np.ix_(members, members)].T)
            V[r, nv, members] = x
            nv += 1
        counts[r] = nv
    return counts, V
