# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_kernels_py``. Same signatures, same results."""

from libc.math cimport fabs


def convolve(list a, list b):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    cdef object x
    cdef list out
    if na == 0 or nb == 0:
        return []
    out = [0] * (na + nb - 1)
    for i in range(na):
        x = a[i]
        if x == 0:
            continue
        for j in range(nb):
            out[i + j] = out[i + j] + x * b[j]
    return out


def sign_changes(seq):
    cdef int count = 0, prev = 0, s
    for c in seq:
        if c > 0:
            s = 1
        elif c < 0:
            s = -1
        else:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def negative_index_ratio(double h, long max_iter):
    cdef double u = h
    cdef long i = 1
    if h + u <= 0.0:
        return 1
    while i < max_iter:
        i += 1
        u = (h * u - 1.0) / (h + u)
        if h + u <= 0.0:
            return i
    return -1


def aberth(coeffs, z, int max_iter, double tol):
    cdef int n = len(coeffs) - 1
    cdef int it, k, j
    cdef double complex[::1] c
    cdef double complex[::1] zz
    cdef double complex zk, p, dp, ratio, s, w, diff
    cdef double worst, scale, rel
    import numpy as np
    c_arr = np.asarray(coeffs, dtype=np.complex128).copy()
    z_arr = np.asarray(z, dtype=np.complex128).copy()
    c = c_arr
    zz = z_arr
    for it in range(1, max_iter + 1):
        worst = 0.0
        for k in range(n):
            zk = zz[k]
            p = c[n]
            dp = 0
            for j in range(n - 1, -1, -1):
                dp = dp * zk + p
                p = p * zk + c[j]
            if p == 0:
                continue
            if dp == 0:
                dp = 1e-300
            ratio = p / dp
            s = 0
            for j in range(n):
                if j != k:
                    diff = zk - zz[j]
                    if diff != 0:
                        s = s + 1.0 / diff
            w = ratio / (1.0 - ratio * s)
            zz[k] = zk - w
            scale = abs(zk)
            rel = abs(w) / (scale if scale > 1.0 else 1.0)
            if rel > worst:
                worst = rel
        if worst <= tol:
            return [complex(v) for v in z_arr], it, True
    return [complex(v) for v in z_arr], max_iter, False


def fraction_free_pivot(list rows, Py_ssize_t r, Py_ssize_t s, object d):
    cdef list row_r = rows[r]
    cdef list row, new
    cdef object piv = row_r[s]
    cdef object f
    cdef Py_ssize_t i, j, m = len(rows), n = len(row_r)
    for i in range(m):
        if i == r:
            continue
        row = rows[i]
        f = row[s]
        if f == 0:
            if piv != d:
                new = [None] * n
                for j in range(n):
                    new[j] = row[j] * piv // d
                rows[i] = new
        else:
            new = [None] * n
            for j in range(n):
                new[j] = (row[j] * piv - f * row_r[j]) // d
            rows[i] = new
    return piv
