"""Pure-Python implementations of the hot inner loops.

Every function here has a twin with the same signature in ``_kernels.pyx``.
``poscert.kernels`` picks the compiled module when it imports and falls back
to this one otherwise.
"""


def convolve(a, b):
    """Coefficient convolution of two dense ascending sequences."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def sign_changes(seq):
    """Sign alternations in ``seq`` after dropping zeros."""
    count = 0
    prev = 0
    for c in seq:
        if c > 0:
            s = 1
        elif c < 0:
            s = -1
        else:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def negative_index_ratio(h, max_iter):
    """First i >= 1 where the cofactor recurrence goes non-positive, for p/q = h.

    Iterates u_i = t_i - h where t_i = C_i / C_{i-1} (q = 1, p = h), i.e.
    u_i = (h u_{i-1} - 1) / (h + u_{i-1}); t_i <= 0 iff u_i <= -h.
    Returns -1 if the bound ``max_iter`` is reached first.
    """
    u = h
    i = 1
    if h + u <= 0.0:
        return 1
    while i < max_iter:
        i += 1
        u = (h * u - 1.0) / (h + u)
        if h + u <= 0.0:
            return i
    return -1


def aberth(coeffs, z, max_iter, tol):
    """Aberth-Ehrlich simultaneous iteration, Gauss-Seidel ordering.

    ``coeffs`` ascending complex coefficients, ``z`` initial guesses (modified
    copy returned). Returns ``(roots, iterations, converged)``.
    """
    n = len(coeffs) - 1
    z = list(z)
    for it in range(1, max_iter + 1):
        worst = 0.0
        for k in range(n):
            zk = z[k]
            p = coeffs[n]
            dp = 0j
            for j in range(n - 1, -1, -1):
                dp = dp * zk + p
                p = p * zk + coeffs[j]
            if p == 0:
                continue
            if dp == 0:
                dp = 1e-300 + 0j
            ratio = p / dp
            s = 0j
            for j in range(n):
                if j != k:
                    diff = zk - z[j]
                    if diff != 0:
                        s += 1.0 / diff
            w = ratio / (1.0 - ratio * s)
            z[k] = zk - w
            scale = abs(zk)
            rel = abs(w) / (scale if scale > 1.0 else 1.0)
            if rel > worst:
                worst = rel
        if worst <= tol:
            return z, it, True
    return z, max_iter, False


def fraction_free_pivot(rows, r, s, d):
    """Integer-preserving Gauss-Jordan pivot on ``rows[r][s]``, in place.

    All entries share the common denominator ``d``; the new common
    denominator ``rows[r][s]`` is returned. Every division is exact.
    """
    row_r = rows[r]
    piv = row_r[s]
    for i in range(len(rows)):
        if i == r:
            continue
        row = rows[i]
        f = row[s]
        if f == 0:
            if piv != d:
                rows[i] = [a * piv // d for a in row]
        else:
            rows[i] = [(a * piv - f * b) // d for a, b in zip(row, row_r)]
    return piv
