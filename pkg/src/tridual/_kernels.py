"""Compiled inner loops for symmetric tridiagonal eigenvalue problems.

Both kernels take the diagonal ``d`` (length n) and off-diagonal ``e``
(length n - 1) of a real symmetric tridiagonal matrix.
"""

import numpy as np
from numba import njit

# status codes returned by the kernels
OK = 0
STALLED = 1
NO_CONVERGENCE = 2


@njit(cache=True)
def sturm_count(d, e2, x, pivmin):
    """Number of eigenvalues strictly below ``x``.

    ``e2`` holds the squared off-diagonal. Counts negative pivots of the
    LDL^T factorisation of T - xI.
    """
    n = d.shape[0]
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def bisect_range(d, e, lo_index, hi_index, tol, max_iter):
    """Eigenvalues with indices ``lo_index <= k < hi_index`` by bisection.

    Returns (values, status). Intervals start from the Gershgorin bounds.
    """
    n = d.shape[0]
    e2 = np.empty(max(n - 1, 0))
    for i in range(n - 1):
        e2[i] = e[i] * e[i]

    glo = np.inf
    ghi = -np.inf
    scale = 0.0
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        glo = min(glo, d[i] - r)
        ghi = max(ghi, d[i] + r)
        scale = max(scale, abs(d[i]) + r)
    pivmin = max(scale, 1.0) * 1e-300
    # widen so that the end points strictly bracket the spectrum
    pad = 2.0 * np.finfo(np.float64).eps * max(scale, 1.0) + tol
    glo -= pad
    ghi += pad

    m = hi_index - lo_index
    out = np.empty(m)
    status = OK
    for idx in range(m):
        k = lo_index + idx
        lo = glo
        hi = ghi
        # a converged neighbour below tightens the lower end point
        if idx > 0:
            lo = max(lo, out[idx - 1] - 2.0 * tol)
        it = 0
        while hi - lo > 2.0 * tol:
            if it >= max_iter:
                return out, NO_CONVERGENCE
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                return out, STALLED
            if sturm_count(d, e2, mid, pivmin) > k:
                hi = mid
            else:
                lo = mid
            it += 1
        out[idx] = 0.5 * (lo + hi)
    return out, status


@njit(cache=True)
def ql_implicit(d, e, max_sweeps):
    """All eigenvalues by implicit-shift QL with Wilkinson shifts (tql1).

    Returns (values, status); values are unsorted.
    """
    n = d.shape[0]
    w = d.copy()
    f = np.zeros(n)
    for i in range(n - 1):
        f[i] = e[i]
    eps = np.finfo(np.float64).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(w[m]) + abs(w[m + 1])
                if abs(f[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it >= max_sweeps:
                return w, NO_CONVERGENCE
            it += 1
            g = (w[l + 1] - w[l]) / (2.0 * f[l])
            r = np.hypot(g, 1.0)
            g = w[m] - w[l] + f[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                ff = s * f[i]
                b = c * f[i]
                r = np.hypot(ff, g)
                f[i + 1] = r
                if r == 0.0:
                    w[i + 1] -= p
                    f[m] = 0.0
                    underflow = True
                    break
                s = ff / r
                c = g / r
                g = w[i + 1] - p
                r = (w[i] - g) * s + 2.0 * c * b
                p = s * r
                w[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            w[l] -= p
            f[l] = g
            f[m] = 0.0
    return w, OK
