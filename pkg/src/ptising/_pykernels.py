"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_ckernels`` module; used when
the extension is not built.  All matrix routines work in place on
C-contiguous ``complex128`` arrays.
"""

import math

import numpy as np

EPS = np.finfo(float).eps

# ---------------------------------------------------------------------------
# dispersion sums


def eps1_sums(eta, xi, k, w, order=2):
    """Weighted k-sums of ``eps_1`` and its field derivatives.

    Returns an ``(npts, 7)`` array with columns
    ``[S, S_eta, S_xi, S_eta_eta, S_xi_xi, S_eta_xi, min_k eps_1]`` where
    ``S = sum_k w_k eps_1(k; eta, xi)``.  Derivative columns are zero when
    ``order`` excludes them.
    """
    eta = np.ascontiguousarray(eta, dtype=float).ravel()
    xi = np.ascontiguousarray(xi, dtype=float).ravel()
    k = np.ascontiguousarray(k, dtype=float)
    w = np.ascontiguousarray(w, dtype=float)
    out = np.zeros((eta.size, 7))
    sh = np.sin(k / 2.0) ** 2
    sn2 = np.sin(k) ** 2
    chunk = max(1, 65536 // max(1, k.size))
    for start in range(0, eta.size, chunk):
        sl = slice(start, start + chunk)
        e = eta[sl, None]
        x = xi[sl, None]
        u = (e * e + x * x - 1.0) + 2.0 * sh
        b = np.sqrt(u * u + sn2)
        with np.errstate(divide="ignore", invalid="ignore"):
            bpu = np.where(u >= 0, b + u, sn2 / (b - u))
            bmu = np.where(u >= 0, sn2 / (b + u), b - u)
        q = 4.0 * e * e + 4.0 * sh + 2.0 * bmu
        ep = np.sqrt(q)
        out[sl, 0] = np.sum(w * ep, axis=1)
        out[sl, 6] = ep.min(axis=1)
        if order < 1:
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            qe = 4.0 * e * bpu / b
            qx = -4.0 * x * bmu / b
            out[sl, 1] = np.sum(w * (qe / (2.0 * ep)), axis=1)
            out[sl, 2] = np.sum(w * (qx / (2.0 * ep)), axis=1)
            if order < 2:
                continue
            p3 = sn2 / (b * b * b)
            ep3 = 4.0 * ep * ep * ep
            qee = 4.0 * bpu / b + 8.0 * e * e * p3
            qxx = -4.0 * bmu / b + 8.0 * x * x * p3
            qex = 8.0 * e * x * p3
            out[sl, 3] = np.sum(w * (qee / (2.0 * ep) - qe * qe / ep3), axis=1)
            out[sl, 4] = np.sum(w * (qxx / (2.0 * ep) - qx * qx / ep3), axis=1)
            out[sl, 5] = np.sum(w * (qex / (2.0 * ep) - qe * qx / ep3), axis=1)
    return out


# ---------------------------------------------------------------------------
# dense eigenvalues


def hessenberg_reduce(a):
    """Householder reduction of ``a`` to upper Hessenberg form, in place."""
    n = a.shape[0]
    for j in range(n - 2):
        x = a[j + 1:, j].copy()
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        xnorm = math.hypot(abs(x[0]), tail)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        alpha = -phase * xnorm
        x[0] -= alpha
        x /= np.linalg.norm(x)
        a[j + 1:, j:] -= 2.0 * np.outer(x, x.conj() @ a[j + 1:, j:])
        a[:, j + 1:] -= 2.0 * np.outer(a[:, j + 1:] @ x, x.conj())
        a[j + 1, j] = alpha
        a[j + 2:, j] = 0.0


def _cabs1(z):
    return abs(z.real) + abs(z.imag)


def _givens(x, y):
    if y == 0:
        return 1.0, 0j, x
    if x == 0:
        ay = abs(y)
        return 0.0, y.conjugate() / ay, complex(ay)
    ax = abs(x)
    nrm = math.hypot(ax, abs(y))
    phase = x / ax
    return ax / nrm, phase * y.conjugate() / nrm, phase * nrm


def _wilkinson(a, b, c, d):
    """Eigenvalue of ``[[a, b], [c, d]]`` closest to ``d``."""
    t = 0.5 * (a - d)
    disc = np.sqrt(t * t + b * c)
    den_p, den_m = t + disc, t - disc
    den = den_p if abs(den_p) >= abs(den_m) else den_m
    if den == 0:
        return d
    return d - b * c / den


def hqr_eigenvalues(h, max_iter):
    """Eigenvalues of an upper Hessenberg matrix by single-shift implicit QR.

    ``h`` is overwritten.  Returns ``(eigs, n_left)``: on success ``n_left`` is
    0; otherwise the leading ``n_left`` entries of ``eigs`` are unconverged.
    """
    n = h.shape[0]
    eigs = np.zeros(n, dtype=complex)
    if n == 0:
        return eigs, 0
    hnorm = float(np.abs(h).max()) or 1.0
    hi = n - 1
    its = 0
    total = 0
    while hi >= 0:
        low = hi
        while low > 0:
            s = _cabs1(h[low - 1, low - 1]) + _cabs1(h[low, low])
            if s == 0.0:
                s = hnorm
            if _cabs1(h[low, low - 1]) <= EPS * s:
                h[low, low - 1] = 0.0
                break
            low -= 1
        if low == hi:
            eigs[hi] = h[hi, hi]
            hi -= 1
            its = 0
            continue
        if total >= max_iter:
            return eigs, hi + 1
        if its in (10, 20):
            mu = h[hi, hi] + 0.75 * _cabs1(h[hi, hi - 1])
        else:
            mu = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        _qr_sweep(h, low, hi, mu)
        its += 1
        total += 1
    return eigs, 0


def _qr_sweep(h, low, hi, mu):
    x = h[low, low] - mu
    y = h[low + 1, low]
    for m in range(low, hi):
        if m > low:
            x = h[m, m - 1]
            y = h[m + 1, m - 1]
        c, s, r = _givens(x, y)
        if m > low:
            h[m, m - 1] = r
            h[m + 1, m - 1] = 0.0
        sc = s.conjugate()
        rm = h[m, m:hi + 1].copy()
        rn = h[m + 1, m:hi + 1].copy()
        h[m, m:hi + 1] = c * rm + s * rn
        h[m + 1, m:hi + 1] = -sc * rm + c * rn
        top = min(m + 2, hi) + 1
        cm = h[low:top, m].copy()
        cn = h[low:top, m + 1].copy()
        h[low:top, m] = c * cm + sc * cn
        h[low:top, m + 1] = -s * cm + c * cn


def hessenberg_inverse_residual(h, lam, start):
    """One inverse-iteration step on ``h - lam*I`` from the vector ``start``.

    Returns ``||(h - lam I) x||_2`` for the normalised iterate ``x``.  The solve
    uses adjacent-row partial pivoting, so it costs O(n^2).
    """
    n = h.shape[0]
    a = np.array(h, dtype=complex)
    a[np.diag_indices(n)] -= lam
    b = np.array(start, dtype=complex)
    tiny = EPS * max(float(np.abs(h).max()), 1.0)
    for m in range(n - 1):
        if _cabs1(a[m + 1, m]) > _cabs1(a[m, m]):
            a[[m, m + 1], m:] = a[[m + 1, m], m:]
            b[m], b[m + 1] = b[m + 1], b[m]
        piv = a[m, m]
        if piv == 0:
            piv = a[m, m] = tiny
        f = a[m + 1, m] / piv
        if f != 0:
            a[m + 1, m:] -= f * a[m, m:]
            b[m + 1] -= f * b[m]
    if a[n - 1, n - 1] == 0:
        a[n - 1, n - 1] = tiny
    y = np.zeros(n, dtype=complex)
    for m in range(n - 1, -1, -1):
        y[m] = (b[m] - a[m, m + 1:] @ y[m + 1:]) / a[m, m]
    nrm = np.linalg.norm(y)
    if not np.isfinite(nrm) or nrm == 0:
        return math.inf
    y /= nrm
    res = np.triu(h, -1) @ y - lam * y
    return float(np.linalg.norm(res))
