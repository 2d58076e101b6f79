# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; the numpy twin lives in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot, sin, INFINITY, copysign

cnp.import_array()

ctypedef double complex zdouble

cdef double EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# dispersion sums

cdef inline void _neumaier(double *acc, double *comp, double v) noexcept nogil:
    cdef double t = acc[0] + v
    if fabs(acc[0]) >= fabs(v):
        comp[0] += (acc[0] - t) + v
    else:
        comp[0] += (v - t) + acc[0]
    acc[0] = t


cdef void _terms(double e, double x, const double *sh, const double *sn2, const double *w,
                 Py_ssize_t nk, int order, double *t0, double *t1, double *t2,
                 double *t3, double *t4, double *t5) noexcept nogil:
    # straight-line per-k terms (no branches) so the compiler vectorises them
    cdef Py_ssize_t j
    cdef double u, b, bpu, bmu, big, small, q, ep, qe, qx, p3, ep3, s0 = e * e + x * x - 1.0
    if order < 1:
        for j in range(nk):
            u = s0 + 2.0 * sh[j]
            b = sqrt(u * u + sn2[j])
            big = b + fabs(u)
            small = sn2[j] / big
            bmu = small if u >= 0 else big
            t0[j] = w[j] * sqrt(4.0 * e * e + 4.0 * sh[j] + 2.0 * bmu)
        return
    for j in range(nk):
        u = s0 + 2.0 * sh[j]
        b = sqrt(u * u + sn2[j])
        # B + |u| never cancels; the other combination is sin^2 k / (B + |u|)
        big = b + fabs(u)
        small = sn2[j] / big
        bpu = big if u >= 0 else small
        bmu = small if u >= 0 else big
        q = 4.0 * e * e + 4.0 * sh[j] + 2.0 * bmu
        ep = sqrt(q)
        t0[j] = w[j] * ep
        qe = 4.0 * e * bpu / b
        qx = -4.0 * x * bmu / b
        t1[j] = w[j] * qe / (2.0 * ep)
        t2[j] = w[j] * qx / (2.0 * ep)
        p3 = sn2[j] / (b * b * b)
        ep3 = 4.0 * ep * ep * ep
        t3[j] = w[j] * ((4.0 * bpu / b + 8.0 * e * e * p3) / (2.0 * ep) - qe * qe / ep3)
        t4[j] = w[j] * ((-4.0 * bmu / b + 8.0 * x * x * p3) / (2.0 * ep) - qx * qx / ep3)
        t5[j] = w[j] * ((8.0 * e * x * p3) / (2.0 * ep) - qe * qx / ep3)


cdef double _compensated(const double *t, Py_ssize_t n) noexcept nogil:
    cdef double acc = 0.0, comp = 0.0
    cdef Py_ssize_t j
    for j in range(n):
        _neumaier(&acc, &comp, t[j])
    return acc + comp


def eps1_sums(eta, xi, k, w, int order=2):
    """See ``_pykernels.eps1_sums``.  Sums run in ascending-index order with
    Neumaier compensation."""
    cdef const double[::1] e_v = np.ascontiguousarray(eta, dtype=float).ravel()
    cdef const double[::1] x_v = np.ascontiguousarray(xi, dtype=float).ravel()
    cdef const double[::1] k_v = np.ascontiguousarray(k, dtype=float)
    cdef const double[::1] w_v = np.ascontiguousarray(w, dtype=float)
    cdef Py_ssize_t npts = e_v.shape[0], nk = k_v.shape[0], i, j, c
    out = np.zeros((npts, 7))
    cdef double[:, ::1] o = out
    cdef double[::1] sh = np.sin(np.asarray(k_v) / 2.0) ** 2
    cdef double[::1] sn2 = np.sin(np.asarray(k_v)) ** 2
    cdef double[:, ::1] t = np.zeros((6, max(nk, 1)))
    cdef double mn
    if nk == 0:
        return out
    with nogil:
        for i in range(npts):
            _terms(e_v[i], x_v[i], &sh[0], &sn2[0], &w_v[0], nk, order,
                   &t[0, 0], &t[1, 0], &t[2, 0], &t[3, 0], &t[4, 0], &t[5, 0])
            o[i, 0] = _compensated(&t[0, 0], nk)
            if order >= 1:
                o[i, 1] = _compensated(&t[1, 0], nk)
                o[i, 2] = _compensated(&t[2, 0], nk)
            if order >= 2:
                for c in range(3, 6):
                    o[i, c] = _compensated(&t[c, 0], nk)
            # min eps_1 = t0 / w, recomputed only from the stored terms
            mn = INFINITY
            for j in range(nk):
                if w_v[j] > 0 and t[0, j] / w_v[j] < mn:
                    mn = t[0, j] / w_v[j]
            o[i, 6] = mn
    return out


# ---------------------------------------------------------------------------
# dense eigenvalues

cdef inline double cabs1(zdouble z) noexcept nogil:
    return fabs(z.real) + fabs(z.imag)


cdef inline double cabs(zdouble z) noexcept nogil:
    return hypot(z.real, z.imag)


cdef inline zdouble conj(zdouble z) noexcept nogil:
    return z.real - 1j * z.imag


cdef inline zdouble csqrt(zdouble z) noexcept nogil:
    cdef double x = z.real, y = z.imag, r, t
    r = hypot(x, y)
    if r == 0.0:
        return 0.0
    t = sqrt(0.5 * (r + fabs(x)))
    if x >= 0.0:
        return t + 1j * (y / (2.0 * t))
    return fabs(y) / (2.0 * t) + 1j * copysign(t, y)


cdef inline void _axpy_conj_row(double *w, const double *row, double cr, double ci, Py_ssize_t m) noexcept nogil:
    # w += conj(c) * row   (interleaved re/im, length m complex)
    cdef Py_ssize_t t
    for t in range(m):
        w[2 * t] += cr * row[2 * t] + ci * row[2 * t + 1]
        w[2 * t + 1] += cr * row[2 * t + 1] - ci * row[2 * t]


cdef inline void _axpy_row(double *row, const double *w, double cr, double ci, Py_ssize_t m) noexcept nogil:
    # row -= c * w
    cdef Py_ssize_t t
    for t in range(m):
        row[2 * t] -= cr * w[2 * t] - ci * w[2 * t + 1]
        row[2 * t + 1] -= cr * w[2 * t + 1] + ci * w[2 * t]


def hessenberg_reduce(zdouble[:, ::1] a):
    """Householder reduction to upper Hessenberg form, in place."""
    cdef Py_ssize_t n = a.shape[0], j, i, c, m
    cdef double tail, xnorm, vnorm, ax, sr, si, vr, vi, ar, ai
    cdef zdouble phase, alpha
    cdef zdouble[::1] v = np.zeros(n, dtype=complex)
    cdef zdouble[::1] wrow = np.zeros(n, dtype=complex)
    cdef double *base
    cdef double *vp
    cdef double *wp
    if n < 3:
        return
    base = <double *> &a[0, 0]
    vp = <double *> &v[0]
    wp = <double *> &wrow[0]
    with nogil:
        for j in range(n - 2):
            tail = 0.0
            for i in range(j + 2, n):
                tail += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
            if tail == 0.0:
                continue
            ax = cabs(a[j + 1, j])
            xnorm = sqrt(ax * ax + tail)
            phase = a[j + 1, j] / ax if ax != 0.0 else 1.0
            alpha = -phase * xnorm
            for i in range(j + 1, n):
                v[i] = a[i, j]
            v[j + 1] = v[j + 1] - alpha
            vnorm = 0.0
            for i in range(j + 1, n):
                vnorm += v[i].real * v[i].real + v[i].imag * v[i].imag
            vnorm = sqrt(vnorm)
            for i in range(j + 1, n):
                v[i] = v[i] / vnorm
            # left: A[j+1:, j:] -= 2 v (v^H A[j+1:, j:])
            m = n - j
            for c in range(2 * j, 2 * n):
                wp[c] = 0.0
            for i in range(j + 1, n):
                _axpy_conj_row(wp + 2 * j, base + 2 * (i * n + j), vp[2 * i], vp[2 * i + 1], m)
            for i in range(j + 1, n):
                _axpy_row(base + 2 * (i * n + j), wp + 2 * j, 2.0 * vp[2 * i], 2.0 * vp[2 * i + 1], m)
            # right: A[r, j+1:] -= 2 (A[r, j+1:] v) v^H
            m = n - j - 1
            for c in range(n):
                sr = 0.0
                si = 0.0
                for i in range(j + 1, n):
                    ar = base[2 * (c * n + i)]
                    ai = base[2 * (c * n + i) + 1]
                    vr = vp[2 * i]
                    vi = vp[2 * i + 1]
                    sr += ar * vr - ai * vi
                    si += ar * vi + ai * vr
                # row -= (2 s) * conj(v)
                _axpy_conj_row_sub(base + 2 * (c * n + j + 1), vp + 2 * (j + 1), 2.0 * sr, 2.0 * si, m)
            a[j + 1, j] = alpha
            for i in range(j + 2, n):
                a[i, j] = 0.0


cdef inline void _axpy_conj_row_sub(double *row, const double *v, double sr, double si, Py_ssize_t m) noexcept nogil:
    # row -= s * conj(v)
    cdef Py_ssize_t t
    for t in range(m):
        row[2 * t] -= sr * v[2 * t] + si * v[2 * t + 1]
        row[2 * t + 1] -= si * v[2 * t] - sr * v[2 * t + 1]


cdef inline void _givens(zdouble x, zdouble y, double *c, zdouble *s, zdouble *r) noexcept nogil:
    cdef double ax, ay, nrm
    cdef zdouble phase
    if y == 0:
        c[0] = 1.0
        s[0] = 0.0
        r[0] = x
        return
    ay = cabs(y)
    if x == 0:
        c[0] = 0.0
        s[0] = conj(y) / ay
        r[0] = ay
        return
    ax = cabs(x)
    nrm = hypot(ax, ay)
    phase = x / ax
    c[0] = ax / nrm
    s[0] = phase * conj(y) / nrm
    r[0] = phase * nrm


cdef inline zdouble _wilkinson(zdouble a, zdouble b, zdouble c, zdouble d) noexcept nogil:
    cdef zdouble t = 0.5 * (a - d)
    cdef zdouble disc = csqrt(t * t + b * c)
    cdef zdouble dp = t + disc, dm = t - disc, den
    den = dp if cabs(dp) >= cabs(dm) else dm
    if den == 0:
        return d
    return d - b * c / den


cdef void _qr_sweep(zdouble[:, ::1] h, Py_ssize_t low, Py_ssize_t hi, zdouble mu) noexcept nogil:
    cdef Py_ssize_t m, j, top
    cdef double c
    cdef zdouble s, sc, r, x, y, p, q
    x = h[low, low] - mu
    y = h[low + 1, low]
    for m in range(low, hi):
        if m > low:
            x = h[m, m - 1]
            y = h[m + 1, m - 1]
        _givens(x, y, &c, &s, &r)
        if m > low:
            h[m, m - 1] = r
            h[m + 1, m - 1] = 0.0
        sc = conj(s)
        for j in range(m, hi + 1):
            p = h[m, j]
            q = h[m + 1, j]
            h[m, j] = c * p + s * q
            h[m + 1, j] = -sc * p + c * q
        top = m + 2 if m + 2 < hi else hi
        for j in range(low, top + 1):
            p = h[j, m]
            q = h[j, m + 1]
            h[j, m] = c * p + sc * q
            h[j, m + 1] = -s * p + c * q


def hqr_eigenvalues(zdouble[:, ::1] h, Py_ssize_t max_iter):
    """See ``_pykernels.hqr_eigenvalues``."""
    cdef Py_ssize_t n = h.shape[0], hi, low, its = 0, total = 0, i, j
    eigs_arr = np.zeros(n, dtype=complex)
    cdef zdouble[::1] eigs = eigs_arr
    cdef double s, hnorm = 0.0
    cdef zdouble mu
    cdef Py_ssize_t left = 0
    if n == 0:
        return eigs_arr, 0
    with nogil:
        for i in range(n):
            for j in range(n):
                if cabs(h[i, j]) > hnorm:
                    hnorm = cabs(h[i, j])
        if hnorm == 0.0:
            hnorm = 1.0
        hi = n - 1
        while hi >= 0:
            low = hi
            while low > 0:
                s = cabs1(h[low - 1, low - 1]) + cabs1(h[low, low])
                if s == 0.0:
                    s = hnorm
                if cabs1(h[low, low - 1]) <= EPS * s:
                    h[low, low - 1] = 0.0
                    break
                low -= 1
            if low == hi:
                eigs[hi] = h[hi, hi]
                hi -= 1
                its = 0
                continue
            if total >= max_iter:
                left = hi + 1
                break
            if its == 10 or its == 20:
                mu = h[hi, hi] + 0.75 * cabs1(h[hi, hi - 1])
            else:
                mu = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
            _qr_sweep(h, low, hi, mu)
            its += 1
            total += 1
    return eigs_arr, left


def hessenberg_inverse_residual(h_in, zdouble lam, start):
    """See ``_pykernels.hessenberg_inverse_residual``."""
    cdef zdouble[:, ::1] h = np.ascontiguousarray(h_in, dtype=complex)
    cdef Py_ssize_t n = h.shape[0], m, j
    a_arr = np.array(h_in, dtype=complex, order="C")
    cdef zdouble[:, ::1] a = a_arr
    cdef zdouble[::1] b = np.array(start, dtype=complex)
    cdef zdouble[::1] y = np.zeros(n, dtype=complex)
    cdef zdouble piv, f, tmp, acc
    cdef double hmax = 0.0, tiny, nrm = 0.0, res = 0.0
    with nogil:
        for m in range(n):
            a[m, m] = a[m, m] - lam
            for j in range(n):
                if cabs(h[m, j]) > hmax:
                    hmax = cabs(h[m, j])
        tiny = EPS * (hmax if hmax > 1.0 else 1.0)
        for m in range(n - 1):
            if cabs1(a[m + 1, m]) > cabs1(a[m, m]):
                for j in range(m, n):
                    tmp = a[m, j]
                    a[m, j] = a[m + 1, j]
                    a[m + 1, j] = tmp
                tmp = b[m]
                b[m] = b[m + 1]
                b[m + 1] = tmp
            piv = a[m, m]
            if piv == 0:
                a[m, m] = tiny
                piv = tiny
            f = a[m + 1, m] / piv
            if f != 0:
                for j in range(m, n):
                    a[m + 1, j] = a[m + 1, j] - f * a[m, j]
                b[m + 1] = b[m + 1] - f * b[m]
        if a[n - 1, n - 1] == 0:
            a[n - 1, n - 1] = tiny
        for m in range(n - 1, -1, -1):
            acc = b[m]
            for j in range(m + 1, n):
                acc = acc - a[m, j] * y[j]
            y[m] = acc / a[m, m]
        for m in range(n):
            nrm += y[m].real * y[m].real + y[m].imag * y[m].imag
        nrm = sqrt(nrm)
    if not np.isfinite(nrm) or nrm == 0.0:
        return INFINITY
    with nogil:
        for m in range(n):
            y[m] = y[m] / nrm
        for m in range(n):
            acc = -lam * y[m]
            j = m - 1 if m > 0 else 0
            while j < n:
                acc = acc + h[m, j] * y[j]
                j += 1
            res += acc.real * acc.real + acc.imag * acc.imag
    return sqrt(res)
