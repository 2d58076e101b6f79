"""Dense non-Hermitian eigenvalues: balance, Hessenberg, shifted QR, certify.

Eigenvectors are only needed for 16-dimensional momentum blocks and for the
ground state of small chains; those come from inverse iteration at an
already certified eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import NonConvergenceError

MAX_DIM = 4096
CERT_TOL = 1e-8


def balance(a: np.ndarray) -> np.ndarray:
    """Diagonal similarity by powers of two that equalises row and column norms.

    Returns the balanced copy; eigenvalues are unchanged exactly since the
    scaling is a power of two.
    """
    a = np.array(a, dtype=complex, order="C")
    n = a.shape[0]
    radix = 2.0
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = float(np.abs(a[:, i]).sum() - abs(a[i, i]))
            r = float(np.abs(a[i, :]).sum() - abs(a[i, i]))
            if c == 0.0 or r == 0.0:
                continue
            g, f, s = r / radix, 1.0, c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                a[i, :] /= f
                a[:, i] *= f
    return a


@dataclass(frozen=True)
class EigenReport:
    values: np.ndarray
    residuals: np.ndarray
    scale: float
    iterations_cap: int


def eigenvalues_dense(m, max_iter: int | None = None, cert_tol: float = CERT_TOL,
                      report: bool = False):
    """All eigenvalues of a square complex matrix, sorted by ``(Re, Im)``.

    Each eigenvalue is certified by one inverse-iteration step on the
    Hessenberg form: ``||(H - lam I) x|| < cert_tol * ||M||``.  Raises
    ``NonConvergenceError`` listing the offending positions when QR stalls or a
    certificate fails.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"need a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the dense cap {MAX_DIM}")
    if n == 0:
        return np.zeros(0, dtype=complex)
    scale = float(np.abs(m).max()) or 1.0
    h = balance(m)
    kernels.hessenberg_reduce(h)
    h_saved = h.copy()
    cap = max_iter if max_iter is not None else 30 * max(n, 10)
    eigs, n_left = kernels.hqr_eigenvalues(h, cap)
    if n_left:
        raise NonConvergenceError(
            f"shifted QR did not converge within {cap} sweeps; {n_left} eigenvalues uncertified",
            range(n_left),
        )
    start = kernels.start_vector(n)
    residuals = np.array([kernels.hessenberg_inverse_residual(h_saved, lam, start) for lam in eigs])
    hnorm = float(np.abs(h_saved).max()) or 1.0
    limit = cert_tol * max(scale, hnorm)
    bad = np.flatnonzero(~(residuals < limit))
    if bad.size:
        # an unlucky start vector has no component along the eigenvector; retry once
        start = kernels.start_vector(n, seed=1)
        for i in bad:
            residuals[i] = min(residuals[i], kernels.hessenberg_inverse_residual(h_saved, eigs[i], start))
        bad = np.flatnonzero(~(residuals < limit))
    if bad.size:
        raise NonConvergenceError(f"{bad.size} eigenvalues failed the residual certificate", bad)
    order = np.lexsort((eigs.imag, eigs.real))
    eigs = eigs[order]
    if report:
        return EigenReport(eigs, residuals[order], scale, cap)
    return eigs


def right_eigenvector(m, lam: complex, iters: int = 3) -> np.ndarray:
    """Unit right eigenvector by inverse iteration at a (certified) eigenvalue."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    shift = m - lam * np.eye(n)
    # nudge off exact singularity so the solve stays finite
    shift += np.eye(n) * (np.finfo(float).eps * max(1.0, float(np.abs(m).max())))
    x = np.full(n, 1.0 / math.sqrt(n), dtype=complex)
    rng = np.random.default_rng(0)
    x += 1e-3 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    for _ in range(iters):
        x = np.linalg.solve(shift, x)
        x /= np.linalg.norm(x)
    return x


def left_eigenvector(m, lam: complex, iters: int = 3) -> np.ndarray:
    """Row vector ``y`` with ``y @ m = lam * y`` (unit 2-norm)."""
    return right_eigenvector(np.asarray(m).conj().T, np.conj(lam), iters).conj()


def spectral_distance(a, b) -> float:
    """Largest gap when two spectra are matched greedily as multisets.

    Sorting complex spectra by ``(Re, Im)`` is fragile when real parts tie up
    to rounding, so each value of ``a`` is paired with the nearest unused value
    of ``b``, largest magnitudes first.  Degenerate values are interchangeable,
    which makes the greedy pairing sufficient for verification.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return math.inf
    free = np.ones(b.size, dtype=bool)
    worst = 0.0
    for x in a[np.argsort(-np.abs(a), kind="stable")]:
        d = np.where(free, np.abs(b - x), np.inf)
        j = int(np.argmin(d))
        free[j] = False
        worst = max(worst, float(d[j]))
    return worst
