"""Field derivatives of the ground-state energy density.

Everything is assembled from closed-form derivatives of ``eps_1^k``.  With
``Q = eps_1^2 = 4 eta^2 + 4 sin^2(k/2) + 2(B - u)``, ``u = r^2 - cos k`` and
``B = sqrt(u^2 + sin^2 k)``::

    Q_eta = 4 eta (B + u) / B          Q_xi = -4 xi (B - u) / B
    Q_eta_eta = 4 (B + u) / B + 8 eta^2 sin^2 k / B^3
    Q_xi_xi = -4 (B - u) / B + 8 xi^2 sin^2 k / B^3
    Q_eta_xi = 8 eta xi sin^2 k / B^3

and ``d eps = dQ / (2 eps)``, ``d2 eps = Q_ab / (2 eps) - Q_a Q_b / (4 eps^3)``.
``B + u`` and ``B - u`` are formed without cancellation.  The k-sums run in
the compiled kernel when it is available.

In the thermodynamic limit the gap at ``k = 0`` closes on the rays
``eta = 0, r >= 1`` (first derivatives diverge) and the second derivatives
diverge logarithmically on the whole circle ``r = 1``.  Finite rings never
sample ``k = 0`` on the EVEN grid, so they stay finite everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CriticalPointError, GaplessPointError, SingularInputError
from .model import FieldPoint, _radical_parts, eps1
from .phase import boundary_distance
from .spectrum import Thermodynamic, as_mode, energy_density

GAP_TOL = 1e-10
CRITICAL_TOL = 1e-12


@dataclass(frozen=True)
class ResponseRecord:
    point: FieldPoint
    eps_g: complex
    d_eta: complex
    d_xi: complex
    d2_eta: complex
    d2_xi: complex
    d2_mixed: complex
    laplacian: complex
    m_a: complex
    m_b: complex
    boundary_distance: float


def _check_domain(eta, xi, mode, order):
    """Raise for derivatives that do not exist in the thermodynamic limit."""
    if not isinstance(mode, Thermodynamic) or order < 1:
        return
    s = eta * eta + xi * xi
    if abs(eta) < GAP_TOL and s >= 1.0 - CRITICAL_TOL:
        raise GaplessPointError(f"gap closes at k=0 for eta={eta}, xi={xi}")
    if order >= 2 and abs(s - 1.0) <= CRITICAL_TOL:
        raise CriticalPointError(f"second derivatives diverge on r=1 (eta={eta}, xi={xi})")


def derivative_table(eta, xi, mode=None, J: float = 1.0, order: int = 2) -> np.ndarray:
    """Vectorised ``(npts, 6)`` table ``[eps_g, d_eta, d_xi, d2_eta, d2_xi, d2_mixed]``.

    No domain checks: points on a thermodynamic critical line come back as
    large or non-finite numbers.  Used by the scan engine; single-point callers
    want :func:`derivatives`.
    """
    mode = as_mode(mode)
    k, w = mode.rule()
    with np.errstate(divide="ignore", invalid="ignore"):
        s = kernels.eps1_sums(eta, xi, k, w, order=order)
    return -J * s[:, :6]


def derivatives(p: FieldPoint, mode=None, order: int = 2) -> np.ndarray:
    """Real vector ``[eps_g, d_eta, d_xi, d2_eta, d2_xi, d2_mixed]`` at one point."""
    mode = as_mode(mode)
    _check_domain(p.eta, p.xi, mode, order)
    return derivative_table([p.eta], [p.xi], mode, p.J, order)[0]


def gradient_eps_g(p: FieldPoint, mode=None) -> tuple[complex, complex]:
    d = derivatives(p, mode, order=1)
    return complex(d[1]), complex(d[2])


def second_partials(p: FieldPoint, mode=None) -> tuple[complex, complex, complex]:
    """``(d2_eta, d2_xi, d2_mixed)``."""
    d = derivatives(p, mode, order=2)
    return complex(d[3]), complex(d[4]), complex(d[5])


def laplacian_eps_g(p: FieldPoint, mode=None) -> complex:
    d = derivatives(p, mode, order=2)
    return complex(d[3] + d[4])


def magnetizations(p: FieldPoint, mode=None) -> tuple[complex, complex]:
    """Sublattice magnetizations ``m_a = 2 d_eta + 2i d_xi`` and ``m_b = 2 d_eta - 2i d_xi``.

    This normalisation equals ``-2J`` times the biorthogonal expectation of the
    transverse spin per cell on sublattice b (and its conjugate for a); see
    ``oracle.chain.sublattice_magnetization``.
    """
    d_eta, d_xi = gradient_eps_g(p, mode)
    return 2 * d_eta + 2j * d_xi, 2 * d_eta - 2j * d_xi


def response(p: FieldPoint, mode=None) -> ResponseRecord:
    d = derivatives(p, mode, order=2)
    d_eta, d_xi = complex(d[1]), complex(d[2])
    return ResponseRecord(
        point=p,
        eps_g=complex(d[0]),
        d_eta=d_eta,
        d_xi=d_xi,
        d2_eta=complex(d[3]),
        d2_xi=complex(d[4]),
        d2_mixed=complex(d[5]),
        laplacian=complex(d[3] + d[4]),
        m_a=2 * d_eta + 2j * d_xi,
        m_b=2 * d_eta - 2j * d_xi,
        boundary_distance=boundary_distance(p),
    )


# ---------------------------------------------------------------------------
# finite-difference cross-checks


def default_step(p: FieldPoint) -> float:
    return 1e-3 * max(1.0, abs(p.eta), abs(p.xi))


def _shifted(p, de, dx):
    return FieldPoint(p.eta + de, p.xi + dx, p.J)


def gradient_fd(p: FieldPoint, h: float | None = None, mode=None) -> tuple[complex, complex]:
    """Five-point central first differences of ``eps_g``."""
    h = default_step(p) if h is None else h
    if not h > 0:
        raise ValueError("step must be positive")
    mode = as_mode(mode)

    def diff(axis):
        f = [energy_density(_shifted(p, *(j * h * a for a in axis)), mode) for j in (-2, -1, 1, 2)]
        return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)

    return diff((1, 0)), diff((0, 1))


def second_partials_fd(p: FieldPoint, h: float | None = None, mode=None):
    """Five-point central second differences ``(d2_eta, d2_xi, d2_mixed)``.

    The mixed partial uses the tensor product of the first-difference stencil.
    """
    h = default_step(p) if h is None else h
    if not h > 0:
        raise ValueError("step must be positive")
    mode = as_mode(mode)
    f0 = energy_density(p, mode)
    c1 = {-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}

    def second(axis):
        f = [energy_density(_shifted(p, *(j * h * a for a in axis)), mode) for j in (-2, -1, 1, 2)]
        return (-f[0] + 16 * f[1] - 30 * f0 + 16 * f[2] - f[3]) / (12 * h * h)

    mixed = sum(
        c1[i] * c1[j] * energy_density(_shifted(p, i * h, j * h), mode)
        for i in c1 for j in c1
    ) / (144 * h * h)
    return second((1, 0)), second((0, 1)), mixed


def laplacian_fd(p: FieldPoint, h: float | None = None, mode=None) -> complex:
    d2_eta, d2_xi, _ = second_partials_fd(p, h, mode)
    return d2_eta + d2_xi


# ---------------------------------------------------------------------------
# critical integrand and asymptotics


def integrand_F(k, p: FieldPoint):
    """``F(k) = sqrt(2) r sin^2 k / (pi eps_1^k (r^4 - 2 r^2 cos k + 1)^{3/2})``.

    The expression the logarithmic divergence is usually read from; vectorised
    over ``k``.  Zero wherever ``sin k = 0`` except at the singular point
    ``r = 1, k = 0``.
    """
    k = np.asarray(k, dtype=float)
    s = p.eta * p.eta + p.xi * p.xi
    r = math.sqrt(s)
    _, b, _, _ = _radical_parts(k, s)
    if np.any((b == 0) & (np.sin(k) == 0)):
        raise SingularInputError("F(k) is singular at r = 1, k = 0")
    sn2 = np.sin(k) ** 2
    e1 = eps1(k, p)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(sn2 == 0, 0.0, math.sqrt(2.0) * r * sn2 / (math.pi * e1 * b ** 3))
    return out[()] if out.ndim == 0 else out


def asymptotic_laplacian_circle(r: float, phi: float) -> float:
    """``-(sqrt(2) / (pi |cos phi|)) ln|r - 1|`` near the unit circle."""
    if not 0.0 < abs(r - 1.0) < 0.1:
        raise ValueError(f"need 0 < |r - 1| < 0.1, got r={r}")
    c = abs(math.cos(phi))
    if c < 1e-12:
        raise SingularInputError("prefactor is undefined at cos(phi) = 0")
    return -math.sqrt(2.0) / (math.pi * c) * math.log(abs(r - 1.0))


def asymptotic_laplacian_axis(eta: float) -> float:
    """``-(sqrt(2) / pi) ln|eta|`` near the imaginary axis, for large ``|xi|``."""
    if not 0.0 < abs(eta) < 0.1:
        raise ValueError(f"need 0 < |eta| < 0.1, got eta={eta}")
    return -math.sqrt(2.0) / math.pi * math.log(abs(eta))
