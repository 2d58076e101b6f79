"""Field parameters, momentum grids and the closed-form quasiparticle dispersion.

The ring has ``two_n`` sites; site ``j`` (1-based) carries the transverse field
``eta + i*xi`` on even ``j`` (sublattice a) and ``eta - i*xi`` on odd ``j``
(sublattice b).  Two neighbouring sites form a unit cell, so the Brillouin zone
of the cell momentum ``k`` holds ``N = two_n // 2`` points.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominatorError


@dataclass(frozen=True)
class FieldPoint:
    """Complex transverse field ``eta + i*xi`` (units of J) and Ising coupling J."""

    eta: float
    xi: float
    J: float = 1.0

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError(f"Ising coupling must be positive, got J={self.J}")
        if not (math.isfinite(self.eta) and math.isfinite(self.xi)):
            raise ValueError("field components must be finite")

    @property
    def r(self) -> float:
        return math.hypot(self.eta, self.xi)

    @property
    def phi(self) -> float:
        return to_polar(self)[1]

    def reflected(self, eta_sign: int = 1, xi_sign: int = 1) -> "FieldPoint":
        return FieldPoint(eta_sign * self.eta, xi_sign * self.xi, self.J)


def to_polar(p: FieldPoint) -> tuple[float, float]:
    """Return ``(r, phi)`` with ``phi`` in ``[0, 2*pi)``; ``phi = 0`` at the origin."""
    r = math.hypot(p.eta, p.xi)
    if r == 0.0:
        return 0.0, 0.0
    phi = math.atan2(p.xi, p.eta)
    if phi < 0.0:
        phi += 2.0 * math.pi
        if phi >= 2.0 * math.pi:  # atan2 returned -0.0 or a tiny negative angle
            phi = 0.0
    return r, phi


class Sector(enum.Enum):
    """Fermion-number parity sector. EVEN carries the ground state."""

    EVEN = "+"
    ODD = "-"


@dataclass(frozen=True)
class MomentumGrid:
    """Half-zone momenta of one parity sector.

    ``pair_weight`` is 1 for a momentum paired with its partner ``-k`` and 1/2
    for a self-conjugate momentum (``k = 0`` or ``k = pi``), so that sums over
    the full zone equal ``2 * sum(pair_weight * f(k))`` for even ``f``.
    """

    two_n: int
    sector: Sector
    momenta: np.ndarray
    pair_weight: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.two_n // 2


def momentum_grid(two_n: int, sector: Sector = Sector.EVEN) -> MomentumGrid:
    """Ascending momenta in ``[0, pi]`` for a ring of ``two_n`` sites.

    EVEN: ``k = 2*pi*(m + 1/2)/N``; ODD: ``k = 2*pi*m/N``, ``m = 0..N-1``, folded
    onto the half zone.  For even ``N`` the EVEN grid is exactly the ``N/2``
    points in ``(0, pi)``; for odd ``N`` it additionally contains ``k = pi``.
    """
    if isinstance(two_n, bool) or int(two_n) != two_n:
        raise ValueError(f"two_n must be an integer, got {two_n!r}")
    two_n = int(two_n)
    if two_n < 4 or two_n % 2:
        raise ValueError(f"two_n must be an even integer >= 4, got {two_n}")
    n = two_n // 2
    offset = 0.5 if sector is Sector.EVEN else 0.0
    # integer bookkeeping keeps k = 0 and k = pi exact
    ks, ws = [], []
    for m in range(n):
        twice = 2 * m + 2 * offset  # k = pi * twice / n, twice in [0, 2n)
        if twice > n:
            continue
        ks.append(math.pi * twice / n)
        ws.append(0.5 if twice in (0, n) else 1.0)
    momenta = np.array(ks)
    weight = np.array(ws)
    momenta.setflags(write=False)
    weight.setflags(write=False)
    return MomentumGrid(two_n, sector, momenta, weight)


def _radical_parts(k, s):
    """Cancellation-free pieces of the inner radical at ``s = r**2``.

    Returns ``(sin^2(k/2), B, B + u, B - u)`` with ``u = s - cos k`` and
    ``B = sqrt(u**2 + sin(k)**2) = sqrt(s**2 - 2 s cos k + 1)``.
    """
    sh = np.sin(np.asarray(k, dtype=float) / 2.0) ** 2
    sn2 = np.sin(k) ** 2
    u = (s - 1.0) + 2.0 * sh
    b = np.sqrt(u * u + sn2)
    with np.errstate(divide="ignore", invalid="ignore"):
        bpu = np.where(u >= 0, b + u, sn2 / (b - u))
        bmu = np.where(u >= 0, sn2 / (b + u), b - u)
    # u = 0 and sin k = 0 together only at r = 1, k = 0
    bpu = np.where(b == 0, 0.0, bpu)
    bmu = np.where(b == 0, 0.0, bmu)
    return sh, b, bpu, bmu


def inner_radical(k, r):
    """``sqrt(r**4 - 2 r**2 cos k + 1)``, always real and ``>= |r**2 - 1|``."""
    _, b, _, _ = _radical_parts(k, np.asarray(r, dtype=float) ** 2)
    return b[()] if np.ndim(b) == 0 else b


def _squared_branches(k, p: FieldPoint):
    """``(eps_1**2, eps_3**2)`` in units of J, both real."""
    eta2 = p.eta * p.eta
    sh, b, bpu, bmu = _radical_parts(k, eta2 + p.xi * p.xi)
    base = 4.0 * eta2 + 4.0 * sh
    return base + 2.0 * bmu, base - 2.0 * bpu


def dispersion(n: int, k, p: FieldPoint):
    """Quasiparticle coefficient ``eps_n^k`` times J (vectorised over ``k``).

    ``eps_1 = sqrt(2(eta^2 - xi^2) + 2 B + 2)`` and ``eps_3`` takes ``-2 B``;
    ``eps_2 = -eps_1``, ``eps_4 = -eps_3``, ``eps_5 = eps_6 = 0``.  Square roots
    are principal, so ``Re eps_1 >= 0`` and purely imaginary values have
    ``Im >= 0``.  ``eps_1**2 >= 0`` identically, so ``eps_1`` is always real.
    """
    if n not in (1, 2, 3, 4, 5, 6):
        raise ValueError(f"branch index must be in 1..6, got {n}")
    shape = np.shape(k)
    if n in (5, 6):
        out = np.zeros(shape, dtype=complex)
    else:
        q1, q3 = _squared_branches(k, p)
        q = q1 if n in (1, 2) else q3
        out = np.sqrt(np.asarray(q, dtype=complex)) * p.J
        if n in (2, 4):
            out = -out
    return out[()] if out.ndim == 0 else out


def eps1(k, p: FieldPoint):
    """Real array of ``eps_1^k`` (units of J, without the J factor)."""
    q1, _ = _squared_branches(k, p)
    return np.sqrt(np.maximum(q1, 0.0))


def normalization_factor(n: int, k: float, p: FieldPoint, tol: float = 1e-10) -> complex:
    """Biorthogonal norm ``Omega_n^k`` of the composite pair operator, branches 1-4.

    ``Omega**2 = 2 + 4cos^2(k/2)[(e + 2i xi)^-2 + (e - 2i xi)^-2]
    + 4 sin^2(k/2)[(e + 2 eta)^-2 + (e - 2 eta)^-2]`` with ``e = eps_n^k / J``;
    the principal square root is returned.
    """
    if n not in (1, 2, 3, 4):
        raise ValueError(f"normalization defined for branches 1..4, got {n}")
    e = complex(dispersion(n, k, p)) / p.J
    dens = (e + 2j * p.xi, e - 2j * p.xi, e + 2 * p.eta, e - 2 * p.eta)
    if min(abs(d) for d in dens) < tol:
        raise DegenerateDenominatorError(
            f"resonant denominator for n={n}, k={k}, eta={p.eta}, xi={p.xi}"
        )
    c2 = math.cos(k / 2) ** 2
    s2 = math.sin(k / 2) ** 2
    omega2 = 2 + 4 * c2 * (dens[0] ** -2 + dens[1] ** -2) + 4 * s2 * (dens[2] ** -2 + dens[3] ** -2)
    return complex(np.sqrt(complex(omega2)))
