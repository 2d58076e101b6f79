"""Ground-state energy of the ring, finite size and thermodynamic limit.

Both modes reduce to a weighted half-zone sum ``eps_g = -J * sum_k w_k eps_1^k``:

* finite ring of ``two_n`` sites: the EVEN-sector grid with ``w_k = 1/N``
  (``1/(2N)`` for a self-conjugate momentum);
* thermodynamic limit: a graded Gauss-Legendre rule on ``(0, pi)`` with
  ``w_k`` equal to the quadrature weight over ``2*pi``.

The graded rule halves its panels geometrically towards ``k = 0`` because that
is where the integrand stops being smooth as the field approaches a phase
boundary.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import FieldPoint, Sector, momentum_grid


@dataclass(frozen=True)
class FiniteN:
    """Finite ring with ``two_n`` sites (EVEN parity sector)."""

    two_n: int

    def rule(self):
        return finite_rule(self.two_n)

    def __str__(self):
        return f"finite(two_n={self.two_n})"


@dataclass(frozen=True)
class Thermodynamic:
    """Infinite ring, evaluated by quadrature with ``quad_points`` nodes."""

    quad_points: int = 512

    def rule(self):
        return thermodynamic_rule(self.quad_points)

    def __str__(self):
        return f"thermodynamic(quad_points={self.quad_points})"


THERMODYNAMIC = Thermodynamic()


def as_mode(mode):
    """Accept a mode object, an integer site count, or ``None`` (thermodynamic)."""
    if mode is None:
        return THERMODYNAMIC
    if isinstance(mode, (FiniteN, Thermodynamic)):
        return mode
    if isinstance(mode, (int, np.integer)) and not isinstance(mode, bool):
        return FiniteN(int(mode))
    raise TypeError(f"cannot interpret {mode!r} as an evaluation mode")


@functools.lru_cache(maxsize=64)
def finite_rule(two_n: int):
    """``(k, w)`` for the EVEN grid of a ``two_n``-site ring, ``sum(w) = 1/2``."""
    grid = momentum_grid(two_n, Sector.EVEN)
    k = grid.momenta
    w = grid.pair_weight / grid.n_cells
    w.setflags(write=False)
    return k, w


@functools.lru_cache(maxsize=16)
def thermodynamic_rule(quad_points: int = 512):
    """Graded composite Gauss-Legendre rule on ``(0, pi)``, weights over ``2*pi``.

    Panels are ``[pi 2^-(j+1), pi 2^-j]`` for ``j < P`` plus ``[0, pi 2^-P]``
    with ``P = min(40, quad_points // 8 - 1)``; each carries
    ``quad_points // (P + 1)`` nodes.  Nodes are returned in ascending order.
    """
    quad_points = int(quad_points)
    if quad_points < 64:
        raise ValueError(f"quad_points must be >= 64, got {quad_points}")
    levels = min(40, quad_points // 8 - 1)
    per_panel = quad_points // (levels + 1)
    x, wx = np.polynomial.legendre.leggauss(per_panel)
    edges = [0.0] + [math.pi * 2.0 ** (-j) for j in range(levels, -1, -1)]
    ks, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        ks.append(lo + half * (x + 1.0))
        ws.append(half * wx)
    k = np.concatenate(ks)
    w = np.concatenate(ws) / (2.0 * math.pi)
    k.setflags(write=False)
    w.setflags(write=False)
    return k, w


@dataclass(frozen=True)
class EnergyResult:
    """Ground-state energy; ``e_total`` is ``None`` in the thermodynamic limit."""

    e_total: complex | None
    eps_g: complex
    mode: FiniteN | Thermodynamic


def _eps_g(p: FieldPoint, mode) -> float:
    k, w = mode.rule()
    s = kernels.eps1_sums([p.eta], [p.xi], k, w, order=0)
    return -p.J * float(s[0, 0])


def ground_energy(two_n: int, p: FieldPoint) -> EnergyResult:
    """``E_g = -2J sum_k eps_1^k`` over the EVEN grid and ``eps_g = E_g / two_n``."""
    mode = FiniteN(int(two_n))
    eps_g = _eps_g(p, mode)
    return EnergyResult(complex(eps_g * mode.two_n), complex(eps_g), mode)


def energy_density_limit(p: FieldPoint, quad_points: int = 512) -> complex:
    """``eps_g = -(J / 2pi) int_0^pi eps_1^k dk``, so the origin gives ``-J``."""
    return complex(_eps_g(p, Thermodynamic(quad_points)))


def energy_density(p: FieldPoint, mode=None) -> complex:
    """Energy per site in either mode (``None`` means thermodynamic)."""
    return complex(_eps_g(p, as_mode(mode)))


def eps1_at_zero(p: FieldPoint) -> float:
    """Closed form of ``eps_1`` at ``k = 0``: ``sqrt(2(eta^2 - xi^2) + 2|r^2 - 1| + 2)``.

    For ``r > 1`` this is ``2 r |cos phi| = 2|eta|``; for ``r < 1`` it is
    ``2 sqrt(1 - xi^2)``.  The radial derivative jumps across ``r = 1``.
    """
    s = p.eta * p.eta + p.xi * p.xi
    q = 2.0 * (p.eta * p.eta - p.xi * p.xi) + 2.0 * abs(s - 1.0) + 2.0
    return math.sqrt(max(q, 0.0))
