"""Berry curvature density of the biorthogonal ground state.

For the family obtained by rotating sublattice spins through ``theta_a`` and
``theta_b`` about z, the curvature over the ``(eta, xi)`` plane reduces to

    C = (i/2) sum_nu (d theta_nu/d eta * d m_nu/d xi - d theta_nu/d xi * d m_nu/d eta)

with ``m_a = 2 d_eta + 2i d_xi`` and ``m_b = 2 d_eta - 2i d_xi`` (derivatives of
``eps_g``).  The bare-state overlap term is antisymmetric-zero, so only the
rotation contributes; the rotated Hamiltonian is never built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .model import FieldPoint
from .response import second_partials

Partial = Callable[[FieldPoint], float]


def _const(c: float) -> Partial:
    def f(_p):
        return c
    f.constant = c
    return f


@dataclass(frozen=True)
class ThetaMap:
    """The four partials of ``theta_a(eta, xi)`` and ``theta_b(eta, xi)``."""

    d_theta_a_d_eta: Partial
    d_theta_a_d_xi: Partial
    d_theta_b_d_eta: Partial
    d_theta_b_d_xi: Partial

    @classmethod
    def constant(cls, a_eta: float, a_xi: float, b_eta: float, b_xi: float) -> "ThetaMap":
        return cls(_const(a_eta), _const(a_xi), _const(b_eta), _const(b_xi))

    def partials(self, p: FieldPoint) -> tuple[float, float, float, float]:
        return (self.d_theta_a_d_eta(p), self.d_theta_a_d_xi(p),
                self.d_theta_b_d_eta(p), self.d_theta_b_d_xi(p))


# theta_a = theta_b = eta + xi
SUM = ThetaMap.constant(1.0, 1.0, 1.0, 1.0)
# theta_a = -theta_b = eta + xi
DIFF = ThetaMap.constant(1.0, 1.0, -1.0, -1.0)
ZERO = ThetaMap.constant(0.0, 0.0, 0.0, 0.0)
PRESETS = {"sum": SUM, "diff": DIFF, "zero": ZERO}


def curvature_from_partials(theta, d2_eta, d2_xi, d2_mixed) -> complex:
    """Curvature for given map partials and second partials of ``eps_g``."""
    a_eta, a_xi, b_eta, b_xi = theta
    dm_a_eta = 2 * d2_eta + 2j * d2_mixed
    dm_a_xi = 2 * d2_mixed + 2j * d2_xi
    dm_b_eta = 2 * d2_eta - 2j * d2_mixed
    dm_b_xi = 2 * d2_mixed - 2j * d2_xi
    return 0.5j * ((a_eta * dm_a_xi - a_xi * dm_a_eta) + (b_eta * dm_b_xi - b_xi * dm_b_eta))


def curvature_density(p: FieldPoint, theta: ThetaMap, mode=None) -> complex:
    partials = theta.partials(p)
    if not any(partials):
        # a non-rotating family has no curvature, even where eps_g is singular
        return 0j
    return complex(curvature_from_partials(partials, *second_partials(p, mode)))


def curvature_preset_sum(p: FieldPoint, mode=None) -> complex:
    """``C = 2i (d2_mixed - d2_eta)``."""
    d2_eta, _, d2_mixed = second_partials(p, mode)
    return 2j * (d2_mixed - d2_eta)


def curvature_preset_diff(p: FieldPoint, mode=None) -> complex:
    """``C = 2 (d2_mixed - d2_xi)``."""
    _, d2_xi, d2_mixed = second_partials(p, mode)
    return 2 * (d2_mixed - d2_xi)


def chi_prefactor(phi: float) -> float:
    """Angular factor ``sin(2 phi) - 2 cos^2(phi)`` of the circle divergence."""
    return math.sin(2.0 * phi) - 2.0 * math.cos(phi) ** 2
