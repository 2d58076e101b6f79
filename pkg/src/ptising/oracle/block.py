"""Momentum block ``h_k = H_k + H_-k`` on its 16-state Fock space.

Modes are ordered ``(alpha_k, alpha_-k, beta_k, beta_-k)`` as indices 0..3.
Bit ``i`` of a basis index is the occupation of mode ``i``, and an annihilator
on mode ``i`` carries the string sign ``(-1)^(occupied modes below i)``; all
matrix elements follow from that single convention.

In this convention the pair states are

    Lbar_n|0> = e^{ik/2} a+_k b+_-k|0> + e^{-ik/2} b+_k a+_-k|0>
              + 2 cos(k/2) [a+_k a+_-k/(e + 2i xi) + b+_k b+_-k/(e - 2i xi)]|0>
              + 2i sin(k/2) [a+_k b+_k a+_-k b+_-k/(e + 2 eta) - 1/(e - 2 eta)]|0>

for ``n = 1..5`` with ``e = eps_n^k / J``, and
``Lbar_6|0> = (e^{ik/2} a+_k b+_-k - e^{-ik/2} b+_k a+_-k)|0> / sqrt(2)``.  The left
partner is the conjugate of the right state at ``-xi`` and ``conj(e)``, because
``h_k(xi)^dagger = h_k(-xi)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateDenominatorError
from ..model import FieldPoint, dispersion, normalization_factor
from .eigen import eigenvalues_dense, right_eigenvector

MODES = ("alpha_k", "alpha_-k", "beta_k", "beta_-k")
A_K, A_MK, B_K, B_MK = range(4)


def _annihilators(n_modes: int = 4):
    dim = 2 ** n_modes
    ops = []
    for i in range(n_modes):
        c = np.zeros((dim, dim))
        for s in range(dim):
            if (s >> i) & 1:
                c[s ^ (1 << i), s] = (-1) ** bin(s & ((1 << i) - 1)).count("1")
        ops.append(c)
    return ops


@dataclass(frozen=True)
class FockBlockBasis:
    """Occupation basis of the four block modes; index bit ``i`` is mode ``i``."""

    modes: tuple = MODES
    annihilators: tuple = field(default_factory=lambda: tuple(_annihilators()), repr=False)

    @property
    def dim(self) -> int:
        return 2 ** len(self.modes)

    def occupation(self, index: int) -> tuple[int, ...]:
        return tuple((index >> i) & 1 for i in range(len(self.modes)))

    def c(self, mode: int) -> np.ndarray:
        return self.annihilators[mode]

    def cdag(self, mode: int) -> np.ndarray:
        return self.annihilators[mode].T

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    def create(self, *modes: int) -> np.ndarray:
        """``c+_{m1} c+_{m2} ... |0>`` (rightmost creator applied first)."""
        v = self.vacuum()
        for m in reversed(modes):
            v = self.cdag(m) @ v
        return v


BASIS = FockBlockBasis()


def build_hk_block(k: float, p: FieldPoint) -> np.ndarray:
    """``J h_k`` on the 16-dim Fock block, constant ``+2 eta`` of each half included."""
    f = BASIS
    c, cd = f.c, f.cdag
    ga, gb = p.eta + 1j * p.xi, p.eta - 1j * p.xi
    eye = np.eye(f.dim)

    def half(a, b, a_m, b_m, q):
        e = cmath.exp(1j * q)
        return ((e + 1) * cd(a) @ c(b) + (1 / e + 1) * cd(b) @ c(a)
                + (e - 1) * cd(a) @ cd(b_m) + (1 - 1 / e) * c(a) @ c(b_m)
                + 2 * p.eta * eye - 2 * ga * cd(a) @ c(a) - 2 * gb * cd(b) @ c(b))

    h = half(A_K, B_K, A_MK, B_MK, k) + half(A_MK, B_MK, A_K, B_K, -k)
    return p.J * h


def _pair_vector(n: int, k: float, eta: float, xi: float, e: complex) -> np.ndarray:
    f = BASIS
    ph = cmath.exp(0.5j * k)
    ab = f.create(A_K, B_MK)
    ba = f.create(B_K, A_MK)
    if n == 6:
        return (ph * ab - ba / ph) / math.sqrt(2.0)
    dens = (e + 2j * xi, e - 2j * xi, e + 2 * eta, e - 2 * eta)
    c2, s2 = math.cos(k / 2), math.sin(k / 2)
    return (ph * ab + ba / ph
            + 2 * c2 * (f.create(A_K, A_MK) / dens[0] + f.create(B_K, B_MK) / dens[1])
            + 2j * s2 * (f.create(A_K, B_K, A_MK, B_MK) / dens[2] - f.vacuum() / dens[3]))


def _check_denominators(n, k, p, e, tol):
    if n == 6:
        return
    dens = (e + 2j * p.xi, e - 2j * p.xi, e + 2 * p.eta, e - 2 * p.eta)
    c2, s2 = math.cos(k / 2) ** 2, math.sin(k / 2) ** 2
    weights = (c2, c2, s2, s2)
    if any(wt > 0 and abs(d) < tol for d, wt in zip(dens, weights)):
        raise DegenerateDenominatorError(f"resonant denominator for n={n}, k={k}, p={p}")


def _omega(n, k, p, e):
    if n == 6:
        return 1.0
    if n == 5:
        dens = (e + 2j * p.xi, e - 2j * p.xi, e + 2 * p.eta, e - 2 * p.eta)
        c2, s2 = math.cos(k / 2) ** 2, math.sin(k / 2) ** 2
        return complex(np.sqrt(complex(2 + 4 * c2 * (dens[0] ** -2 + dens[1] ** -2)
                                       + 4 * s2 * (dens[2] ** -2 + dens[3] ** -2))))
    return normalization_factor(n, k, p)


def composite_state(n: int, k: float, p: FieldPoint, method: str = "closed",
                    tol: float = 1e-10) -> np.ndarray:
    """Right pair state ``Lbar_n^k|0>`` divided by ``Omega_n^k``.

    ``method="numeric"`` (branches 1-4) takes the block eigenvector from inverse
    iteration at ``2 eps_n^k`` and rescales it onto the closed form's
    ``e^{ik/2} a+_k b+_-k`` coefficient.
    """
    if n not in range(1, 7):
        raise ValueError(f"branch index must be in 1..6, got {n}")
    e = complex(dispersion(n, k, p)) / p.J
    _check_denominators(n, k, p, e, tol)
    closed = _pair_vector(n, k, p.eta, p.xi, e) / _omega(n, k, p, e)
    if method == "closed":
        return closed
    if method != "numeric" or n > 4:
        raise ValueError("numeric reconstruction is available for branches 1..4 only")
    h = build_hk_block(k, p)
    v = right_eigenvector(h, 2 * e * p.J)
    pin = int(np.abs(BASIS.create(A_K, B_MK)).argmax())
    return v * (closed[pin] / v[pin])


def left_state(n: int, k: float, p: FieldPoint, tol: float = 1e-10) -> np.ndarray:
    """Row vector ``<0|L_n^k``: the right state at ``-xi``, conjugated, same ``Omega``."""
    if n not in range(1, 7):
        raise ValueError(f"branch index must be in 1..6, got {n}")
    e = complex(dispersion(n, k, p)) / p.J
    _check_denominators(n, k, p, e, tol)
    return (_pair_vector(n, k, p.eta, -p.xi, e.conjugate()).conj()
            / _omega(n, k, p, e))


def biorthogonality_matrix(k: float, p: FieldPoint) -> np.ndarray:
    """``M[m, n] = <0|L_m Lbar_n|0>`` for ``m, n = 1..6``."""
    rights = [composite_state(n, k, p) for n in range(1, 7)]
    lefts = [left_state(n, k, p) for n in range(1, 7)]
    return np.array([[lm @ rn for rn in rights] for lm in lefts])


@dataclass(frozen=True)
class BlockReport:
    k: float
    point: FieldPoint
    eigen_gap: float  # worst |2 eps_n - nearest block eigenvalue|
    residuals: tuple  # ||h v - 2 eps v|| / ||h|| per branch
    biortho_defect: float  # max |M - I|


def block_check(k: float, p: FieldPoint) -> BlockReport:
    h = build_hk_block(k, p)
    w = eigenvalues_dense(h)
    targets = [2 * complex(dispersion(n, k, p)) for n in range(1, 7)]
    gap = max(float(np.min(np.abs(w - t))) for t in targets)
    hn = float(np.linalg.norm(h, 2))
    res = tuple(float(np.linalg.norm(h @ composite_state(n, k, p) - t * composite_state(n, k, p)) / hn)
                for n, t in zip(range(1, 7), targets))
    m = biorthogonality_matrix(k, p)
    return BlockReport(k, p, gap, res, float(np.abs(m - np.eye(6)).max()))


def _gauged_ground_pair(k, eta, xi, J):
    p = FieldPoint(eta, xi, J)
    r = composite_state(1, k, p)
    l = left_state(1, k, p)
    nz = np.flatnonzero(np.abs(r) > 1e-12)
    if nz.size == 0:
        raise DegenerateDenominatorError("gauge pin vanished")
    phase = r[nz[0]] / abs(r[nz[0]])
    return r / phase, l * phase


def block_ground_overlap_check(k: float, p: FieldPoint, h: float = 1e-4) -> float:
    """``|<d_xi G~|d_eta G> - <d_eta G~|d_xi G>|`` for the lowest pair state.

    Derivatives are central differences of the biorthonormal pair with the
    first nonzero right component made real and positive.
    """
    if not h > 0:
        raise ValueError("step must be positive")
    r_e, l_e = _gauged_ground_pair(k, p.eta + h, p.xi, p.J)
    r_w, l_w = _gauged_ground_pair(k, p.eta - h, p.xi, p.J)
    r_n, l_n = _gauged_ground_pair(k, p.eta, p.xi + h, p.J)
    r_s, l_s = _gauged_ground_pair(k, p.eta, p.xi - h, p.J)
    r_eta, l_eta = (r_e - r_w) / (2 * h), (l_e - l_w) / (2 * h)
    r_xi, l_xi = (r_n - r_s) / (2 * h), (l_n - l_s) / (2 * h)
    return float(abs(l_xi @ r_eta - l_eta @ r_xi))
