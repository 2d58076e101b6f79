"""Exact diagonalisation of the full ring.

The basis is the eigenbasis of every ``sigma^x_j``: bit ``j-1`` of the state
index is the Jordan-Wigner occupation of site ``j``, and ``sigma^x_j = 1 - 2 n_j``.
In this basis ``sigma^z_j sigma^z_{j+1}`` flips two neighbouring bits with
amplitude 1, the fermion parity is ``(-1)^popcount``, parity ``P`` (site
reflection ``j -> 2N + 1 - j``) is a bit reversal, and time reversal ``T`` is
complex conjugation since ``sigma^x`` and ``sigma^z`` are real.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..model import FieldPoint, Sector, dispersion, momentum_grid
from ..spectrum import ground_energy
from .eigen import eigenvalues_dense, left_eigenvector, right_eigenvector

MAX_SITES = 12


def _check_sites(two_n: int):
    if isinstance(two_n, bool) or int(two_n) != two_n or two_n % 2 or not 4 <= two_n <= MAX_SITES:
        raise ValueError(f"chain oracle needs an even site count in [4, {MAX_SITES}], got {two_n}")
    return int(two_n)


def site_fields(two_n: int, p: FieldPoint) -> np.ndarray:
    """``g_j`` for ``j = 1..two_n``: ``eta + i xi`` on even sites, ``eta - i xi`` on odd."""
    j = np.arange(1, two_n + 1)
    return np.where(j % 2 == 0, p.eta + 1j * p.xi, p.eta - 1j * p.xi)


def _occupations(two_n):
    states = np.arange(2 ** two_n)
    return (states[:, None] >> np.arange(two_n)) & 1


def build_chain_hamiltonian(two_n: int, p: FieldPoint) -> np.ndarray:
    """``H = -J sum_j (sigma^z_j sigma^z_{j+1} + g_j sigma^x_j)`` on a periodic ring."""
    two_n = _check_sites(two_n)
    dim = 2 ** two_n
    occ = _occupations(two_n)
    g = site_fields(two_n, p)
    h = np.zeros((dim, dim), dtype=complex)
    states = np.arange(dim)
    h[states, states] = -p.J * ((1 - 2 * occ) @ g)
    for j in range(two_n):
        flipped = states ^ (1 << j) ^ (1 << ((j + 1) % two_n))
        h[flipped, states] += -p.J
    return h


def parity_and_projectors(two_n: int):
    """``(Pi, P_plus, P_minus)`` with ``Pi = prod_j sigma^x_j`` and ``P_pm = (1 pm Pi)/2``."""
    two_n = _check_sites(two_n)
    signs = 1.0 - 2.0 * (_occupations(two_n).sum(axis=1) % 2)
    pi = np.diag(signs)
    eye = np.eye(2 ** two_n)
    return pi, (eye + pi) / 2, (eye - pi) / 2


def sector_indices(two_n: int, sector: Sector) -> np.ndarray:
    parity = _occupations(two_n).sum(axis=1) % 2
    return np.flatnonzero(parity == (0 if sector is Sector.EVEN else 1))


def reflection_permutation(two_n: int) -> np.ndarray:
    """``perm[s]`` is the image of basis state ``s`` under ``j -> 2N + 1 - j``."""
    occ = _occupations(two_n)
    return occ[:, ::-1] @ (1 << np.arange(two_n))


@dataclass(frozen=True)
class PTReport:
    pt_defect: float  # ||P conj(H) P^-1 - H||_max
    p_defect: float  # ||P H P^-1 - H||_max
    t_defect: float  # ||conj(H) - H||_max


def pt_check(two_n: int, p: FieldPoint) -> PTReport:
    h = build_chain_hamiltonian(two_n, p)
    perm = reflection_permutation(two_n)
    reflected = np.empty_like(h)
    reflected[np.ix_(perm, perm)] = h  # P H P^-1
    pt = np.empty_like(h)
    pt[np.ix_(perm, perm)] = h.conj()
    return PTReport(
        pt_defect=float(np.abs(pt - h).max()),
        p_defect=float(np.abs(reflected - h).max()),
        t_defect=float(np.abs(h.conj() - h).max()),
    )


def sector_spectrum(two_n: int, p: FieldPoint, sector: Sector) -> np.ndarray:
    h = build_chain_hamiltonian(two_n, p)
    idx = sector_indices(two_n, sector)
    return eigenvalues_dense(h[np.ix_(idx, idx)])


@dataclass(frozen=True)
class SectorReport:
    two_n: int
    point: FieldPoint
    even_min: complex
    odd_min: complex
    free_fermion: complex
    difference: float
    lowest_sector: Sector

    def agrees(self, tol: float = 1e-8) -> bool:
        return self.difference < tol * max(1.0, abs(self.free_fermion))


def _lowest_real(values):
    return complex(values[np.argmin(values.real)])


def sector_ground_compare(two_n: int, p: FieldPoint) -> SectorReport:
    """Lowest-real-part eigenvalue per parity sector against the free-fermion ``E_g``."""
    two_n = _check_sites(two_n)
    even = _lowest_real(sector_spectrum(two_n, p, Sector.EVEN))
    odd = _lowest_real(sector_spectrum(two_n, p, Sector.ODD))
    ff = ground_energy(two_n, p).e_total
    lowest = Sector.EVEN if even.real <= odd.real else Sector.ODD
    return SectorReport(two_n, p, even, odd, ff, abs(even - ff), lowest)


def free_fermion_spectrum(two_n: int, p: FieldPoint) -> np.ndarray:
    """EVEN-sector spectrum rebuilt from quasiparticles, sorted by ``(Re, Im)``.

    Each half-zone momentum carries four modes with energies
    ``J(eps_1 + eps_3)`` and ``J(eps_1 - eps_3)``, each twice (``k`` and ``-k``);
    every even-occupation subset on top of ``E_g`` is an eigenvalue.  Needs an
    even number of cells so that no momentum is self-conjugate.
    """
    two_n = _check_sites(two_n)
    if (two_n // 2) % 2:
        raise ValueError("free-fermion reconstruction needs two_n divisible by 4")
    grid = momentum_grid(two_n, Sector.EVEN)
    modes = []
    for k in grid.momenta:
        e1 = complex(dispersion(1, k, p))
        e3 = complex(dispersion(3, k, p))
        modes += [e1 + e3, e1 + e3, e1 - e3, e1 - e3]
    modes = np.array(modes)
    eg = ground_energy(two_n, p).e_total
    levels = []
    for occ in itertools.product((0, 1), repeat=modes.size):
        if sum(occ) % 2 == 0:
            levels.append(eg + np.dot(occ, modes))
    levels = np.array(levels)
    return levels[np.lexsort((levels.imag, levels.real))]


@dataclass(frozen=True)
class GroundState:
    energy: complex
    right: np.ndarray  # full-space vector
    left: np.ndarray  # row vector with left @ right = 1


def ground_state(two_n: int, p: FieldPoint) -> GroundState:
    """Biorthonormal EVEN-sector ground pair by inverse iteration."""
    h = build_chain_hamiltonian(two_n, p)
    idx = sector_indices(two_n, Sector.EVEN)
    block = h[np.ix_(idx, idx)]
    lam = _lowest_real(eigenvalues_dense(block))
    r = right_eigenvector(block, lam)
    l = left_eigenvector(block, lam)
    l = l / (l @ r)
    right = np.zeros(h.shape[0], dtype=complex)
    left = np.zeros(h.shape[0], dtype=complex)
    right[idx] = r
    left[idx] = l
    return GroundState(lam, right, left)


def ground_state_pt_overlap(two_n: int, p: FieldPoint) -> complex:
    """``<G~| PT |G>``; unimodular when the ground state is PT symmetric."""
    gs = ground_state(two_n, p)
    perm = reflection_permutation(two_n)
    image = np.empty_like(gs.right)
    image[perm] = gs.right.conj()
    return complex(gs.left @ image)


def sublattice_magnetization(two_n: int, p: FieldPoint) -> tuple[complex, complex]:
    """Biorthogonal ``(1/N) <G~| sum sigma^x |G>`` over sublattice a (even) and b (odd)."""
    two_n = _check_sites(two_n)
    gs = ground_state(two_n, p)
    sx = 1 - 2 * _occupations(two_n)
    j = np.arange(1, two_n + 1)
    n_cells = two_n // 2
    out = []
    for mask in (j % 2 == 0, j % 2 == 1):
        diag = sx[:, mask].sum(axis=1)
        out.append(complex(gs.left @ (diag * gs.right)) / n_cells)
    return out[0], out[1]
