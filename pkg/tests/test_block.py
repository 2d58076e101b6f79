import math

import numpy as np
import pytest

from ptising.errors import DegenerateDenominatorError
from ptising.model import FieldPoint, dispersion
from ptising.oracle.block import (
    A_K,
    A_MK,
    B_K,
    B_MK,
    BASIS,
    biorthogonality_matrix,
    block_check,
    block_ground_overlap_check,
    build_hk_block,
    composite_state,
    left_state,
)
from ptising.oracle.eigen import eigenvalues_dense

POINTS = [FieldPoint(0.5, 0.4), FieldPoint(1.3, 0.7), FieldPoint(0.2, 1.6), FieldPoint(-0.8, 0.3),
          FieldPoint(0.6, -1.1, J=1.7)]


def test_fock_basis_anticommutation():
    c, cd = BASIS.c, BASIS.cdag
    eye = np.eye(16)
    for i in range(4):
        for j in range(4):
            assert np.allclose(c(i) @ cd(j) + cd(j) @ c(i), eye * (i == j))
            assert np.allclose(c(i) @ c(j) + c(j) @ c(i), 0)
    assert BASIS.occupation(0b0101) == (1, 0, 1, 0)
    v = BASIS.create(A_K, B_MK)
    assert np.abs(v).sum() == 1 and v[0b1001] in (1, -1)


def test_block_conserves_parity():
    h = build_hk_block(0.9, FieldPoint(0.5, 0.4))
    odd = np.array([bin(s).count("1") % 2 for s in range(16)])
    assert np.abs(h[np.ix_(odd == 0, odd == 1)]).max() == 0
    assert np.abs(h[np.ix_(odd == 1, odd == 0)]).max() == 0


def test_block_hermitian_on_real_axis():
    h = build_hk_block(1.1, FieldPoint(0.7, 0.0))
    assert np.allclose(h, h.conj().T, atol=0)
    h1 = build_hk_block(1.1, FieldPoint(0.7, 0.3))
    h2 = build_hk_block(1.1, FieldPoint(0.7, -0.3))
    assert np.allclose(h1.conj().T, h2)


@pytest.mark.parametrize("p", POINTS, ids=str)
def test_block_spectrum_contains_pair_energies(p):
    for k in np.linspace(0.1, math.pi - 0.1, 20):
        rep = block_check(k, p)
        assert rep.eigen_gap < 1e-9
        assert max(rep.residuals) < 1e-12
        assert rep.biortho_defect < 1e-10


def test_biorthogonality_matrix():
    m = biorthogonality_matrix(0.7, FieldPoint(0.4, 0.9))
    assert m.shape == (6, 6)
    assert np.abs(m - np.eye(6)).max() < 1e-12


def test_left_is_conjugate_transpose_on_real_axis():
    p = FieldPoint(0.6, 0.0)
    for n in (1, 2, 3, 4, 6):
        r = composite_state(n, 1.2, p)
        assert np.allclose(left_state(n, 1.2, p), r.conj(), atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_numeric_state_matches_closed_form(n):
    p = FieldPoint(0.5, 0.4)
    a = composite_state(n, 0.8, p)
    b = composite_state(n, 0.8, p, method="numeric")
    assert np.abs(a - b).max() < 1e-10


def test_composite_state_errors():
    p = FieldPoint(0.5, 0.4)
    with pytest.raises(ValueError):
        composite_state(7, 0.5, p)
    with pytest.raises(ValueError):
        composite_state(5, 0.5, p, method="numeric")
    with pytest.raises(ValueError):
        left_state(0, 0.5, p)
    # on the real axis eps_5 = 0 meets the denominator e - 2i xi = 0
    with pytest.raises(DegenerateDenominatorError):
        composite_state(5, 0.5, FieldPoint(0.5, 0.0))


def test_pair_state_components():
    k, p = 0.9, FieldPoint(0.5, 0.4)
    e = complex(dispersion(1, k, p))
    v = composite_state(1, k, p)
    ratio = v[0b1001] / v[0b0110]  # a+_k b+_-k against b+_k a+_-k
    ab = BASIS.create(A_K, B_MK)[0b1001]
    ba = BASIS.create(B_K, A_MK)[0b0110]
    assert ratio == pytest.approx(np.exp(1j * k) * ab / ba)
    assert v[0] / v[0b1001] * ab == pytest.approx(-2j * math.sin(k / 2) / (e - 2 * p.eta) / np.exp(0.5j * k))


def test_block_ground_state_is_lowest():
    p = FieldPoint(0.5, 0.4)
    k = 1.0
    w = eigenvalues_dense(build_hk_block(k, p))
    lowest = w[np.argmin(w.real)]
    assert lowest == pytest.approx(-2 * complex(dispersion(1, k, p)), abs=1e-10)


def test_overlap_antisymmetry():
    rng = np.random.default_rng(9)
    for _ in range(5):
        k = rng.uniform(0.2, 3.0)
        p = FieldPoint(*rng.uniform(-1.5, 1.5, 2))
        assert block_ground_overlap_check(k, p) < 1e-6


def test_overlap_defect_scales_with_step():
    k, p = 1.3, FieldPoint(0.4, 0.7)
    d1 = block_ground_overlap_check(k, p, h=1e-2)
    d2 = block_ground_overlap_check(k, p, h=5e-3)
    assert d2 < d1 or d1 < 1e-10
    with pytest.raises(ValueError):
        block_ground_overlap_check(k, p, h=0)


def test_overlap_vanishes_on_real_axis():
    assert block_ground_overlap_check(math.pi / 3, FieldPoint(0.7, 0.0)) < 1e-8
    assert block_ground_overlap_check(math.pi / 3, FieldPoint(0.7, 0.5)) < 1e-6


def test_block_eigenvalue_sums_equal_traces():
    for k in (0.3, 1.7, 2.9):
        h = build_hk_block(k, FieldPoint(0.8, 0.4))
        assert abs(eigenvalues_dense(h).sum() - np.trace(h)) < 1e-9 * max(1.0, abs(np.trace(h)))
