import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptising.errors import DegenerateDenominatorError
from ptising.model import (
    FieldPoint,
    Sector,
    dispersion,
    eps1,
    inner_radical,
    momentum_grid,
    normalization_factor,
    to_polar,
)

fields = st.floats(-3, 3, allow_nan=False)
momenta = st.floats(0, math.pi)


def test_field_point_rejects_bad_coupling():
    with pytest.raises(ValueError):
        FieldPoint(0.1, 0.2, J=0.0)
    with pytest.raises(ValueError):
        FieldPoint(math.nan, 0.2)


@pytest.mark.parametrize("eta, xi, r, phi", [
    (1.0, 0.0, 1.0, 0.0),
    (0.0, 0.0, 0.0, 0.0),
    (0.6, 0.8, 1.0, 0.9272952180016122),
    (0.0, -1.0, 1.0, 1.5 * math.pi),
])
def test_to_polar_examples(eta, xi, r, phi):
    got_r, got_phi = to_polar(FieldPoint(eta, xi))
    assert got_r == pytest.approx(r, abs=1e-15)
    assert got_phi == pytest.approx(phi, abs=1e-12)


@given(fields, fields)
def test_to_polar_round_trip(eta, xi):
    r, phi = to_polar(FieldPoint(eta, xi))
    assert 0.0 <= phi < 2 * math.pi
    assert r * math.cos(phi) == pytest.approx(eta, abs=1e-12)
    assert r * math.sin(phi) == pytest.approx(xi, abs=1e-12)


def test_momentum_grid_examples():
    g = momentum_grid(8, Sector.EVEN)
    assert np.allclose(g.momenta, [math.pi / 4, 3 * math.pi / 4])
    assert np.allclose(momentum_grid(4).momenta, [math.pi / 2])
    g = momentum_grid(600)
    assert g.momenta.size == 150
    assert g.momenta.max() == pytest.approx(2 * math.pi * 149.5 / 300) and g.momenta.max() < math.pi
    assert np.all(np.diff(g.momenta) > 0)
    assert np.all(g.pair_weight == 1.0)


def test_momentum_grid_odd_cells_and_odd_sector():
    # N = 3: EVEN momenta pi/3 and the self-conjugate pi
    g = momentum_grid(6)
    assert np.allclose(g.momenta, [math.pi / 3, math.pi])
    assert list(g.pair_weight) == [1.0, 0.5]
    g = momentum_grid(8, Sector.ODD)
    assert np.allclose(g.momenta, [0, math.pi / 2, math.pi])
    assert list(g.pair_weight) == [0.5, 1.0, 0.5]


@pytest.mark.parametrize("bad", [2, 5, 7, 0, -4, 4.5, True])
def test_momentum_grid_rejects(bad):
    with pytest.raises(ValueError):
        momentum_grid(bad)


def test_inner_radical_examples():
    assert inner_radical(1.3, 0.0) == pytest.approx(1.0)
    assert inner_radical(0.0, 1.0) == 0.0
    assert inner_radical(math.pi / 2, 1.0) == pytest.approx(math.sqrt(2))


def test_inner_radical_lower_bound_random():
    rng = np.random.default_rng(1)
    k = rng.uniform(0, 2 * math.pi, 10 ** 6)
    r = rng.uniform(0, 3, 10 ** 6)
    assert np.all(inner_radical(k, r) >= np.abs(r ** 2 - 1) - 1e-15)
    direct = np.sqrt(r ** 4 - 2 * r ** 2 * np.cos(k) + 1)
    assert np.allclose(inner_radical(k, r), direct, rtol=1e-7, atol=1e-7)


@pytest.mark.parametrize("n, k, eta, xi, expected", [
    (1, 0.7, 0.0, 0.0, 2.0),
    (1, math.pi, 1.0, 0.0, math.sqrt(8)),
    (1, 0.0, 0.6, 0.8, 1.2),
    (5, 0.3, 0.4, 0.2, 0.0),
    (6, 0.3, 0.4, 0.2, 0.0),
])
def test_dispersion_examples(n, k, eta, xi, expected):
    assert dispersion(n, k, FieldPoint(eta, xi)) == pytest.approx(expected, abs=1e-12)


def test_dispersion_matches_radical_form():
    # eps_1 = sqrt(2 r^2 cos 2phi + 2 sqrt(r^4 - 2 r^2 cos k + 1) + 2), eps_3 with -2 sqrt(...)
    rng = np.random.default_rng(2)
    for _ in range(200):
        p = FieldPoint(*rng.uniform(-2, 2, 2))
        k = rng.uniform(0, math.pi)
        r, phi = to_polar(p)
        rad = math.sqrt(r ** 4 - 2 * r * r * math.cos(k) + 1)
        e1 = np.sqrt(complex(2 * r * r * math.cos(2 * phi) + 2 * rad + 2))
        e3 = np.sqrt(complex(2 * r * r * math.cos(2 * phi) - 2 * rad + 2))
        assert dispersion(1, k, p) == pytest.approx(e1, abs=1e-9)
        assert dispersion(3, k, p) == pytest.approx(e3, abs=1e-9)


@settings(max_examples=200)
@given(fields, fields, momenta)
def test_dispersion_symmetries(eta, xi, k):
    p = FieldPoint(eta, xi)
    for n in range(1, 7):
        v = dispersion(n, k, p)
        assert dispersion(n, k, p.reflected(-1, 1)) == v
        assert dispersion(n, k, p.reflected(1, -1)) == v
    assert dispersion(1, k, p) + dispersion(2, k, p) == 0
    assert dispersion(3, k, p) + dispersion(4, k, p) == 0
    e1 = dispersion(1, k, p)
    assert e1.imag == 0 and e1.real >= 0
    e3 = dispersion(3, k, p)
    assert e3.real >= 0
    if e3.real == 0:
        assert e3.imag >= 0


def test_dispersion_scales_with_coupling():
    p, q = FieldPoint(0.4, 0.3), FieldPoint(0.4, 0.3, J=2.5)
    assert dispersion(1, 1.1, q) == pytest.approx(2.5 * dispersion(1, 1.1, p))


def test_dispersion_rejects_branch():
    with pytest.raises(ValueError):
        dispersion(7, 0.1, FieldPoint(0, 0))


@pytest.mark.parametrize("eta, xi", [(0.3, 0.2), (1.4, 0.5), (0.6, 0.8), (0.1, 1.5)])
def test_small_k_limit_matches_boundary_form(eta, xi):
    p = FieldPoint(eta, xi)
    s = eta * eta + xi * xi
    closed = math.sqrt(2 * (eta * eta - xi * xi) + 2 * abs(s - 1) + 2)
    assert eps1(1e-6, p) == pytest.approx(closed, abs=1e-10 + 1e-6)
    assert eps1(0.0, p) == pytest.approx(closed, abs=1e-12)


def test_eps1_hermitian_limit_matches_tfim():
    # uniform transverse-field Ising: the pair energy is 2 sqrt(1 + eta^2 + 2 eta cos(k/2))
    # and its partner 2 sqrt(1 + eta^2 - 2 eta cos(k/2)) in the doubled cell
    eta = 0.7
    k = np.linspace(0.01, math.pi, 50)
    p = FieldPoint(eta, 0.0)
    lam_plus = 2 * np.sqrt(1 + eta ** 2 + 2 * eta * np.cos(k / 2))
    lam_minus = 2 * np.sqrt(1 + eta ** 2 - 2 * eta * np.cos(k / 2))
    assert np.allclose(np.real(dispersion(1, k, p)), 0.5 * (lam_plus + lam_minus), atol=1e-12)
    assert np.allclose(np.real(dispersion(3, k, p)), 0.5 * (lam_plus - lam_minus), atol=1e-12)


def test_normalization_examples():
    p = FieldPoint(0.0, 0.0)
    assert normalization_factor(1, 1e-9, p) == pytest.approx(2.0, abs=1e-8)
    assert normalization_factor(1, math.pi, p) == pytest.approx(2.0)


def test_normalization_degenerate():
    # at the origin eps_3 vanishes at k = 0, so every denominator is zero
    p = FieldPoint(0.0, 0.0)
    with pytest.raises(DegenerateDenominatorError):
        normalization_factor(3, 0.0, p)
    assert abs(normalization_factor(1, 1.0, p)) > 0
    with pytest.raises(ValueError):
        normalization_factor(5, 1.0, p)
