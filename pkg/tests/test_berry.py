import math

import numpy as np
import pytest

from ptising.berry import (
    DIFF,
    PRESETS,
    SUM,
    ZERO,
    ThetaMap,
    chi_prefactor,
    curvature_density,
    curvature_preset_diff,
    curvature_preset_sum,
)
from ptising.errors import GaplessPointError
from ptising.model import FieldPoint
from ptising.response import second_partials


def random_points(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        eta, xi = rng.uniform(-2, 2, 2)
        p = FieldPoint(eta, xi)
        if abs(p.r - 1) > 1e-3 and abs(eta) > 1e-3:
            out.append(p)
    return out


def test_zero_map_is_exactly_zero():
    for p in random_points(20, 0) + [FieldPoint(0.0, 2.0), FieldPoint(0.6, 0.8)]:
        assert curvature_density(p, ZERO) == 0


def test_presets_match_general_formula():
    for p in random_points(100, 1):
        assert abs(curvature_preset_sum(p) - curvature_density(p, SUM)) < 1e-12
        assert abs(curvature_preset_diff(p) - curvature_density(p, DIFF)) < 1e-12


def test_preset_forms():
    p = FieldPoint(0.5, 0.0)
    d2_eta, d2_xi, mixed = second_partials(p)
    assert mixed == 0
    assert curvature_preset_sum(p) == pytest.approx(-2j * d2_eta, abs=1e-14)
    assert curvature_preset_diff(p) == pytest.approx(-2 * d2_xi, abs=1e-14)
    # the sum preset is purely imaginary and the diff preset purely real
    for q in random_points(10, 2):
        assert curvature_preset_sum(q).real == 0
        assert curvature_preset_diff(q).imag == 0


def test_field_dependent_map():
    # theta_a = eta^2, theta_b = xi: partials (2 eta, 0, 0, 1)
    theta = ThetaMap(lambda p: 2 * p.eta, lambda p: 0.0, lambda p: 0.0, lambda p: 1.0)
    p = FieldPoint(0.4, 0.3)
    d2_eta, d2_xi, mixed = second_partials(p)
    dma_xi = 2 * mixed + 2j * d2_xi
    dmb_eta = 2 * d2_eta - 2j * mixed
    expected = 0.5j * (2 * p.eta * dma_xi - dmb_eta)
    assert curvature_density(p, theta) == pytest.approx(expected, abs=1e-14)
    assert theta.partials(p) == (0.8, 0.0, 0.0, 1.0)


def test_presets_registry():
    assert set(PRESETS) == {"sum", "diff", "zero"}
    assert SUM.partials(FieldPoint(0, 0)) == (1.0, 1.0, 1.0, 1.0)
    assert DIFF.partials(FieldPoint(0, 0)) == (1.0, 1.0, -1.0, -1.0)


def test_gapless_point_propagates():
    with pytest.raises(GaplessPointError):
        curvature_preset_sum(FieldPoint(0.0, 5.0))


@pytest.mark.parametrize("phi, value", [
    (math.pi / 4, 0.0), (0.0, -2.0), (math.pi / 2, 0.0), (5 * math.pi / 4, 0.0), (math.pi / 3, math.sqrt(3) / 2 - 0.5),
])
def test_chi_prefactor(phi, value):
    assert chi_prefactor(phi) == pytest.approx(value, abs=1e-15)


def _ray_slope(fn, phi):
    xs, ys = [], []
    for d in (1e-2, 1e-3, 1e-4, 1e-5):
        for sign in (1, -1):
            r = 1 + sign * d
            xs.append(math.log(d))
            ys.append(fn(FieldPoint(r * math.cos(phi), r * math.sin(phi))))
    return np.polyfit(xs, ys, 1)[0]


@pytest.mark.parametrize("phi", [0.0, math.pi / 6, math.pi / 3, 2.0])
def test_circle_divergence_follows_chi(phi):
    # near r = 1 only the radial second derivative diverges, like ln|r - 1| / (pi |cos phi|)
    c, s = math.cos(phi), math.sin(phi)
    slope_sum = _ray_slope(lambda p: curvature_preset_sum(p).imag, phi)
    assert slope_sum == pytest.approx(chi_prefactor(phi) / (math.pi * abs(c)), rel=2e-3)
    slope_diff = _ray_slope(lambda p: curvature_preset_diff(p).real, phi)
    assert slope_diff == pytest.approx(2 * s * (c - s) / (math.pi * abs(c)), rel=5e-3, abs=1e-3)


def test_sum_preset_bounded_at_quarter_angle():
    phi = math.pi / 4
    vals = [abs(curvature_preset_sum(FieldPoint((1 + d) * math.cos(phi), (1 + d) * math.sin(phi))))
            for d in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert max(vals) < 1.0
    assert max(vals) - min(vals) < 0.01


def test_axis_selectivity():
    sums = [curvature_preset_sum(FieldPoint(e, 5.0)) for e in (1e-2, 1e-4, 1e-6)]
    diffs = [curvature_preset_diff(FieldPoint(e, 5.0)) for e in (1e-2, 1e-4, 1e-6)]
    assert all(abs(d) < 0.01 for d in diffs)
    assert abs(sums[2]) > abs(sums[1]) > abs(sums[0])
    # Im C = 2 (d2_mixed - d2_eta); value frozen from the closed-form derivatives
    slope = np.polyfit(np.log([1e-2, 1e-4, 1e-6]), [s.imag for s in sums], 1)[0]
    assert slope == pytest.approx(-1.2477, abs=2e-3)
