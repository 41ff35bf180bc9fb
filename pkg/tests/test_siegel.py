from fractions import Fraction

import numpy as np
import pytest

from errors import CotPole, InsufficientOrder, RationalInput, SmallDivisorOverflow
from siegel.carleson import (RADII_COUNT, boundary_angle_probe, carleson_recursion, cot_weights, deviation_from_f0,
                             dual_construction_gap, f_from_h, h0_model)
from siegel.linearization import SiegelFamily, conjugacy_residual, linearize, series_P_rho, small_divisor_scan
from siegel.power_series import PowerSeries
from siegel.rotation_number import GOLDEN, continued_fraction


def test_golden_continued_fraction():
    rotation = continued_fraction("golden", 10)
    assert rotation.continued_fraction == [1] * 10
    assert rotation.convergents[-1] == (55, 89)
    assert rotation.bounded_type_bound == 1
    assert rotation.reconstructs()


def test_rational_rotation_number():
    with pytest.raises(RationalInput):
        continued_fraction(0.5)
    with pytest.raises(RationalInput):
        continued_fraction(1 / 3)
    with pytest.raises(RationalInput):
        continued_fraction(2 / 7)
    with pytest.raises(ValueError):
        continued_fraction(1.5)


def test_small_divisor_scan():
    n, divisor = small_divisor_scan(SiegelFamily(1.0, "golden"), 64)
    # 55 theta is the closest return below 64
    assert n == 56
    assert divisor == pytest.approx(2 * abs(np.sin(np.pi * 55 * GOLDEN)))


def test_linearizer_conjugates():
    family = SiegelFamily(1.0, "golden")
    h = linearize(family, 64)
    assert h[0] == 0
    assert h[1] == 1
    assert conjugacy_residual(family, h) < 1e-8


def test_small_divisor_overflow():
    with pytest.raises(SmallDivisorOverflow):
        linearize(SiegelFamily(1.0, 0.5 + 1e-14), 16)


def test_family_validation():
    with pytest.raises(ValueError):
        SiegelFamily(-1.0, "golden")
    with pytest.raises(ValueError):
        SiegelFamily(1.0, 0.0)


def test_recursion_without_cot_weights_is_constant():
    f = carleson_recursion("golden", 1.0, 20, drop_imaginary=True)
    assert np.allclose(f.coefficients, 2.0 / 3.0)
    assert deviation_from_f0(f, 1.0) < 1e-12


def test_recursion_with_cot_weights_moves_away():
    f = carleson_recursion("golden", 1.0, 20)
    assert f[0] == pytest.approx(2.0 / 3.0)
    assert deviation_from_f0(f, 1.0) > 1e-6


def test_cot_pole():
    with pytest.raises(CotPole) as info:
        cot_weights(0.5, 4)
    assert info.value.nu == 1


def test_model_linearizer_gives_constant_f():
    f = f_from_h(h0_model(1.0, 30))
    assert f.order == 29
    assert np.allclose(f.coefficients, 2.0 / 3.0, atol=1e-10)


def test_boundary_angle_needs_order():
    with pytest.raises(InsufficientOrder):
        boundary_angle_probe(PowerSeries(np.zeros(101)))


def test_exact_reciprocal():
    series = PowerSeries([Fraction(1), Fraction(-1)], order=5)
    inverse = series.reciprocal()
    assert inverse.exact
    assert list(inverse.coefficients) == [Fraction(1)] * 6


def test_series_arithmetic():
    z = PowerSeries.variable(4)
    square = (1 + z) * (1 + z)
    assert np.allclose(square.coefficients, [1, 2, 1, 0, 0])
    assert np.allclose(square.compose(z * 2).coefficients, [1, 4, 4, 0, 0])
    assert square(0.5) == pytest.approx(2.25)


@pytest.mark.parametrize("rho, N, expected", [
    (1.0, 5, [0, 1, -1 / 2, 0, 0, 0]),
    (2.0, 3, [0, 1, -1, 1 / 3]),
])
def test_series_P_rho(rho, N, expected):
    family = SiegelFamily(rho, "golden")
    P = series_P_rho(family, N)
    assert np.allclose(P.coefficients, family.lam * np.array(expected), atol=1e-15)


def test_dual_construction_agrees():
    report = dual_construction_gap("golden", 1.0, 128)
    assert report["order"] == 40
    assert report["gap"] < 1e-6


def test_recursion_deviation_is_finite_at_order_200():
    f = carleson_recursion("golden", 1.0, 200)
    deviation = deviation_from_f0(f, 1.0)
    # the bound is an expectation, a miss is data
    assert np.isfinite(deviation)
    assert deviation > 0


@pytest.mark.parametrize("rho, angle", [(1.0, 120.0), (2.0, 90.0)])
def test_corner_angle_of_model_linearizer(rho, angle):
    report = boundary_angle_probe(h0_model(rho, 512))
    assert report["angle"] == pytest.approx(angle, abs=2.0)
    low, high = report["band"]
    assert low <= report["angle"] <= high
    assert len(report["per_radius"]) == RADII_COUNT


def test_boundary_angle_rejects_bad_radii():
    with pytest.raises(ValueError):
        boundary_angle_probe(h0_model(1.0, 256), radii=[0.9, 0.8])
