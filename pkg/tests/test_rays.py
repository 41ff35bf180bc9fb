import cmath
from fractions import Fraction

import pytest

from algebra.polynomial import Polynomial
from errors import NotConnected
from experiments.base_experiment import load_map
from planes.rays import trace_external_ray

GOLDEN_RATIO = (1 + 5 ** 0.5) / 2


def test_zero_ray_of_basilica_lands_at_beta():
    path = trace_external_ray(Polynomial([-1.0, 0.0, 1.0]), Fraction(0), levels=30)
    assert path.landed
    assert abs(path.landing - GOLDEN_RATIO) < 1e-6
    assert path.potentials == sorted(path.potentials, reverse=True)


@pytest.mark.slow
def test_rabbit_ray_lands_at_alpha(presets):
    f = load_map("rabbit", presets)
    c = f.coefficients[0]
    alpha = (1 - cmath.sqrt(1 - 4 * c)) / 2
    path = trace_external_ray(f, Fraction(1, 7), levels=200)
    assert abs(path.landing - alpha) < 1e-3


def test_disconnected_julia_set():
    with pytest.raises(NotConnected):
        trace_external_ray(Polynomial([1.0, 0.0, 1.0]), Fraction(1, 3))


def test_ray_needs_monic_polynomial():
    with pytest.raises(ValueError):
        trace_external_ray(Polynomial([0.0, 0.0, 2.0]), Fraction(0))


def test_ray_to_dict():
    path = trace_external_ray(Polynomial([0.0, 0.0, 1.0]), Fraction(1, 4), levels=8)
    report = path.to_dict()
    assert report["angle"] == "1/4"
    assert len(report["points"]) == len(report["potentials"]) == 8 * 4 + 1
    assert report["precision_floor"] is None
    # rays of z^2 are straight
    assert abs(cmath.phase(path.points[-1]) - cmath.pi / 2) < 1e-9


def test_one_third_ray_of_basilica_lands_at_alpha():
    path = trace_external_ray(Polynomial([-1.0, 0.0, 1.0]), Fraction(1, 3))
    assert abs(path.landing - (1 - 5 ** 0.5) / 2) < 1e-4


@pytest.mark.parametrize("c, beta", [(0.0, 1.0), (-2.0, 2.0)])
def test_zero_ray_lands_at_beta(c, beta):
    path = trace_external_ray(Polynomial([c, 0.0, 1.0]), Fraction(0))
    assert abs(path.landing - beta) < 1e-6
    # rounding near beta grows like d^n, so the default levels reach overflow
    assert path.precision_floor is not None
    assert path.precision_floor < 1e-6
    assert len(path.points) == len(path.potentials)
