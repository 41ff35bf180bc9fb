"""
Randomized invariant suites with fixed seeds.
"""
import numpy as np
import pytest

from algebra.extended import INF, chordal_distance, is_inf
from algebra.polynomial import Polynomial, RationalMap
from algebra.roots import critical_points, poly_roots, root_residual_bound
from newton_lab.newton_map import NewtonMap, root_multiplier_estimate
from siegel.power_series import PowerSeries
from siegel.rotation_number import continued_fraction

SEED = 13711


def _random_coefficients(rng, degree):
    return rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)


def test_root_residuals():
    rng = np.random.default_rng(SEED)
    for _ in range(1000):
        p = Polynomial(_random_coefficients(rng, int(rng.integers(2, 7))))
        roots = poly_roots(p)
        assert roots.size == p.degree
        assert all(abs(p(r)) <= root_residual_bound(p, r) for r in roots)


def test_riemann_hurwitz_count():
    rng = np.random.default_rng(SEED + 1)
    for _ in range(500):
        d = int(rng.integers(2, 6))
        p = Polynomial(_random_coefficients(rng, d))
        assert sum(m for _, m in critical_points(p, with_multiplicity=True)) == 2 * d - 2
        g = RationalMap(Polynomial(_random_coefficients(rng, d)), Polynomial(_random_coefficients(rng, d - 1)))
        assert sum(m for _, m in critical_points(g, with_multiplicity=True)) == 2 * g.degree - 2


def test_polynomial_critical_point_at_infinity():
    rng = np.random.default_rng(SEED + 2)
    for _ in range(200):
        d = int(rng.integers(2, 6))
        points = critical_points(Polynomial(_random_coefficients(rng, d)), with_multiplicity=True)
        assert is_inf(points[-1][0])
        assert points[-1][1] == d - 1


def test_newton_multiplier_at_simple_roots():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(500):
        d = int(rng.integers(2, 6))
        roots = np.sqrt(rng.uniform(0, 1, d)) * np.exp(2j * np.pi * rng.uniform(0, 1, d))
        if min(abs(a - b) for k, a in enumerate(roots) for b in roots[k + 1:]) < 0.1:
            continue
        h = float(rng.uniform(0.1, d))
        nmap = NewtonMap(Polynomial.from_roots(roots), h)
        for k in range(len(nmap.roots)):
            assert abs(root_multiplier_estimate(nmap, k) - (1.0 - h)) < 1e-3


def test_series_product_rule():
    rng = np.random.default_rng(SEED + 4)
    for _ in range(1000):
        a = PowerSeries(_random_coefficients(rng, 8))
        b = PowerSeries(_random_coefficients(rng, 8))
        lhs = (a * b).derivative()
        rhs = a.derivative() * b + a * b.derivative()
        scale = max(1.0, a.max_abs() * b.max_abs())
        assert lhs.distance(rhs) <= 1e-12 * scale


def test_continued_fraction_convergents():
    rng = np.random.default_rng(SEED + 5)
    for theta in rng.uniform(1e-3, 1 - 1e-3, 1000):
        rotation = continued_fraction(float(theta), 8)
        assert rotation.reconstructs()
        assert all(a >= 1 for a in rotation.continued_fraction)


def test_generic_floats_are_irrational():
    rng = np.random.default_rng(SEED + 7)
    for theta in rng.uniform(1e-3, 1 - 1e-3, 1000):
        rotation = continued_fraction(float(theta))
        assert rotation.reconstructs()
        assert 1.0 / rotation.convergents[-1][1] ** 2 < 1e-12


def test_chordal_metric():
    rng = np.random.default_rng(SEED + 6)
    points = list(_random_coefficients(rng, 299) * rng.uniform(0.01, 100, 300)) + [INF, 0j]
    for _ in range(1000):
        x, y, z = (points[k] for k in rng.integers(0, len(points), 3))
        assert 0.0 <= chordal_distance(x, y) <= 1.0 + 1e-15
        assert chordal_distance(x, y) == pytest.approx(chordal_distance(y, x))
        assert chordal_distance(x, z) <= chordal_distance(x, y) + chordal_distance(y, z) + 1e-12
