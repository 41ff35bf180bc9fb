import cmath
import math

import numpy as np
import pytest

from algebra.extended import INF, chordal_distance, from_json_point, to_json_point
from algebra.parameter import (MultiplierCondition, ParameterProblem, PolynomialFamily, condition_residual,
                               problem_from_config, solve_parameter)
from algebra.polynomial import Polynomial, RationalFunction, RationalMap, apply, resultant
from algebra.quadratic_differential import pushforward_qd
from algebra.roots import critical_points, poly_roots, roots_with_multiplicity
from errors import PoleAt, UnsupportedInput

RABBIT = complex(-0.122561, 0.744862)
TUNED = complex(-0.101096, 0.956287)


def test_eval_with_derivative():
    p = Polynomial([1.0, 0.0, 1.0])
    value, slope = p.eval_with_derivative(2.0)
    assert value == 5.0
    assert slope == 4.0
    assert np.allclose(p(np.array([0.0, 1j])), [1.0, 0.0])


def test_trailing_zero_coefficients_are_dropped():
    assert Polynomial([1.0, 2.0, 0.0, 0.0]).degree == 1
    assert Polynomial([0.0]).is_zero()


def test_text_form(tmp_path):
    path = tmp_path / "rabbit.txt"
    path.write_text("# z^2 + c\n-0.122561,0.744862\n0,0\n1\n")
    p = Polynomial.load(path)
    assert p.degree == 2
    assert p.coefficients[0] == RABBIT
    with pytest.raises(ValueError):
        Polynomial.from_text("1,2,3\n")


def test_roots_of_unity():
    roots = poly_roots(Polynomial([-1.0, 0.0, 0.0, 1.0]))
    assert roots.size == 3
    assert np.all(np.abs(roots ** 3 - 1.0) < 1e-12)
    # sorted by real part, then imaginary part
    assert roots[-1] == pytest.approx(1.0)
    assert roots[0].imag < 0 < roots[1].imag


def test_roots_of_real_polynomial_come_in_conjugate_pairs():
    roots = poly_roots(Polynomial([2.0, -2.0, 0.0, 1.0]))
    complex_roots = roots[np.abs(roots.imag) > 1e-8]
    assert complex_roots.size == 2
    assert complex_roots[0] == np.conj(complex_roots[1])


def test_double_root_is_clustered():
    p = Polynomial.from_roots([1.0, 1.0, -2.0])
    clusters = roots_with_multiplicity(p)
    assert len(clusters) == 2
    (r0, m0), (r1, m1) = clusters
    assert (m0, m1) == (1, 2)
    assert abs(r0 + 2.0) < 1e-8
    assert abs(r1 - 1.0) < 1e-6


def test_critical_points_of_quadratic_include_infinity():
    points = critical_points(Polynomial([-1.0, 0.0, 1.0]), with_multiplicity=True)
    assert points[0][0] == pytest.approx(0.0)
    assert points[-1] == (INF, 1)


def test_critical_points_of_rational_map():
    f = RationalMap(Polynomial([0.0, 0.0, 1.0]), Polynomial([-1.0, 0.0, 1.0]))
    points = critical_points(f)
    assert len(points) == 2
    assert abs(points[0]) < 1e-12
    assert points[1] == INF


def test_resultant_of_linear_factors():
    assert resultant(Polynomial([-1.0, 1.0]), Polynomial([-2.0, 1.0])) == pytest.approx(-1.0)


def test_rational_map_rejects_common_factor():
    with pytest.raises(ValueError):
        RationalMap(Polynomial.from_roots([1.0, -1.0]), Polynomial.from_roots([1.0]))
    with pytest.raises(ValueError):
        RationalFunction([1.0], [0.0])


def test_pole_and_infinity():
    f = RationalMap(Polynomial([0.0, 0.0, 1.0]), Polynomial([-1.0, 0.0, 1.0]))
    with pytest.raises(PoleAt):
        f(1.0)
    assert apply(f, 1.0) == INF
    assert apply(f, INF) == 1.0
    assert apply(Polynomial([0.0, 0.0, 1.0]), INF) == INF


def test_chordal_distance():
    assert chordal_distance(0j, INF) == pytest.approx(1.0)
    assert chordal_distance(2.0 + 1j, 2.0 + 1j) == 0.0
    assert chordal_distance(1e12, INF) < 1e-11
    assert to_json_point(INF) is None
    assert from_json_point(None) == INF


def test_solve_rabbit(presets):
    problem = problem_from_config("period3", presets)
    c = solve_parameter(problem)
    assert abs(c - RABBIT) < 1e-5
    assert condition_residual(problem, c) < 1e-12


def test_solve_tuned_rabbit(presets):
    problem = problem_from_config("tuned", presets)
    c = solve_parameter(problem)
    assert abs(c - TUNED) < 1e-4


def test_solve_misiurewicz_i(presets):
    c = solve_parameter(problem_from_config("misiurewicz_i", presets))
    assert abs(c - 1j) < 1e-8


def test_solve_multiplier_condition():
    family = PolynomialFamily([0.0, 0.0, 1.0], 0, name="quadratic")
    problem = ParameterProblem(family, MultiplierCondition(1, 0.5 + 0j, 0.2 + 0j), 0.2 + 0j)
    c = solve_parameter(problem)
    # fixed point z = 1/4 with multiplier 2z = 1/2
    assert abs(c - 0.1875) < 1e-10
    assert abs(problem.notes["z"] - 0.25) < 1e-10


def test_unknown_problem_name(presets):
    with pytest.raises(KeyError):
        problem_from_config("period99", presets)


def test_pushforward_of_simple_pole():
    # q = 1/(z - 1) pushes forward to 1 / (2 z (z - 1))
    q = RationalFunction(Polynomial([1.0]), Polynomial([-1.0, 1.0]))
    pushed = pushforward_qd(q)
    for z in (3.0, 0.5 + 1j, -2.0j):
        assert cmath.isclose(pushed(z), 1.0 / (2 * z * (z - 1)), rel_tol=1e-9)


def test_pushforward_rejects_double_pole():
    q = RationalFunction(Polynomial([1.0]), Polynomial.from_roots([1.0, 1.0]))
    with pytest.raises(UnsupportedInput):
        pushforward_qd(q)
