import numpy as np
import pytest

from errors import InfeasibleTargets
from thurston_interval.critical_values import solve_critical_values
from thurston_interval.interval_maps import IntervalHomeo, PiecewiseMonotoneMap
from thurston_interval.pullback import kneading_sequence, thurston_run


def test_logistic_from_critical_value():
    p = solve_critical_values(2, (0, 0), [1.0])
    assert np.allclose(p.coefficients, [0.0, 4.0, -4.0], atol=1e-10)
    assert p.critical_points == pytest.approx([0.5])
    assert p.critical_values == pytest.approx([1.0])


def test_cubic_critical_values():
    p = solve_critical_values(3, (0, 1), [0.8, 0.2])
    assert p.critical_values == pytest.approx([0.8, 0.2], abs=1e-10)
    assert p(0.0) == pytest.approx(0.0, abs=1e-12)
    assert p(1.0) == pytest.approx(1.0)
    assert np.all(np.diff(p.lap_points) > 0)


@pytest.mark.parametrize("d, boundary, targets", [
    (2, (0, 0), [0.0]),
    (3, (0, 1), [0.2, 0.8]),
    (2, (0, 0), [1.5]),
    (2, (0.5, 0), [1.0]),
])
def test_infeasible_targets(d, boundary, targets):
    with pytest.raises(InfeasibleTargets):
        solve_critical_values(d, boundary, targets)


def test_from_points_merges_segments():
    f = PiecewiseMonotoneMap.from_points([0.0, 0.25, 0.5, 1.0], [0.0, 0.5, 1.0, 0.0], samples=64)
    assert f.degree == 2
    assert f.breakpoints.tolist() == [0.0, 0.5, 1.0]
    assert f.critical_values.tolist() == [1.0]
    assert f(np.array([0.25, 0.75])) == pytest.approx([0.5, 0.5])


@pytest.mark.parametrize("points, values", [
    ([0.0, 0.5, 1.0], [0.0, 0.0, 1.0]),
    ([0.0, 0.5, 1.0], [0.2, 1.0, 0.0]),
])
def test_from_points_validation(points, values):
    with pytest.raises(ValueError):
        PiecewiseMonotoneMap.from_points(points, values, samples=16)


def test_homeomorphism_validation():
    with pytest.raises(ValueError):
        IntervalHomeo([0.0, 0.5, 1.0], [0.0, 0.6, 0.9])
    h = IntervalHomeo([0.0, 0.5, 1.0], [0.0, 0.25, 1.0])
    assert h.inverse(np.array([0.25]))[0] == pytest.approx(0.5)


def test_tent_kneading():
    tent = PiecewiseMonotoneMap.from_points([0.0, 0.5, 1.0], [0.0, 1.0, 0.0], samples=64)
    assert kneading_sequence(tent, length=5) == ["10000"]


def test_save_and_load(tmp_path):
    f = PiecewiseMonotoneMap.from_points([0.0, 0.3, 0.7, 1.0], [0.0, 0.9, 0.1, 1.0], samples=64)
    path = tmp_path / "three_lap.txt"
    f.save(path)
    g = PiecewiseMonotoneMap.load(path, samples=64)
    assert g.degree == 3
    assert g.distance(f) < 1e-9


def test_tent_pullback_converges():
    tent = PiecewiseMonotoneMap.from_points([0.0, 0.5, 1.0], [0.0, 1.0, 0.0], samples=512)
    run = thurston_run(tent, 4, 1e-12, samples=512)
    assert run.steps == 4
    assert len(run.h_norms) == len(run.residuals) == 4
    report = run.to_dict()
    assert report["kneading_stable"]
    assert report["final_poly"]["critical_values"] == pytest.approx([1.0], abs=1e-6)
    x, y = run.phi
    assert x.shape == y.shape
