import numpy as np
import pytest

from algebra.polynomial import Polynomial
from newton_lab.basins import _arcs, basin_grid, classify_points, common_basin_arcs, immediate_basin
from newton_lab.flow import detect_degenerate, euler_discrepancy, newton_flow
from newton_lab.newton_map import NewtonMap, find_bad_cycles, root_multiplier_estimate
from planes.escape import basin_code
from planes.window import BAD_CYCLE, Window

CUBE_ROOTS = Polynomial([-1.0, 0.0, 0.0, 1.0])
DOUBLE_ROOT = Polynomial([2.0, -3.0, 0.0, 1.0])  # (z - 1)^2 (z + 2)


def test_bad_cycle_of_smale_cubic():
    cycles = find_bad_cycles(Polynomial([2.0, -2.0, 0.0, 1.0]), 1.0)
    assert len(cycles) == 1
    cycle = cycles[0]
    assert cycle.period == 2
    assert abs(cycle.multiplier) < 1e-6
    assert sorted(round(z.real, 6) for z in cycle.points) == [0.0, 1.0]


def test_no_bad_cycles_for_cube_roots():
    assert find_bad_cycles(CUBE_ROOTS) == []


def test_newton_map_as_rational():
    g = NewtonMap(CUBE_ROOTS).as_rational()
    assert np.allclose(g.numerator.coefficients, [1, 0, 0, 2])
    assert np.allclose(g.denominator.coefficients, [0, 0, 3])
    assert NewtonMap(DOUBLE_ROOT).as_rational().degree == 2


def test_root_multipliers():
    nmap = NewtonMap(DOUBLE_ROOT)
    k = [m for _, m in nmap.roots].index(2)
    assert nmap.derivative_at(nmap.roots[k][0]) == pytest.approx(0.5)
    assert abs(root_multiplier_estimate(nmap, k) - 0.5) < 0.05
    relaxed = NewtonMap(CUBE_ROOTS, h=0.5)
    assert relaxed.derivative_at(1.0) == pytest.approx(0.5)


def test_relaxation_range():
    with pytest.raises(ValueError):
        NewtonMap(CUBE_ROOTS, h=4.0)
    with pytest.raises(ValueError):
        NewtonMap(CUBE_ROOTS, h=0.0)


def test_basin_grid_and_points():
    grid = basin_grid(CUBE_ROOTS, 1.0, Window(0j, 4, 4, 64, 64), max_iter=60)
    assert grid.class_at(1.0) == basin_code(2)
    classes, _ = classify_points(CUBE_ROOTS, 1.0, [1.1, -0.5 + 0.9j], max_iter=60)
    assert classes.tolist() == [basin_code(2), basin_code(1)]
    basin = immediate_basin(grid, 2, 1.0)
    i, j = grid.window.point_to_pixel(1.0)
    assert basin[j, i]


def test_newton_flow_reaches_root():
    trajectory = newton_flow(CUBE_ROOTS, 2.0, 50.0)
    assert trajectory.terminal == "reached-root"
    assert trajectory.root_index == 2
    assert trajectory.diagnostics["exactness"] < 1e-6
    frame = trajectory.to_frame(CUBE_ROOTS)
    assert list(frame.columns) == ["t", "re", "im", "abs_f", "arg_f"]


def test_newton_flow_budget_and_validation():
    assert newton_flow(CUBE_ROOTS, 2.0, 1.0).terminal == "time-budget"
    with pytest.raises(ValueError):
        newton_flow(CUBE_ROOTS, 1.0, 10.0)
    with pytest.raises(ValueError):
        newton_flow(CUBE_ROOTS, 2.0, 10.0, field="curl")


def test_euler_discrepancy_is_second_order():
    window = Window(1 + 0j, 0.5, 0.5, 8, 8)
    coarse = euler_discrepancy(CUBE_ROOTS, window, h=0.05)
    fine = euler_discrepancy(CUBE_ROOTS, window, h=0.025)
    assert 2.5 < coarse["mean"] / fine["mean"] < 6


@pytest.mark.slow
def test_common_basin_arcs():
    report = common_basin_arcs(CUBE_ROOTS, 2, h_samples=[1.0], R=3, angular_resolution=90, grid_size=64,
                               max_iter=60)
    assert report.total_length > 0
    assert report.degree == 3
    assert report.membership.shape == (1, 90)
    assert report.membership.any()
    # root 1 sits on angle 0, so its arc is split there
    assert all(0.0 <= a < b <= 2 * np.pi for a, b in report.arcs)
    assert report.arcs[0][0] == 0.0
    assert report.arcs[-1][1] == pytest.approx(2 * np.pi)
    assert report.to_dict()["caveats"]


def test_common_basin_arcs_validation():
    with pytest.raises(ValueError):
        common_basin_arcs(Polynomial.from_roots([2.0, 0.0, 1j]), 0)
    with pytest.raises(ValueError):
        common_basin_arcs(CUBE_ROOTS, 0, R=2.0)


@pytest.mark.parametrize("coefficients, degenerate", [
    ([3.0, -3.0, 0.0, 1.0], True),
    ([0.0, -3.0, 0.0, 1.0], False),
    ([-1.0, 0.0, 0.0, 1.0], False),
])
def test_detect_degenerate(coefficients, degenerate):
    report = detect_degenerate(Polynomial(coefficients))
    assert report["degenerate"] is degenerate
    assert bool(report["pairs"]) is degenerate


def test_detect_degenerate_flags_zero_values():
    report = detect_degenerate(Polynomial.from_roots([1.0, 1.0, -2.0]))
    assert len(report["zero_values"]) == 1
    assert not report["degenerate"]
    with pytest.raises(ValueError):
        detect_degenerate(Polynomial([-1.0, 0.0, 1.0]))


def test_bad_cycle_basin_has_area():
    grid = basin_grid(Polynomial([2.0, -2.0, 0.0, 1.0]), 1.0, Window(0.5 + 0j, 3, 3, 64, 64), max_iter=60)
    assert grid.count(BAD_CYCLE) > 0
    assert grid.class_at(0.0) == BAD_CYCLE


def test_arcs_split_at_angle_zero():
    step = 2 * np.pi / 8
    inside = np.array([True, True, False, False, True, False, True, True])
    arcs = _arcs(inside, step)
    assert arcs == [[0.0, 2 * step], [4 * step, 5 * step], [6 * step, 2 * np.pi]]
    assert sum(b - a for a, b in arcs) == pytest.approx(5 * step)
    assert _arcs(np.ones(8, dtype=bool), step) == [[0.0, 2 * np.pi]]
    assert _arcs(np.zeros(8, dtype=bool), step) == []
