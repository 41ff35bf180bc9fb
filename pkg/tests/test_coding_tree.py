import numpy as np
import pytest

from algebra.polynomial import Polynomial
from dynamics.coding_tree import branch_limit, build_coding_tree, inverse_iteration_cloud
from errors import BudgetExceeded, CriticalValueHit

SQUARE = Polynomial([0.0, 0.0, 1.0])


def test_levels_are_preimages():
    tree = build_coding_tree(SQUARE, 4.0, 3)
    assert [tree.level(n).size for n in range(4)] == [1, 2, 4, 8]
    assert np.allclose(np.abs(tree.level(3)), 4.0 ** (1 / 8), rtol=1e-9)
    assert tree.shift_residual() < 1e-9


def test_label_zero_is_the_nearest_preimage():
    tree = build_coding_tree(SQUARE, 4.0, 1)
    assert tree.vertex((0,)) == pytest.approx(2.0)
    assert tree.vertex((1,)) == pytest.approx(-2.0)


def test_branch_limit_of_constant_word():
    tree = build_coding_tree(SQUARE, 4.0, 4)
    point, converged, diameter = branch_limit(tree, "0", 30)
    assert converged
    assert diameter < 1e-6
    assert abs(point - 1.0) < 1e-6


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        build_coding_tree(SQUARE, 4.0, 20, sample_budget=1000)


def test_root_at_critical_value():
    with pytest.raises(CriticalValueHit):
        build_coding_tree(SQUARE, 0.0, 2)


def test_inverse_iteration_cloud_lies_on_the_circle():
    cloud = inverse_iteration_cloud(SQUARE, 4.0, 12, sample_budget=5000)
    # depth reduced until depth * 2**depth fits the budget
    assert cloud.size == 2 ** 9
    assert np.all(np.abs(np.abs(cloud) - 4.0 ** (1 / 512)) < 1e-9)
