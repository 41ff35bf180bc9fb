import math

import numpy as np
import pytest

from entire_maps.families import (EntireFamily, entire_step, escape_certificate_holds, is_overflow,
                                  real_slice_transition, singular_orbit_classify)
from entire_maps.render import render_exp_dynamic, render_exp_param, strip_classes, strip_invariant_set
from planes.escape import BOUNDED, ESCAPED, basin_code
from planes.window import Window


def test_exp_escaping_parameter():
    report, = singular_orbit_classify(EntireFamily("exp", 1.0))
    assert report.outcome == "escaping"


def test_exp_attracting_fixed_point():
    report, = singular_orbit_classify(EntireFamily("exp", 0.25))
    assert report.outcome == "attracted"
    assert report.period == 1
    assert report.cycle[0] == pytest.approx(0.357403, abs=1e-6)
    assert abs(report.multiplier) < 1


def test_exp_parabolic_parameter_is_undecided():
    report, = singular_orbit_classify(EntireFamily("exp", math.exp(-1)))
    assert report.outcome == "undecided"


@pytest.mark.slow
def test_real_slice_transition():
    assert abs(real_slice_transition() - math.exp(-1)) < 1e-3


def test_sine_family():
    reports = singular_orbit_classify(EntireFamily("sin", 1.0))
    assert len(reports) == 2
    assert all(r.outcome != "escaping" for r in reports)


def test_overflow_certificates():
    assert is_overflow(entire_step(EntireFamily("exp", 1.0), 800))
    assert is_overflow(entire_step(EntireFamily("sin", 1.0), 800j))
    assert not is_overflow(entire_step(EntireFamily("exp", 1.0), 1.0))
    assert escape_certificate_holds(1.0, 800)
    assert escape_certificate_holds(1.0, 0.5)


def test_family_validation():
    with pytest.raises(ValueError):
        EntireFamily("tan", 1.0)
    with pytest.raises(ValueError):
        EntireFamily("exp", 0)


def test_strip_classes():
    classes, _, aux = strip_classes(1.0, [0.5, 1 + 3.5j], 60)
    assert classes.tolist() == [BOUNDED, ESCAPED]
    assert aux.tolist() == [1, 0]


def test_strip_validation():
    with pytest.raises(ValueError):
        strip_invariant_set(0.2, Window(1 + 1.5j, 2, 2, 4, 4))
    with pytest.raises(ValueError):
        strip_invariant_set(1.0, Window(1 + 3j, 2, 2, 4, 4))


def test_exp_parameter_plane():
    inside = render_exp_param(Window(0.25 + 0j, 0.02, 0.02, 4, 4), max_iter=200)
    assert np.all(inside.classes == basin_code(0))
    assert np.all(inside.aux == 1)
    outside = render_exp_param(Window(1 + 0j, 0.01, 0.01, 4, 4), max_iter=200)
    assert np.all(outside.classes == ESCAPED)


def test_exp_dynamic_plane():
    grid = render_exp_dynamic(EntireFamily("exp", 1.0), Window(0j, 4, 4, 32, 32), 50)
    assert np.mean(grid.classes == ESCAPED) > 0.5
