import math

import numpy as np
import pytest

from algebra.polynomial import Polynomial
from experiments.base_experiment import load_map
from planes.escape import (classify_parameters, cubic_u_classes, julia_area_bound, render_escape,
                           render_mandelbrot)
from planes.window import BOUNDED, ESCAPED, MARKER, ClassifiedGrid, Window, basin_code, load_palette
from planes.yoccoz import limb_diameter, limb_root, yoccoz_disks, yoccoz_disks_figure

BASILICA = Polynomial([-1.0, 0.0, 1.0])


def test_window_axes():
    window = Window(complex(1.0, -1.0), 4.0, 2.0, 4, 2)
    assert np.allclose(window.real_axis(), [-0.5, 0.5, 1.5, 2.5])
    # row 0 is the top of the image
    assert np.allclose(window.imag_axis(), [-0.5, -1.5])
    assert window.point_to_pixel(complex(2.5, -1.5)) == (3, 1)
    assert window.pixel_area == 1.0


def test_window_validation():
    with pytest.raises(ValueError):
        Window(0j, 0.0, 1.0, 4, 4)
    with pytest.raises(ValueError):
        Window(0j, 1.0, 1.0, 0, 4)


def test_contains_square():
    assert Window(0j, 4.0, 4.0, 8, 8).contains_square(2.0)
    assert not Window(0j, 3.6, 2.4, 8, 8).contains_square(2.0)


def test_basilica_render_is_symmetric():
    window = Window.from_args((0.0, 0.0, 3.6, 2.4), (48, 32))
    grid = render_escape(BASILICA, window, 100)
    assert np.array_equal(grid.classes, grid.classes[::-1])
    assert np.array_equal(grid.classes, grid.classes[:, ::-1])
    assert grid.class_at(0j) == BOUNDED
    assert grid.class_at(complex(1.7, 1.1)) == ESCAPED
    assert set(grid.summary()) == {"bounded", "escaped"}


def test_render_does_not_depend_on_chunking():
    window = Window.from_args((0.0, 0.0, 3.6, 2.4), (40, 30))
    a = render_escape(BASILICA, window, 80, chunk_rows=7)
    b = render_escape(BASILICA, window, 80, chunk_rows=64)
    assert np.array_equal(a.classes, b.classes)
    assert np.allclose(a.values, b.values)


def test_inside_out_basilica_has_two_basins(presets):
    f = load_map("inside_out_basilica", presets)
    window = Window.from_args((0.0, 0.0, 4.0, 4.0), (64, 64))
    grid = render_escape(f, window, 100)
    assert grid.class_at(0j) == basin_code(0)
    assert grid.class_at(complex(1.9, 1.9)) == basin_code(1)
    summary = grid.summary()
    assert "basin-0" in summary and "basin-1" in summary


def test_julia_area_bound_needs_escape_square():
    with pytest.raises(ValueError):
        julia_area_bound(BASILICA, Window(0j, 3.0, 3.0, 8, 8), 50)


def test_julia_area_bound_decreases():
    window = Window(0j, 4.0, 4.0, 48, 48)
    coarse = julia_area_bound(BASILICA, window, 20)
    fine = julia_area_bound(BASILICA, window, 200)
    assert fine <= coarse


def test_classify_parameters():
    classes, _ = classify_parameters([0.0, -1.0, 0.5, 1j, 2.0], 200)
    assert classes.tolist() == [BOUNDED, BOUNDED, ESCAPED, BOUNDED, ESCAPED]


def test_tricorn_parameters():
    classes, _ = classify_parameters(np.array([0.0, 1.0]), 100, family="tricorn")
    assert classes.tolist() == [BOUNDED, ESCAPED]


def test_mandelbrot_render():
    grid = render_mandelbrot(Window.from_args((-0.5, 0.0, 3.0, 3.0), (30, 30)), 100)
    assert grid.class_at(-0.1 + 0j) == BOUNDED
    assert grid.class_at(complex(0.9, 1.3)) == ESCAPED


def test_cubic_u_classes():
    classes, _ = cubic_u_classes([0.0, 3.0], 100)
    assert classes.tolist() == [2, 1]


def test_yoccoz_disks():
    disks = yoccoz_disks(3)
    assert [(d["p"], d["q"]) for d in disks] == [(0, 1), (1, 1), (1, 2), (1, 3), (2, 3)]
    assert disks[2]["center"] == complex(0.0, math.pi)
    assert disks[2]["radius"] == pytest.approx(math.log(2) / 2)


def test_yoccoz_disks_figure():
    window = Window.from_args((0.0, math.pi, 2.0, 2.0 * math.pi + 1.0), (32, 116))
    grid = yoccoz_disks_figure(4, window)
    assert grid.class_at(complex(0.0, math.pi)) == MARKER
    assert grid.aux[window.point_to_pixel(complex(0.0, math.pi))[::-1]] == 2
    assert grid.class_at(complex(0.9, math.pi)) == BOUNDED


def test_limb_roots():
    assert limb_root(1, 2) == -0.75
    assert abs(limb_root(1, 3) - complex(-0.125, math.sqrt(3) * 3 / 8)) < 1e-12


def test_half_limb_diameter():
    # the 1/2 limb runs from -3/4 to -2
    estimate = limb_diameter(1, 2, sampling=8, max_iter=200)
    assert estimate["root"] == -0.75
    assert 1.2 < estimate["diameter_estimate"] < 1.3
    assert estimate["k_estimate"] == pytest.approx(4 * estimate["diameter_estimate"])


def test_limb_diameter_rejects_non_reduced_angle():
    with pytest.raises(ValueError):
        limb_diameter(2, 4)


def test_palette_and_rgb():
    palette = load_palette()
    assert palette.shape == (256, 3)
    grid = ClassifiedGrid.empty(Window(0j, 1.0, 1.0, 3, 2), fill=BOUNDED)
    assert grid.to_rgb(palette).shape == (2, 3, 3)


def test_julia_area_bound_refinement():
    window = Window(0j, 4.0, 4.0, 24, 24)
    refined = julia_area_bound(BASILICA, window, 30, refinement=2)
    assert refined == julia_area_bound(BASILICA, Window(0j, 4.0, 4.0, 48, 48), 30)
    with pytest.raises(ValueError):
        julia_area_bound(BASILICA, window, 30, refinement=0)
