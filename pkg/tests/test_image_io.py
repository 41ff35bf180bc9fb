import numpy as np
import pandas as pd
import pytest

from planes.window import ClassifiedGrid, Window
from tools.image_io import content_hash, ppm_bytes, read_ppm, write_grid, write_grid_csv, write_ppm


def _grid():
    window = Window(0j, 2, 1, 4, 2)
    classes = np.array([[0, 1, 1, 0], [1, 0, 0, 1]], dtype=np.uint8)
    return ClassifiedGrid(window, classes, np.arange(8, dtype=np.float64).reshape(2, 4),
                          np.zeros((2, 4), dtype=np.int32))


def test_ppm_header_and_read(tmp_path):
    rgb = np.zeros((2, 3, 3), dtype=np.uint8)
    rgb[1, 2] = [255, 128, 0]
    assert ppm_bytes(rgb).startswith(b"P6\n3 2\n255\n")
    path = write_ppm(tmp_path / "tiny.ppm", rgb)
    assert np.array_equal(read_ppm(path), rgb)


def test_ppm_rejects_grey():
    with pytest.raises(ValueError):
        ppm_bytes(np.zeros((2, 2), dtype=np.uint8))


def test_grid_csv_columns(tmp_path):
    path = write_grid_csv(tmp_path / "grid.csv", _grid())
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["i", "j", "class", "value", "aux"]
    assert len(frame) == 8
    assert frame.loc[(frame.i == 1) & (frame.j == 0), "class"].item() == 1


def test_hash_is_stable(tmp_path):
    a = write_grid_csv(tmp_path / "a.csv", _grid())
    b = write_grid_csv(tmp_path / "b.csv", _grid())
    assert content_hash(a) == content_hash(b)


def test_unknown_grid_format(tmp_path):
    with pytest.raises(ValueError):
        write_grid(tmp_path / "grid.txt", _grid(), None, "txt")
