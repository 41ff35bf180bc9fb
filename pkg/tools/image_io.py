"""
Grid and image writers.

P6 PPM is the baseline format: its bytes depend only on the classified grid
and the palette. PNG goes through matplotlib and is never hashed.
"""
import hashlib
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def ppm_bytes(rgb):
    """
    rgb : numpy.array( uint8, (rows, columns, 3) )
    """
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("expected an (rows, columns, 3) RGB array")
    rows, cols, _ = rgb.shape
    return f"P6\n{cols} {rows}\n255\n".encode("ascii") + rgb.tobytes()


def write_ppm(path, rgb):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(ppm_bytes(rgb))
    return path


def read_ppm(path):
    data = Path(path).read_bytes()
    header = data.split(b"\n", 3)
    if header[0] != b"P6":
        raise ValueError(f"{path}: not a binary PPM")
    cols, rows = [int(v) for v in header[1].split()]
    pixels = np.frombuffer(header[3], dtype=np.uint8)
    return pixels.reshape(rows, cols, 3)


def write_png(path, rgb):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    plt.imsave(path, np.asarray(rgb, dtype=np.uint8))
    return path


def grid_frame(grid):
    """
    one row per pixel: i, j, class, value, aux.
    """
    rows, cols = grid.classes.shape
    j, i = np.mgrid[0:rows, 0:cols]
    return pd.DataFrame({"i": i.reshape(-1), "j": j.reshape(-1), "class": grid.classes.reshape(-1),
                         "value": grid.values.reshape(-1), "aux": grid.aux.reshape(-1)})


def write_grid_csv(path, grid):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid_frame(grid).to_csv(path, index=False, float_format="%.10g")
    return path


def write_grid(path, grid, palette, fmt):
    """
    fmt : ppm, png or csv
    """
    if fmt == "ppm":
        return write_ppm(path, grid.to_rgb(palette))
    if fmt == "png":
        return write_png(path, grid.to_rgb(palette))
    if fmt == "csv":
        return write_grid_csv(path, grid)
    raise ValueError(f"grids cannot be written as {fmt}")


def content_hash(path):
    sha = hashlib.sha256()
    with open(path, "rb") as stream:
        for block in iter(lambda: stream.read(1 << 20), b""):
            sha.update(block)
    return sha.hexdigest()
