"""
Pixel windows and classified grids.

Pixel (i, j) is column i, row j; row 0 is the top of the image. The pixel
center maps to

    x = cx + (2i + 1 - cols) / 2 * dx,   y = cy + (rows - 1 - 2j) / 2 * dy

so a window centered on the real axis is mirror symmetric row for row.
"""
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from errors import ConfigError

########################################################################
# class codes
########################################################################
BOUNDED = 0
ESCAPED = 1
BASIN_BASE = 2
BASIN_COUNT = 12
BAD_CYCLE = 14
MARKER = 15
UNDECIDED = 255

GRADIENT_BASE = 16
GRADIENT_SIZE = 239

CLASS_NAMES = {
    BOUNDED: "bounded",
    ESCAPED: "escaped",
    BAD_CYCLE: "bad-cycle",
    MARKER: "marker",
    UNDECIDED: "undecided",
}


def basin_code(k):
    return BASIN_BASE + (k % BASIN_COUNT)


@dataclass(frozen=True)
class Window:
    center: complex
    width: float
    height: float
    columns: int
    rows: int

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("window width and height must be positive")
        if self.columns < 1 or self.rows < 1:
            raise ValueError("window needs at least one pixel")

    @classmethod
    def from_args(cls, window, size):
        """
        window : (cx, cy, w, h)
        size : (columns, rows)
        """
        cx, cy, w, h = window
        return cls(complex(cx, cy), float(w), float(h), int(size[0]), int(size[1]))

    @property
    def dx(self):
        return self.width / self.columns

    @property
    def dy(self):
        return self.height / self.rows

    @property
    def pixel_area(self):
        return self.dx * self.dy

    def contains_square(self, radius):
        """
        True when [-radius, radius]^2 lies inside the window.
        """
        c = self.center
        return (c.real - self.width / 2 <= -radius and c.real + self.width / 2 >= radius
                and c.imag - self.height / 2 <= -radius and c.imag + self.height / 2 >= radius)

    def real_axis(self):
        i = np.arange(self.columns)
        return self.center.real + (2 * i + 1 - self.columns) / 2 * self.dx

    def imag_axis(self):
        j = np.arange(self.rows)
        return self.center.imag + (self.rows - 1 - 2 * j) / 2 * self.dy

    def pixel_to_point(self, i, j):
        x = self.center.real + (2 * i + 1 - self.columns) / 2 * self.dx
        y = self.center.imag + (self.rows - 1 - 2 * j) / 2 * self.dy
        return complex(x, y)

    def point_to_pixel(self, z):
        i = int(round((2 * (z.real - self.center.real) / self.dx + self.columns - 1) / 2))
        j = int(round((self.rows - 1 - 2 * (z.imag - self.center.imag) / self.dy) / 2))
        return i, j

    def rows_points(self, start, stop):
        """
        complex points of rows start..stop-1, shape (stop-start, columns).
        """
        x = self.real_axis()
        y = self.imag_axis()[start:stop]
        return x[None, :] + 1j * y[:, None]

    def points(self):
        return self.rows_points(0, self.rows)

    def to_dict(self):
        return {"center": [self.center.real, self.center.imag], "width": self.width,
                "height": self.height, "columns": self.columns, "rows": self.rows}


@dataclass
class ClassifiedGrid:
    """
    classes : numpy.array( uint8, (rows, columns) )
    values : numpy.array( float64 ), smooth escape count or distance
    aux : numpy.array( int32 ), per-class extra payload
    """
    window: Window
    classes: np.ndarray
    values: np.ndarray
    aux: np.ndarray = field(default=None)

    def __post_init__(self):
        shape = (self.window.rows, self.window.columns)
        if self.classes.shape != shape or self.values.shape != shape:
            raise ValueError(f"grid arrays must have shape {shape}")
        if self.aux is None:
            self.aux = np.zeros(shape, dtype=np.int32)
        self.values = np.where(np.isfinite(self.values), self.values, 0.0)

    @classmethod
    def empty(cls, window, fill=UNDECIDED):
        shape = (window.rows, window.columns)
        return cls(window, np.full(shape, fill, dtype=np.uint8), np.zeros(shape), np.zeros(shape, dtype=np.int32))

    def class_at(self, z):
        i, j = self.window.point_to_pixel(z)
        i = min(max(i, 0), self.window.columns - 1)
        j = min(max(j, 0), self.window.rows - 1)
        return int(self.classes[j, i])

    def count(self, code):
        return int(np.count_nonzero(self.classes == code))

    def area(self, code):
        return self.count(code) * self.window.pixel_area

    def palette_indices(self):
        idx = self.classes.astype(np.int64)
        escaped = self.classes == ESCAPED
        gradient = GRADIENT_BASE + (np.floor(self.values * 4).astype(np.int64) % GRADIENT_SIZE)
        idx[escaped] = gradient[escaped]
        return idx

    def to_rgb(self, palette):
        return palette[self.palette_indices()]

    def summary(self):
        codes, counts = np.unique(self.classes, return_counts=True)
        return {CLASS_NAMES.get(int(c), f"basin-{int(c) - BASIN_BASE}"): int(n) for c, n in zip(codes, counts)}


########################################################################
# palette
########################################################################
DEFAULT_PALETTE = Path(__file__).with_name("palette.yaml")


def load_palette(path=DEFAULT_PALETTE):
    """
    return : numpy.array( uint8, (256, 3) )
    """
    try:
        with open(path) as stream:
            entries = yaml.safe_load(stream)
    except FileNotFoundError as e:
        raise ConfigError(f"palette not found: {path}") from e
    colors = np.asarray(entries.get("colors", []) if isinstance(entries, dict) else entries)
    if colors.shape != (256, 3) or np.any(colors < 0) or np.any(colors > 255):
        raise ConfigError(f"palette {path} must hold 256 [r, g, b] entries in 0..255")
    return colors.astype(np.uint8)
