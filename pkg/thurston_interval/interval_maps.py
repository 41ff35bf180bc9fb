"""
Piecewise-monotone maps of [0, 1] stored as per-lap sample tables with
monotone piecewise-cubic (PCHIP) interpolation.
"""
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from errors import ConfigError

DEFAULT_SAMPLES = 4096
BISECT_STEPS = 60
BOUNDARY_TOL = 1e-12


def lap_grid(a, b, samples):
    """
    samples + 1 equispaced points with exact endpoints.

    Equal spacing keeps neighbouring values of a map that is flat at a
    critical point apart by more than rounding.
    """
    x = np.linspace(a, b, samples + 1)
    x[0], x[-1] = a, b
    return x


def _strictly_monotone(y):
    dy = np.diff(y)
    return bool(np.all(dy > 0) or np.all(dy < 0))


def invert_monotone(func, dfunc, lo, hi, targets, ascending):
    """
    solve func(x) = target on [lo, hi] for each target by bisection, then
    one Newton polish that is kept only if it stays in the bracket.

    func, dfunc : vectorized callables
    targets : numpy.array( float )
    """
    targets = np.asarray(targets, dtype=np.float64)
    a = np.full(targets.shape, float(lo))
    b = np.full(targets.shape, float(hi))
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (a + b)
        above = func(mid) > targets
        if ascending:
            b = np.where(above, mid, b)
            a = np.where(above, a, mid)
        else:
            a = np.where(above, mid, a)
            b = np.where(above, b, mid)
    x = 0.5 * (a + b)
    slope = dfunc(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        polished = x - (func(x) - targets) / slope
    ok = np.isfinite(polished) & (polished >= a) & (polished <= b)
    return np.where(ok, polished, x)


class PiecewiseMonotoneMap:
    """
    breakpoints : 0 = x_0 < ... < x_d = 1
    laps : list of (x samples, y samples), strictly monotone in y and
        alternating in direction; lap j covers [x_j, x_{j+1}]
    """

    def __init__(self, breakpoints, laps):
        self.breakpoints = np.asarray(breakpoints, dtype=np.float64)
        self.laps = [(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)) for x, y in laps]
        self._check()
        self._interp = [PchipInterpolator(x, y) for x, y in self.laps]
        self._deriv = [p.derivative() for p in self._interp]

    def _check(self):
        b = self.breakpoints
        if b.size < 2 or b[0] != 0.0 or b[-1] != 1.0 or np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must increase from 0 to 1")
        if len(self.laps) != b.size - 1:
            raise ValueError("need one sample table per lap")
        previous = None
        for j, (x, y) in enumerate(self.laps):
            if x[0] != b[j] or x[-1] != b[j + 1] or np.any(np.diff(x) <= 0):
                raise ValueError(f"lap {j} samples must increase across [{b[j]}, {b[j + 1]}]")
            if not _strictly_monotone(y):
                raise ValueError(f"lap {j} is not strictly monotone")
            ascending = y[-1] > y[0]
            if previous is not None:
                if ascending == previous[0]:
                    raise ValueError(f"laps {j - 1} and {j} do not alternate")
                if abs(previous[1] - y[0]) > 1e-12:
                    raise ValueError(f"map is discontinuous at {b[j]}")
            previous = (ascending, y[-1])
        for v in (self.laps[0][1][0], self.laps[-1][1][-1]):
            if min(abs(v), abs(v - 1.0)) > BOUNDARY_TOL:
                raise ValueError("boundary points must map to {0, 1}")

    ####################################################################
    # constructors
    ####################################################################
    @classmethod
    def from_points(cls, breakpoints, values, samples=DEFAULT_SAMPLES):
        """
        piecewise-linear map through (breakpoints[k], values[k]).

        Consecutive segments with the same direction are merged into one lap.
        """
        points = np.asarray(breakpoints, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if points.shape != values.shape or points.size < 2:
            raise ValueError("need one value per breakpoint")
        direction = np.sign(np.diff(values))
        if np.any(direction == 0):
            raise ValueError("map is constant on a segment")
        turns = [0] + [k + 1 for k in range(direction.size - 1) if direction[k] != direction[k + 1]] + [points.size - 1]
        laps = []
        for a, b in zip(turns[:-1], turns[1:]):
            x = lap_grid(points[a], points[b], samples)
            laps.append((x, np.interp(x, points[a:b + 1], values[a:b + 1])))
        return cls(points[turns], laps)

    @classmethod
    def from_function(cls, func, breakpoints, samples=DEFAULT_SAMPLES):
        breakpoints = np.asarray(breakpoints, dtype=np.float64)
        laps = []
        for j in range(breakpoints.size - 1):
            x = lap_grid(breakpoints[j], breakpoints[j + 1], samples)
            laps.append((x, np.asarray(func(x), dtype=np.float64)))
        return cls(breakpoints, laps)

    ####################################################################
    # evaluation
    ####################################################################
    @property
    def degree(self):
        return len(self.laps)

    @property
    def samples(self):
        return self.laps[0][0].size - 1

    @property
    def ascending(self):
        y = self.laps[0][1]
        return bool(y[-1] > y[0])

    @property
    def boundary(self):
        return (float(round(self.laps[0][1][0])), float(round(self.laps[-1][1][-1])))

    @property
    def critical_points(self):
        return self.breakpoints[1:-1].copy()

    @property
    def critical_values(self):
        return np.array([y[-1] for _, y in self.laps[:-1]])

    def lap_of(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1, 0, self.degree - 1)

    def lap_range(self, j):
        y = self.laps[j][1]
        return (min(y[0], y[-1]), max(y[0], y[-1]))

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        lap = self.lap_of(x)
        out = np.empty_like(x)
        for j in range(self.degree):
            mask = lap == j
            if np.any(mask):
                out[mask] = self._interp[j](x[mask])
        return out

    def lap_inverse(self, j, y):
        """
        the point of lap j mapped to y.
        """
        lo, hi = self.breakpoints[j], self.breakpoints[j + 1]
        ascending = self.laps[j][1][-1] > self.laps[j][1][0]
        return invert_monotone(self._interp[j], self._deriv[j], lo, hi, y, ascending)

    def interpolation_error(self, exact, lap):
        """
        sup over midpoints of lap samples of |interpolant - exact|.
        """
        x = self.laps[lap][0]
        mid = 0.5 * (x[1:] + x[:-1])
        return float(np.max(np.abs(self._interp[lap](mid) - exact(mid))))

    def distance(self, other, grid=None):
        grid = uniform_grid() if grid is None else grid
        return float(np.max(np.abs(self(grid) - other(grid))))

    ####################################################################
    # map file: "breakpoint value" per line
    ####################################################################
    @classmethod
    def load(cls, path, samples=DEFAULT_SAMPLES):
        try:
            data = np.loadtxt(path, comments="#", ndmin=2)
        except OSError as e:
            raise ConfigError(f"map file not found: {path}") from e
        if data.shape[1] != 2:
            raise ConfigError(f"{path}: expected 'breakpoint value' per line")
        try:
            return cls.from_points(data[:, 0], data[:, 1], samples=samples)
        except ValueError as e:
            raise ConfigError(f"{path}: {e}") from e

    def save(self, path, points=17):
        rows = []
        for j in range(self.degree):
            x = np.linspace(self.breakpoints[j], self.breakpoints[j + 1], points)
            if j:
                x = x[1:]
            rows.append(np.column_stack([x, self(x)]))
        np.savetxt(Path(path), np.concatenate(rows), fmt="%.17g")


class IntervalHomeo:
    """
    strictly increasing map of [0, 1] with h(0) = 0 and h(1) = 1.
    """

    def __init__(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.array(y, dtype=np.float64)
        if x[0] != 0.0 or x[-1] != 1.0 or np.any(np.diff(x) <= 0):
            raise ValueError("homeomorphism samples must increase from 0 to 1")
        if np.any(np.diff(y) <= 0):
            raise ValueError("homeomorphism samples are not strictly increasing")
        if abs(y[0]) > 1e-12 or abs(y[-1] - 1.0) > 1e-12:
            raise ValueError("homeomorphism must fix 0 and 1")
        y[0], y[-1] = 0.0, 1.0
        self.x, self.y = x, y
        self._interp = PchipInterpolator(x, y)
        self._deriv = self._interp.derivative()

    def __call__(self, x):
        return self._interp(np.asarray(x, dtype=np.float64))

    def inverse(self, y):
        return invert_monotone(self._interp, self._deriv, 0.0, 1.0, y, True)

    def distance_to_identity(self, grid=None):
        grid = uniform_grid() if grid is None else grid
        return float(np.max(np.abs(self(grid) - grid)))

    def is_increasing(self):
        return bool(np.all(np.diff(self.y) > 0))


def uniform_grid(points=2001):
    return np.linspace(0.0, 1.0, points)
