"""
Thurston pullback for piecewise-monotone interval maps.

One step: p solves the critical-value problem of f, h = f^-1 o p lap by lap
(so p = f o h), and f_next = h^-1 o p = h^-1 o f o h.
"""
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm

from errors import RangeMismatch
from thurston_interval.critical_values import solve_critical_values
from thurston_interval.interval_maps import IntervalHomeo, PiecewiseMonotoneMap, lap_grid, uniform_grid

import common as com

RANGE_TOL = 1e-9
CONJUGACY_TOL = 1e-8
REFINE_TOL = 1e-9
MAX_SAMPLES = 1 << 16
CRITICAL_TOL = 1e-9
KNEADING_LENGTH = 20


def _check_ranges(f, p):
    for j in range(f.degree):
        a, b = f.lap_range(j)
        c, e = p.lap_range(j)
        if abs(a - c) > RANGE_TOL or abs(b - e) > RANGE_TOL:
            raise RangeMismatch(f"lap {j}: f covers [{a}, {b}] but p covers [{c}, {e}]")


def _homeo(f, p, samples):
    """
    h on the nodes of each p-lap, h(c_j) pinned to the breakpoints of f.
    """
    xs, ys = [], []
    for j in range(f.degree):
        x = lap_grid(p.lap_points[j], p.lap_points[j + 1], samples)
        lo, hi = f.lap_range(j)
        y = f.lap_inverse(j, np.clip(p(x), lo, hi))
        y[0], y[-1] = f.breakpoints[j], f.breakpoints[j + 1]
        if j:
            x, y = x[1:], y[1:]
        xs.append(x)
        ys.append(y)
    return IntervalHomeo(np.concatenate(xs), np.concatenate(ys))


def _pulled_back(h, p, boundary, samples):
    """
    h^-1 o p sampled lap by lap on the critical points of p; the sample
    count doubles while the interpolation error stays above REFINE_TOL.
    """
    def exact(x):
        return h.inverse(np.clip(p(x), 0.0, 1.0))

    while True:
        laps = []
        for j in range(p.degree):
            x = lap_grid(p.lap_points[j], p.lap_points[j + 1], samples)
            laps.append((x, exact(x)))
        laps[0][1][0] = boundary[0]
        laps[-1][1][-1] = boundary[1]
        g = PiecewiseMonotoneMap(p.lap_points, laps)
        error = max(g.interpolation_error(exact, j) for j in range(g.degree))
        if error <= REFINE_TOL or samples >= MAX_SAMPLES:
            if error > REFINE_TOL:
                com.logger.warning(f"pullback interpolation error {error:.2e} at {samples} samples per lap")
            return g
        samples *= 2
        com.logger.debug(f"pullback refine: error {error:.2e}, {samples} samples per lap")


def conjugacy_residual(f, h, p):
    """
    sup over the nodes of h of |p(x) - f(h(x))|.
    """
    return float(np.max(np.abs(p(h.x) - f(h.y))))


def thurston_step(f, samples=None):
    """
    f : PiecewiseMonotoneMap

    return : (IntervalHomeo h, IntervalPolynomial p, PiecewiseMonotoneMap f_next)
    """
    samples = samples or f.samples
    p = solve_critical_values(f.degree, f.boundary, f.critical_values)
    _check_ranges(f, p)
    h = _homeo(f, p, samples)
    residual = conjugacy_residual(f, h, p)
    if residual > CONJUGACY_TOL:
        com.logger.warning(f"thurston_step: |p - f o h| = {residual:.2e} on the sample grid")
    f_next = _pulled_back(h, p, f.boundary, samples)
    return h, p, f_next


def kneading_sequence(f, length=KNEADING_LENGTH):
    """
    itinerary of each critical point: the lap index of f^k(c) for k = 1..length,
    or "C" when the orbit lands on a critical point.

    return : list of str, one per critical point
    """
    critical = f.critical_points
    sequences = []
    for c in critical:
        x = float(c)
        symbols = []
        for _ in range(length):
            x = float(np.clip(f(np.array([x]))[0], 0.0, 1.0))
            if critical.size and np.min(np.abs(critical - x)) < CRITICAL_TOL:
                symbols.append("C")
            else:
                symbols.append(str(int(f.lap_of(x))))
        sequences.append("".join(symbols))
    return sequences


@dataclass
class ThurstonRun:
    maps: list = field(default_factory=list)
    polys: list = field(default_factory=list)
    homeos: list = field(default_factory=list)
    h_norms: list = field(default_factory=list)
    p_diffs: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    kneading: list = field(default_factory=list)
    phi: tuple = None
    converged: bool = False

    @property
    def steps(self):
        return len(self.polys)

    def phi_distance(self):
        if self.phi is None:
            return None
        x, y = self.phi
        return float(np.max(np.abs(x - y)))

    def to_dict(self):
        return {
            "steps": self.steps,
            "converged": self.converged,
            "h_norms": list(self.h_norms),
            "p_diffs": list(self.p_diffs),
            "conjugacy_residuals": list(self.residuals),
            "kneading": list(self.kneading),
            "kneading_stable": all(k == self.kneading[0] for k in self.kneading),
            "phi_distance": self.phi_distance(),
            "final_poly": self.polys[-1].to_dict() if self.polys else None,
        }


def thurston_run(f0, max_steps, tol, stop_on_converge=True, samples=None, grid_points=2001):
    """
    iterate thurston_step from f0.

    converged is set once sup|h_n - id| < tol. phi holds the samples
    (h_0 o ... o h_n (x), x) of phi_n = (h_0 o ... o h_n)^-1 on a uniform grid.

    return : ThurstonRun
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    grid = uniform_grid(grid_points)
    run = ThurstonRun(maps=[f0])
    run.kneading.append(kneading_sequence(f0))
    f = f0
    for n in tqdm(range(max_steps), desc="thurston", leave=False):
        h, p, f_next = thurston_step(f, samples=samples)
        run.homeos.append(h)
        run.polys.append(p)
        run.maps.append(f_next)
        run.residuals.append(conjugacy_residual(f, h, p))
        run.h_norms.append(h.distance_to_identity(grid))
        if n:
            run.p_diffs.append(float(np.max(np.abs(p(grid) - run.polys[-2](grid)))))
        else:
            run.p_diffs.append(None)
        run.kneading.append(kneading_sequence(f_next))
        com.logger.info(f"thurston step {n}: |h - id| = {run.h_norms[-1]:.3e}")
        f = f_next
        if run.h_norms[-1] < tol:
            run.converged = True
            if stop_on_converge:
                break
    composed = grid.copy()
    for h in reversed(run.homeos):
        composed = h(composed)
    run.phi = (composed, grid)
    return run
