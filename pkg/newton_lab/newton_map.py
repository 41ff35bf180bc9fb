"""
Relaxed Newton maps N_{h,f}(z) = z - h f(z)/f'(z).
"""
import numpy as np

from algebra.polynomial import Polynomial, RationalFunction, RationalMap
from algebra.roots import poly_roots, roots_with_multiplicity
from dynamics.cycles import find_cycle
from errors import NearSingularity, NumericalError

import common as com

SINGULAR_TOL = 1e-12
ROOT_TOL = 1e-8
CYCLE_TOL = 1e-9
ORBIT_ESCAPE = 1e8


def _refine_multiple(f, center, m):
    """
    a root of multiplicity m is a simple root of the (m-1)-th derivative.
    """
    g = f
    for _ in range(m - 1):
        g = g.derivative()
    z = complex(center)
    for _ in range(50):
        value, slope = g.eval_with_derivative(z)
        if slope == 0:
            break
        step = value / slope
        z -= step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z if abs(z - center) < 1e-4 * max(1.0, abs(center)) else complex(center)


class NewtonMap:
    """
    f : Polynomial of degree >= 1
    h : relaxation in (0, deg f]
    """

    def __init__(self, f, h=1.0):
        if not isinstance(f, Polynomial) or f.degree < 1:
            raise ValueError("Newton maps need a polynomial of degree >= 1")
        h = float(h)
        if not 0.0 < h <= f.degree:
            raise ValueError(f"h must lie in (0, {f.degree}]")
        self.f = f
        self.h = h
        self.df = f.derivative()
        self.d2f = self.df.derivative()
        clusters = roots_with_multiplicity(f)
        self.roots = [(_refine_multiple(f, r, m) if m > 1 else r, m) for r, m in clusters]

    @property
    def degree(self):
        return self.f.degree

    @property
    def root_points(self):
        return np.array([r for r, _ in self.roots], dtype=np.complex128)

    def nearest_root(self, z):
        """
        return : (index, distance)
        """
        distances = np.abs(self.root_points - z)
        k = int(np.argmin(distances))
        return k, float(distances[k])

    def _singular_scale(self, z):
        return SINGULAR_TOL * self.df.scale() * max(1.0, abs(z)) ** max(self.df.degree, 0)

    def __call__(self, z):
        return relaxed_newton_eval(self, z)

    def derivative_at(self, z):
        """
        N' = 1 - h + h f f'' / f'^2; at a root of multiplicity m the limit 1 - h/m.
        """
        k, dist = self.nearest_root(z)
        if dist <= ROOT_TOL * max(1.0, abs(z)):
            return 1.0 - self.h / self.roots[k][1]
        fz, dfz = self.f.eval_with_derivative(z)
        d2 = self.d2f(z)
        if abs(dfz) <= self._singular_scale(z):
            raise NearSingularity(z)
        return 1.0 - self.h + self.h * fz * d2 / (dfz * dfz)

    def eval_with_derivative(self, z):
        return self(z), self.derivative_at(z)

    def free_critical_points(self):
        """
        zeros of N' that are not roots of f: zeros of f'' when h = 1, else of
        (1 - h) f'^2 + h f f''.
        """
        if self.h == 1.0:
            equation = self.d2f
        else:
            equation = self.df * self.df * (1.0 - self.h) + self.f * self.d2f * self.h
        if equation.degree < 1:
            return []
        candidates = poly_roots(equation)
        free = []
        for c in candidates:
            _, dist = self.nearest_root(c)
            if dist > 1e-6 * max(1.0, abs(c)) and all(abs(c - q) > 1e-9 for q in free):
                free.append(complex(c))
        return free

    def as_rational(self):
        """
        (z f' - h f) / f' with common factors at multiple roots cancelled.
        """
        z = Polynomial([0.0, 1.0])
        quotient = RationalFunction(z * self.df - self.f * self.h, self.df)
        if any(m > 1 for _, m in self.roots):
            quotient = quotient.reduced()
        return RationalMap(quotient.numerator, quotient.denominator)


def relaxed_newton_eval(nmap, z):
    """
    z - h f(z)/f'(z), extended by the root itself at roots of f.
    """
    z = complex(z)
    fz, dfz = nmap.f.eval_with_derivative(z)
    if fz == 0:
        return z
    if abs(dfz) <= nmap._singular_scale(z):
        k, dist = nmap.nearest_root(z)
        if dist <= ROOT_TOL * max(1.0, abs(z)):
            return complex(nmap.roots[k][0])
        raise NearSingularity(z)
    return z - nmap.h * fz / dfz


def root_multiplier_estimate(nmap, root_index, epsilon=1e-7, directions=8):
    """
    mean of (N(r + e) - r)/e over offsets e of modulus epsilon, which tends
    to 1 - h/m at a root of multiplicity m.
    """
    r = nmap.roots[root_index][0]
    offsets = epsilon * np.exp(2j * np.pi * (np.arange(directions) + 0.25) / directions)
    ratios = [(relaxed_newton_eval(nmap, r + e) - r) / e for e in offsets]
    return complex(np.mean(ratios))


def _orbit_tail(nmap, z, max_iter):
    """
    z after max_iter steps, or None when the orbit reaches a root, a pole or escapes.
    """
    for _ in range(max_iter):
        try:
            z = relaxed_newton_eval(nmap, z)
        except NearSingularity:
            return None
        if not np.isfinite(z) or abs(z) > ORBIT_ESCAPE:
            return None
        _, dist = nmap.nearest_root(z)
        if dist <= ROOT_TOL * max(1.0, abs(z)):
            return None
    return z


def _smallest_period(nmap, z, max_period):
    w = z
    for p in range(1, max_period + 1):
        w = relaxed_newton_eval(nmap, w)
        if abs(w - z) <= CYCLE_TOL * max(1.0, abs(z)):
            return p
    return None


def find_bad_cycles(f, h=1.0, max_period=8, max_iter=500):
    """
    attracting cycles of N_{h,f} that avoid the roots of f, found from the
    orbits of the free critical points.

    return : list of CycleRecord
    """
    nmap = NewtonMap(f, h)
    if f.degree < 3:
        return []
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    g = nmap.as_rational()
    cycles = []
    for c in nmap.free_critical_points():
        z = _orbit_tail(nmap, c, max_iter)
        if z is None:
            continue
        period = _smallest_period(nmap, z, max_period)
        if period is None:
            com.logger.debug(f"critical point {c}: no cycle of period <= {max_period}")
            continue
        try:
            cycle = find_cycle(g, period, z, tolerance=1e-12)
        except NumericalError as e:
            com.logger.debug(f"cycle refinement from {z} failed: {e}")
            continue
        if abs(cycle.multiplier) >= 1.0:
            continue
        if min(nmap.nearest_root(p)[1] for p in cycle.points) <= 1e-6:
            continue
        duplicate = any(min(abs(cycle.points[0] - q) for q in known.points) < 1e-7 for known in cycles)
        if not duplicate:
            cycles.append(cycle)
    return cycles
