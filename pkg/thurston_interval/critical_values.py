"""
Real polynomials on [0, 1] with prescribed critical values.

p(x) = b0 + A * Q(x),  Q(x) = integral_0^x prod_i (t - c_i) dt

The unknowns (c_1, ..., c_{d-1}, A) solve p(c_i) = t_i and p(1) = b1.
"""
import numpy as np
from numpy.polynomial import polynomial as P
from scipy import optimize

from algebra.polynomial import Polynomial
from errors import InfeasibleTargets, NoConvergence
from thurston_interval.interval_maps import invert_monotone

import common as com

RESIDUAL_TOL = 1e-12
PERTURBED_SEEDS = 8
SEED = 13711


class IntervalPolynomial:
    """
    coefficients : numpy.array( float ), ascending
    critical_points : increasing array in (0, 1)
    """

    def __init__(self, coefficients, critical_points):
        self.coefficients = np.asarray(coefficients, dtype=np.float64)
        self.critical_points = np.asarray(critical_points, dtype=np.float64)
        self._derivative = P.polyder(self.coefficients)

    @property
    def degree(self):
        return self.coefficients.size - 1

    @property
    def polynomial(self):
        return Polynomial(self.coefficients)

    @property
    def critical_values(self):
        return self(self.critical_points)

    @property
    def lap_points(self):
        return np.concatenate([[0.0], self.critical_points, [1.0]])

    def __call__(self, x):
        return P.polyval(np.asarray(x, dtype=np.float64), self.coefficients)

    def derivative(self, x):
        return P.polyval(np.asarray(x, dtype=np.float64), self._derivative)

    def lap_ascending(self, j):
        a, b = self.lap_points[j], self.lap_points[j + 1]
        return bool(self(b) > self(a))

    def lap_range(self, j):
        a, b = self(self.lap_points[j]), self(self.lap_points[j + 1])
        return (min(a, b), max(a, b))

    def lap_inverse(self, j, y):
        return invert_monotone(self, self.derivative, self.lap_points[j], self.lap_points[j + 1], y,
                               self.lap_ascending(j))

    def to_dict(self):
        return {"coefficients": self.coefficients.tolist(), "critical_points": self.critical_points.tolist(),
                "critical_values": self.critical_values.tolist()}


def check_alternation(boundary, targets):
    sequence = np.concatenate([[boundary[0]], np.asarray(targets, dtype=np.float64), [boundary[1]]])
    if np.any(sequence < 0.0) or np.any(sequence > 1.0):
        raise InfeasibleTargets("critical values must lie in [0, 1]")
    steps = np.diff(sequence)
    if np.any(steps == 0):
        raise InfeasibleTargets("consecutive critical values coincide")
    signs = np.sign(steps)
    if np.any(signs[1:] == signs[:-1]):
        raise InfeasibleTargets("critical values do not alternate")


def _integrals(c, upper):
    """
    Q(upper) and, for each j, the integral over [0, upper] of prod_{k != j} (t - c_k).
    """
    Q = P.polyint(P.polyfromroots(c))
    full = P.polyval(upper, Q)
    partial = []
    for j in range(c.size):
        others = np.delete(c, j)
        R = P.polyint(P.polyfromroots(others)) if others.size else P.polyint([1.0])
        partial.append(P.polyval(upper, R))
    return full, np.array(partial)


def _system(unknowns, d, boundary, targets):
    c = unknowns[:d - 1]
    A = unknowns[d - 1]
    b0, b1 = boundary
    upper = np.concatenate([c, [1.0]])
    goals = np.concatenate([targets, [b1]])
    F = np.empty(d)
    J = np.empty((d, d))
    for i, x in enumerate(upper):
        full, partial = _integrals(c, x)
        F[i] = b0 + A * full - goals[i]
        J[i, :d - 1] = -A * partial
        J[i, d - 1] = full
    return F, J


def _seed_scale(c, boundary, targets):
    Q = P.polyint(P.polyfromroots(c))
    q = P.polyval(c[0], Q)
    return (targets[0] - boundary[0]) / q if q != 0 else 1.0


def _accept(unknowns, d, boundary, targets):
    c = unknowns[:d - 1]
    if np.any(np.diff(np.concatenate([[0.0], c, [1.0]])) <= 0):
        return False
    F, _ = _system(unknowns, d, boundary, targets)
    return bool(np.max(np.abs(F)) < RESIDUAL_TOL)


def _assemble(unknowns, d, boundary):
    c = unknowns[:d - 1]
    A = unknowns[d - 1]
    coefficients = A * P.polyint(P.polyfromroots(c))
    coefficients[0] += boundary[0]
    return IntervalPolynomial(coefficients, c)


def solve_critical_values(d, boundary, targets):
    """
    the degree-d polynomial with p(0), p(1) = boundary and critical values
    targets in lap order.

    return : IntervalPolynomial
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if targets.size != d - 1:
        raise ValueError(f"degree {d} needs {d - 1} critical values")
    boundary = (float(boundary[0]), float(boundary[1]))
    for b in boundary:
        if b not in (0.0, 1.0):
            raise InfeasibleTargets("boundary values must be 0 or 1")
    check_alternation(boundary, targets)
    if d == 1:
        return IntervalPolynomial([boundary[0], boundary[1] - boundary[0]], [])
    rng = np.random.default_rng(SEED)
    base = np.arange(1, d) / d
    seeds = [base] + [np.sort(np.clip(base + rng.uniform(-0.4, 0.4, d - 1) / d, 1e-3, 1 - 1e-3))
                      for _ in range(PERTURBED_SEEDS)]
    for k, c0 in enumerate(seeds):
        x0 = np.concatenate([c0, [_seed_scale(c0, boundary, targets)]])
        solution = optimize.root(_system, x0, args=(d, boundary, targets), jac=True, method="hybr",
                                 options={"xtol": 1e-15})
        x = solution.x
        # polish with plain Newton steps on the same system
        for _ in range(3):
            F, J = _system(x, d, boundary, targets)
            try:
                x = x - np.linalg.solve(J, F)
            except np.linalg.LinAlgError:
                break
        if np.all(np.isfinite(x)) and _accept(x, d, boundary, targets):
            if k:
                com.logger.debug(f"solve_critical_values: converged from perturbed seed {k}")
            return _assemble(x, d, boundary)
    raise NoConvergence("solve_critical_values", len(seeds))
