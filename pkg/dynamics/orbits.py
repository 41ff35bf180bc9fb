from dataclasses import dataclass

import numpy as np

from algebra.extended import is_inf, chordal_distance, sphere_point, to_json_point
from algebra.polynomial import Polynomial, apply
from algebra.roots import critical_points, poly_roots
from dynamics.cycles import CycleRecord, find_cycle, make_cycle, INDIFFERENT_TOL
from errors import NumericalError

import common as com

LANDING_TOL = 1e-8


def escape_radius_bound(p):
    """
    R = max(2, (1 + max|a_i|) / |a_d|); beyond R every orbit of p escapes.
    """
    if not isinstance(p, Polynomial):
        raise TypeError("escape radius is defined for polynomials")
    c = np.abs(p.coefficients)
    return max(2.0, (1.0 + float(np.max(c[:-1]))) / float(c[-1]))


@dataclass
class OrbitRecord:
    start: complex
    points: list
    escaped: bool = False
    escape_index: int = None

    def to_dict(self):
        return {
            "start": to_json_point(self.start),
            "points": [to_json_point(z) for z in self.points],
            "escaped": self.escaped,
            "escape_index": self.escape_index,
        }


def orbit(f, z0, n, escape_radius=None):
    """
    the first n iterates of z0 (points[0] = z0).

    Polynomial orbits stop at the first point with |z| > escape_radius.
    Rational orbits never escape; poles are recorded as INF.
    """
    if n < 1:
        raise ValueError("orbit length must be >= 1")
    polynomial = isinstance(f, Polynomial)
    if polynomial:
        bound = escape_radius_bound(f)
        if escape_radius is None:
            escape_radius = bound
        elif escape_radius < bound:
            raise ValueError(f"escape radius {escape_radius} is below the certified bound {bound}")
    z = complex(z0)
    points = [z]
    for k in range(1, n + 1):
        z = apply(f, z)
        points.append(z)
        if polynomial and (is_inf(z) or abs(z) > escape_radius):
            return OrbitRecord(complex(z0), points, True, k)
    return OrbitRecord(complex(z0), points)


@dataclass
class CriticalOrbitReport:
    """
    outcome is one of periodic, preperiodic, attracted, escaping, undecided.
    attracted means the orbit converges to an attracting cycle without landing on it.
    """
    point: complex
    multiplicity: int
    outcome: str
    preperiod: int = None
    period: int = None
    cycle: CycleRecord = None
    iterations: int = 0

    def to_dict(self):
        return {
            "point": to_json_point(self.point),
            "multiplicity": self.multiplicity,
            "outcome": self.outcome,
            "preperiod": self.preperiod,
            "period": self.period,
            "cycle": self.cycle.to_dict() if self.cycle is not None else None,
            "iterations": self.iterations,
        }


def _refine_cycle(f, points, tolerance):
    """
    Newton-polish a detected cycle; fall back to the raw orbit points.
    """
    period = len(points)
    try:
        cycle = find_cycle(f, period, points[0], tolerance=1e-12)
        if chordal_distance(cycle.points[0], points[0]) < max(1e3 * tolerance, 1e-6):
            return cycle
    except NumericalError as e:
        com.logger.debug(f"cycle refinement fell back to the raw orbit: {e}")
    return make_cycle(f, points)


def _classify_one(f, crit, multiplicity, max_iter, tolerance, escape_radius):
    polynomial = isinstance(f, Polynomial)
    points = [crit]
    spheres = np.empty((max_iter + 1, 3))
    spheres[0] = sphere_point(crit)
    z = crit
    for n in range(1, max_iter + 1):
        z = apply(f, z)
        if polynomial and (is_inf(z) or abs(z) > escape_radius):
            return CriticalOrbitReport(crit, multiplicity, "escaping", iterations=n)
        points.append(z)
        spheres[n] = sphere_point(z)
        dist = 0.5 * np.linalg.norm(spheres[:n] - spheres[n], axis=1)
        hits = np.nonzero(dist < tolerance)[0]
        if hits.size == 0:
            continue
        # the most recent match gives the smallest period
        j = int(hits[-1])
        period = n - j
        cycle = _refine_cycle(f, points[j:n], tolerance)
        if j == 0:
            return CriticalOrbitReport(crit, multiplicity, "periodic", 0, period, cycle, n)
        if abs(cycle.multiplier) < 1.0 - INDIFFERENT_TOL and not _lands_exactly(f, points[j], cycle):
            return CriticalOrbitReport(crit, multiplicity, "attracted", None, period, cycle, n)
        return CriticalOrbitReport(crit, multiplicity, "preperiodic", j, period, cycle, n)
    return CriticalOrbitReport(crit, multiplicity, "undecided", iterations=max_iter)


def _lands_exactly(f, z, cycle):
    return min(chordal_distance(z, w) for w in cycle.points) < 1e-12


def classify_critical_orbits(f, max_iter=500, tolerance=LANDING_TOL):
    """
    follow every critical point of f until its orbit lands on (or converges
    to) a cycle, escapes, or max_iter is used up.

    For polynomials the critical point at infinity is omitted.

    return : list of CriticalOrbitReport
    """
    if f.degree < 2:
        raise ValueError("critical orbits need degree >= 2")
    escape_radius = escape_radius_bound(f) if isinstance(f, Polynomial) else None
    reports = []
    for crit, multiplicity in critical_points(f, with_multiplicity=True):
        if is_inf(crit) and isinstance(f, Polynomial):
            continue
        report = _classify_one(f, crit, multiplicity, max_iter, tolerance, escape_radius)
        com.logger.debug(f"critical point {crit}: {report.outcome} "
                         f"(preperiod={report.preperiod}, period={report.period})")
        reports.append(report)
    return reports


def postcritically_finite(reports):
    return all(r.outcome in ("periodic", "preperiodic") for r in reports)


def all_critical_orbits_bounded(reports):
    return not any(r.outcome == "escaping" for r in reports)


def critical_orbit_diagnostic(f, n_iter=20):
    """
    closest approach of each finite critical orbit to the repelling fixed points.

    Diagnostic only: a small distance suggests, but does not certify, that
    the critical orbit lands on the repelling set.
    """
    fixed = poly_roots(f - Polynomial([0.0, 1.0]))
    repelling = [z for z in fixed if abs(f.eval_with_derivative(z)[1]) > 1.0 + INDIFFERENT_TOL]
    result = []
    for crit in critical_points(f):
        if is_inf(crit):
            continue
        record = orbit(f, crit, n_iter, escape_radius=max(escape_radius_bound(f), 1e6))
        best, best_k, best_point = np.inf, None, None
        for k, z in enumerate(record.points[1:], start=1):
            for r in repelling:
                d = abs(z - r)
                if d < best:
                    best, best_k, best_point = d, k, complex(r)
        result.append({
            "critical_point": to_json_point(crit),
            "closest_distance": float(best),
            "iterate": best_k,
            "fixed_point": to_json_point(best_point) if best_point is not None else None,
            "escaped": record.escaped,
        })
    return result
