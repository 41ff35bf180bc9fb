import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from algebra.extended import INF, is_inf, chordal_distance, to_json_point
from algebra.polynomial import Polynomial, RationalFunction, as_rational, apply
from errors import CollapsedToLowerPeriod, Diverged, NeedsRays, PoleAt

SUPERATTRACTING_TOL = 1e-8
INDIFFERENT_TOL = 1e-7
ROTATION_QMAX = 1000
ROTATION_TOL = 1e-9

KINDS = ("superattracting", "attracting", "repelling", "rationally-indifferent", "irrationally-indifferent")


def rational_approximation(x, q_max=ROTATION_QMAX, tol=ROTATION_TOL):
    """
    p/q with q <= q_max within tol of x, else None.
    """
    candidate = Fraction(x).limit_denominator(q_max)
    if abs(float(candidate) - x) < tol:
        return candidate
    return None


def classify_multiplier(multiplier):
    r = abs(multiplier)
    if r < SUPERATTRACTING_TOL:
        return "superattracting"
    if r < 1.0 - INDIFFERENT_TOL:
        return "attracting"
    if r > 1.0 + INDIFFERENT_TOL:
        return "repelling"
    angle = (cmath.phase(multiplier) / (2 * math.pi)) % 1.0
    if rational_approximation(angle) is not None:
        return "rationally-indifferent"
    return "irrationally-indifferent"


def local_derivative(f, z):
    """
    derivative of f at z in the charts z (or 1/z at infinity) and f(z) (or 1/f).
    """
    g = as_rational(f)
    w = apply(f, z)
    if not is_inf(z) and not is_inf(w):
        return g.eval_with_derivative(z)[1]
    if not is_inf(z):
        # 1/f near a pole
        return RationalFunction(g.denominator, g.numerator).eval_with_derivative(z)[1]
    if not is_inf(w):
        return g.eval_with_derivative(INF)[1]
    return g.inverted_chart().eval_with_derivative(0j)[1]


@dataclass
class CycleRecord:
    period: int
    points: list
    multiplier: complex
    kind: str

    def residual(self, f):
        return max(chordal_distance(apply(f, self.points[k]), self.points[(k + 1) % self.period])
                   for k in range(self.period))

    def to_dict(self):
        return {
            "period": self.period,
            "points": [to_json_point(z) for z in self.points],
            "multiplier": [float(self.multiplier.real), float(self.multiplier.imag)],
            "kind": self.kind,
        }


def cycle_multiplier(f, points):
    m = 1.0 + 0j
    for z in points:
        m *= local_derivative(f, z)
    return m


def make_cycle(f, points):
    points = list(points)
    multiplier = cycle_multiplier(f, points)
    return CycleRecord(len(points), points, multiplier, classify_multiplier(multiplier))


def _iterate_with_derivative(g, z, n):
    d = 1.0 + 0j
    for _ in range(n):
        try:
            value, deriv = g.eval_with_derivative(z)
        except PoleAt:
            raise Diverged(f"orbit hit a pole of the working chart at {z}")
        d *= deriv
        z = value
    return z, d


def find_cycle(f, period, seed, tolerance=1e-10, max_iter=100, escape=1e8):
    """
    Newton iteration on g(z) = f^period(z) - z.

    f : Polynomial or RationalMap
    seed : complex or INF
        an INF seed searches in the chart w = 1/z

    return : CycleRecord
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    if is_inf(seed):
        if isinstance(f, Polynomial):
            return make_cycle(f, [INF])
        g = as_rational(f).inverted_chart()
        z = 0j
        to_original = lambda w: INF if w == 0 else 1.0 / w
    else:
        g = f
        z = complex(seed)
        to_original = lambda w: w
    for it in range(max_iter):
        fz, d = _iterate_with_derivative(g, z, period)
        residual = fz - z
        if abs(residual) < tolerance * max(1.0, abs(z)) and it > 0:
            break
        if d == 1:
            raise Diverged(f"Newton derivative vanishes at {z}")
        step = residual / (d - 1.0)
        z = z - step
        if not np.isfinite(z) or abs(z) > escape:
            raise Diverged(f"Newton left |z| <= {escape}")
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    fz, _ = _iterate_with_derivative(g, z, period)
    if abs(fz - z) >= tolerance * max(1.0, abs(z)):
        raise Diverged(f"no period-{period} point near the seed (residual {abs(fz - z):.3e})")
    # exact period is the smallest divisor that already closes up
    for divisor in range(1, period):
        if period % divisor == 0:
            zd, _ = _iterate_with_derivative(g, z, divisor)
            if abs(zd - z) < max(tolerance, 1e-9) * max(1.0, abs(z)):
                raise CollapsedToLowerPeriod(period, divisor)
    points = [to_original(z)]
    w = z
    for _ in range(period - 1):
        w = g(w)
        points.append(to_original(w))
    return make_cycle(f, points)


def rotation_number_at(f, fixed_point, rays=None):
    """
    rotation number of f at a repelling or indifferent fixed point.

    rays : sequence of Fraction, optional
        external angles of the rays landing at a repelling fixed point

    return : Fraction, or float for an irrational estimate
    """
    _, multiplier = f.eval_with_derivative(fixed_point)
    r = abs(multiplier)
    if r < 1.0 - INDIFFERENT_TOL:
        raise ValueError("rotation number needs a repelling or indifferent fixed point")
    if r <= 1.0 + INDIFFERENT_TOL:
        angle = (cmath.phase(multiplier) / (2 * math.pi)) % 1.0
        rational = rational_approximation(angle)
        return rational if rational is not None else angle
    if not rays:
        raise NeedsRays(f"repelling fixed point {fixed_point} needs landing rays")
    d = f.degree
    angles = sorted(Fraction(a) % 1 for a in rays)
    q = len(angles)
    images = [(d * a) % 1 for a in angles]
    if sorted(images) != angles:
        raise ValueError("ray set is not invariant under angle multiplication")
    shift = angles.index(images[0])
    for i, image in enumerate(images):
        if angles[(i + shift) % q] != image:
            raise ValueError("rays are not permuted cyclically")
    return Fraction(shift, q)
