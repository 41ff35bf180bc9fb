"""
External rays of monic polynomials with connected Julia set.

The point of the theta ray at potential G satisfies
phi(f^n(z)) = exp(d^n G + 2 pi i d^n theta) for the Boettcher coordinate phi.
For d^n G >= log R_ray, phi is the identity up to O(1/R_ray), so the ray is
followed by Newton continuation on f^n(z) = exp(d^n G) e^(2 pi i d^n theta)
as G decreases level by level.
"""
import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from algebra.polynomial import Polynomial
from dynamics.orbits import all_critical_orbits_bounded, classify_critical_orbits
from errors import NotConnected, RayBlocked

import common as com

RAY_RADIUS = 1000.0
LEVELS_PER_HALVING = 4
NEWTON_STEPS = 20
LANDING_WINDOW = 5


@dataclass
class RayPath:
    angle: Fraction
    points: list = field(default_factory=list)
    potentials: list = field(default_factory=list)
    landing: complex = None
    landed: bool = False
    # potential at which iterates stopped being representable, None if all levels ran
    precision_floor: float = None

    def to_dict(self):
        return {
            "angle": f"{self.angle.numerator}/{self.angle.denominator}",
            "points": [[z.real, z.imag] for z in self.points],
            "potentials": list(self.potentials),
            "landing": None if self.landing is None else [self.landing.real, self.landing.imag],
            "landed": self.landed,
            "precision_floor": self.precision_floor,
        }


def _iterate(f, z, n):
    """
    f^n(z) and (f^n)'(z).
    """
    d = 1.0 + 0j
    for _ in range(n):
        z, dz = f.eval_with_derivative(z)
        d *= dz
    return z, d


def _finite_image(f, z, n):
    value, _ = _iterate(f, z, n)
    return value if np.isfinite(value) else None


def _solve_level(f, n, target, z):
    """
    damped Newton on f^n(z) = target; stops at the precision floor of z.

    return : the new point, or None when f^n(z) is no longer finite
    """
    for _ in range(NEWTON_STEPS):
        value, deriv = _iterate(f, z, n)
        if not np.isfinite(value) or not np.isfinite(deriv):
            return None
        if deriv == 0:
            raise RayBlocked(f"ray continuation hit a precritical point near {z}")
        residual = abs(value - target)
        step = (value - target) / deriv
        floor = 1e-13 * max(1.0, abs(z))
        if abs(step) <= floor:
            trial = z - step
            return trial if _finite_image(f, trial, n) is not None else z
        scale = 1.0
        while True:
            trial = z - scale * step
            image = _finite_image(f, trial, n)
            if image is not None and abs(image - target) < residual:
                break
            scale *= 0.5
            if scale * abs(step) <= floor:
                return z
        z = trial
    raise RayBlocked(f"Newton did not settle within {NEWTON_STEPS} steps at level n={n}")


def trace_external_ray(f, angle, levels=60, tolerance=1e-4, check_connected=True, max_iter=500):
    """
    f : monic Polynomial of degree d >= 2 with connected Julia set
    angle : Fraction or anything Fraction accepts, taken mod 1
    levels : int
        number of potential halvings (in units of log d) below log R_ray
    tolerance : float
        landed when the last LANDING_WINDOW points lie within it of the final point

    return : RayPath
    """
    if not isinstance(f, Polynomial) or f.degree < 2:
        raise ValueError("external rays need a polynomial of degree >= 2")
    if abs(f.leading - 1) > 1e-14:
        raise ValueError("external rays need a monic polynomial")
    if levels < 2:
        raise ValueError("levels must be >= 2")
    angle = Fraction(angle) % 1
    if check_connected:
        reports = classify_critical_orbits(f, max_iter=max_iter)
        if not all_critical_orbits_bounded(reports):
            raise NotConnected("a critical orbit escapes, the Julia set is disconnected")
    d = f.degree
    g0 = math.log(RAY_RADIUS)
    path = RayPath(angle)
    z = RAY_RADIUS * cmath.exp(2j * math.pi * float(angle))
    path.points.append(z)
    path.potentials.append(g0)
    steps = levels * LEVELS_PER_HALVING
    for k in range(1, steps + 1):
        t = k / LEVELS_PER_HALVING
        n = math.ceil(t)
        image_angle = (angle * d ** n) % 1
        radius = math.exp(g0 * d ** (n - t))
        target = radius * cmath.exp(2j * math.pi * float(image_angle))
        z_next = _solve_level(f, n, target, z)
        if z_next is None:
            if k == 1:
                raise RayBlocked(f"ray continuation overflowed at the first level near {z}")
            # rounding in z is amplified by d^n past this point
            path.precision_floor = path.potentials[-1]
            com.logger.info(f"ray {angle}: stopped at potential {path.precision_floor:.3e}, iterates overflow")
            break
        z = z_next
        path.points.append(z)
        path.potentials.append(g0 * d ** (-t))
    tail = np.array(path.points[-LANDING_WINDOW:])
    spread = float(np.max(np.abs(tail - tail[-1])))
    path.landing = complex(path.points[-1])
    path.landed = spread < tolerance
    com.logger.debug(f"ray {angle}: landing {path.landing} spread {spread:.3e} landed={path.landed}")
    return path
