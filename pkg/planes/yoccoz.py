import math
from math import gcd

import numpy as np

from planes.escape import classify_parameters
from planes.window import BOUNDED, MARKER, ClassifiedGrid

import common as com

LIMB_HALF_ANGLE = math.radians(70.0)
LIMB_REACH = 2.5
BISECT_TOL = 1e-4


def yoccoz_disks(q_max):
    """
    disks of radius log(2)/q centered at 2 pi i p/q in the log-multiplier plane,
    for 0 <= p <= q with gcd(p, q) = 1 and q <= q_max.

    return : list of dict(p, q, center, radius)
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    disks = []
    for q in range(1, q_max + 1):
        for p in range(0, q + 1):
            if gcd(p, q) != 1:
                continue
            disks.append({"p": p, "q": q, "center": complex(0.0, 2 * math.pi * p / q), "radius": math.log(2) / q})
    return disks


def yoccoz_disks_figure(q_max, window):
    """
    MARKER on pixels inside a disk (aux = smallest q among the covering disks), BOUNDED elsewhere.
    """
    if q_max < 2:
        raise ValueError("q_max must be >= 2")
    points = window.points()
    grid = ClassifiedGrid.empty(window, fill=BOUNDED)
    for disk in sorted(yoccoz_disks(q_max), key=lambda d: -d["q"]):
        inside = np.abs(points - disk["center"]) <= disk["radius"]
        grid.classes[inside] = MARKER
        grid.aux[inside] = disk["q"]
        grid.values[inside] = disk["q"]
    return grid


def _snap(z, tol=1e-14):
    """
    drop rounding residue so that real roots stay on the real axis.
    """
    z = complex(z)
    return complex(0.0 if abs(z.real) < tol else z.real, 0.0 if abs(z.imag) < tol else z.imag)


def limb_root(p, q):
    lam = _snap(np.exp(2j * np.pi * p / q))
    return _snap(lam / 2 - lam * lam / 4)


def limb_normal(p, q):
    """
    outward unit normal of the main cardioid at the p/q root.
    """
    e = _snap(np.exp(2j * np.pi * p / q))
    n = 0.5 * e * (1 - e)
    return _snap(n / abs(n))


def limb_diameter(p, q, sampling=64, max_iter=1000):
    """
    lower estimate of the p/q limb diameter from rays cast out of the root.

    Each ray is marched outward until the first escaping sample after a
    bounded one, then the bounded/escaping transition is bisected.

    return : dict(root, diameter_estimate, k_estimate, sampling)
    """
    if q < 2 or not 0 < p < q or gcd(p, q) != 1:
        raise ValueError("need 0 < p/q < 1 in lowest terms")
    if sampling < 1:
        raise ValueError("sampling must be >= 1")
    root = limb_root(p, q)
    normal = limb_normal(p, q)
    offsets = np.linspace(-LIMB_HALF_ANGLE, LIMB_HALF_ANGLE, sampling + 1)
    directions = normal * np.exp(1j * offsets)
    step = 0.25 / q ** 2
    radii = np.arange(1, int(LIMB_REACH / step) + 1) * step
    samples = root + radii[None, :] * directions[:, None]
    classes, _ = classify_parameters(samples, max_iter)
    bounded = classes == BOUNDED
    inner = np.zeros(directions.size)
    outer = np.zeros(directions.size)
    usable = np.zeros(directions.size, dtype=bool)
    for k in range(directions.size):
        run = bounded[k]
        if not run[0]:
            continue
        stop = int(np.argmin(run)) if not run.all() else run.size
        if stop >= run.size:
            inner[k] = outer[k] = radii[-1]
            continue
        inner[k] = radii[stop - 1]
        outer[k] = radii[stop]
        usable[k] = True
    while np.any(usable & (outer - inner > BISECT_TOL)):
        mid = 0.5 * (inner + outer)
        cls, _ = classify_parameters(root + mid * directions, max_iter)
        inside = cls == BOUNDED
        inner = np.where(usable & inside, mid, inner)
        outer = np.where(usable & ~inside, mid, outer)
    diameter = float(np.max(inner)) if inner.size else 0.0
    com.logger.debug(f"limb {p}/{q}: {int(usable.sum())} usable rays, diameter {diameter:.5f}")
    return {"root": root, "diameter_estimate": diameter, "k_estimate": diameter * q * q, "sampling": sampling}
