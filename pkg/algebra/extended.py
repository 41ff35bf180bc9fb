"""
Points of the extended plane C u {inf}.

A point is a Python complex; the point at infinity is INF (real part +inf).
Distances between points use the chordal metric on the Riemann sphere so
that cycles through infinity are handled like any other cycle.
"""
import cmath
import math

INF = complex(math.inf, 0.0)


def is_inf(z):
    return cmath.isinf(z)


def sphere_point(z):
    """
    stereographic image of z on the unit sphere.

    return : (x, y, z) tuple of float
    """
    if is_inf(z):
        return (0.0, 0.0, 1.0)
    if abs(z) <= 1.0:
        s = 1.0 + abs(z) ** 2
        return (2.0 * z.real / s, 2.0 * z.imag / s, (abs(z) ** 2 - 1.0) / s)
    w = 1.0 / z
    s = 1.0 + abs(w) ** 2
    return (2.0 * w.real / s, -2.0 * w.imag / s, (1.0 - abs(w) ** 2) / s)


def chordal_distance(z, w):
    """
    chordal distance, half the euclidean distance of the sphere images (range [0, 1]).
    """
    a = sphere_point(z)
    b = sphere_point(w)
    return 0.5 * math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def to_json_point(z):
    if is_inf(z):
        return None
    return [float(z.real), float(z.imag)]


def from_json_point(v):
    if v is None:
        return INF
    return complex(v[0], v[1])
