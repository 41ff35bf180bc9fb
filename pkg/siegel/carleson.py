"""
The f = h'/(1 - h) picture of the Siegel disk.

carleson_recursion solves
    f' - f^2 = rho * f * sum_nu (1/2 + (i/2) cot((nu+1) pi theta)) a_nu z^nu
order by order: (nu+1) a_{nu+1} = [f^2]_nu + rho [f g]_nu.
"""
import numpy as np

from errors import CotPole, InsufficientOrder
from siegel.linearization import SiegelFamily, linearize, normalize_at_critical_point
from siegel.power_series import PowerSeries, binomial_coefficients
from siegel.rotation_number import resolve_theta

import common as com

COT_GUARD = 1e-10
PROBE_MIN_ORDER = 200
# outermost radius tried first, and the width and count of each radius set
OUTER_RADII = np.arange(0.95, 0.3, -0.05)
RADII_SPAN = 0.3
RADII_COUNT = 5
TAIL_RATIO = 1e-2
AGREEMENT_ORDER = 40
# expected ceiling on max |a_nu - a_0|; a miss is reported, never raised
DEVIATION_BOUND = 0.1


def f0_constant(rho):
    return 1.0 / (1.0 + complex(rho) / 2.0)


def cot_weights(theta, N):
    """
    1/2 + (i/2) cot(pi frac((nu+1) theta)) for nu = 0..N, with the argument
    reduced to (-1/2, 1/2].
    """
    nu = np.arange(N + 1)
    x = np.mod((nu + 1) * theta, 1.0)
    x = np.where(x > 0.5, x - 1.0, x)
    close = np.abs(x) < COT_GUARD
    if close.any():
        raise CotPole(int(nu[np.argmax(close)]))
    return 0.5 + 0.5j / np.tan(np.pi * x)


def carleson_recursion(theta, rho, N, a0=None, drop_imaginary=False):
    """
    theta : rotation number ("golden" accepted)
    a0 : constant term, default 1/(1 + rho/2)
    drop_imaginary : replace the cot weights by 1/2

    return : PowerSeries f through order N
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    theta = resolve_theta(theta)
    rho = complex(rho)
    weights = np.full(N + 1, 0.5 + 0j) if drop_imaginary else cot_weights(theta, N)
    a = np.zeros(N + 1, dtype=np.complex128)
    a[0] = f0_constant(rho) if a0 is None else a0
    for nu in range(N):
        head = a[:nu + 1]
        square = np.dot(head, head[::-1])
        mixed = np.dot(head, (weights[:nu + 1] * head)[::-1])
        a[nu + 1] = (square + rho * mixed) / (nu + 1)
    return PowerSeries(a)


def f_from_h(h):
    """
    h'/(1 - h) through order N - 1.
    """
    if abs(h[0]) > 1e-14 * max(1.0, h.max_abs()):
        raise ValueError("h must vanish at 0")
    return h.derivative() * (1 - h.truncate(h.order - 1)).reciprocal()


def h0_model(rho, N):
    """
    1 - (1 - z)^(2/(rho+2)), the linearizer that corresponds to f0.
    """
    beta = 2.0 / (complex(rho) + 2.0)
    c = -binomial_coefficients(beta, N)
    c[0] = 0.0
    return PowerSeries(c)


def deviation_from_f0(f, rho):
    """
    max_nu |a_nu - 1/(1 + rho/2)|.
    """
    return float(np.max(np.abs(f.coefficients - f0_constant(rho))))


########################################################################
# corner of the disk image at z = 1
########################################################################
def _exponent_at(h, eps):
    """
    beta from |h(1-eps) - h(1-eps/2)| / |h(1-eps/2) - h(1-eps/4)| = 2^beta
    for a corner h(z) ~ h(1) + C (1 - z)^beta.
    """
    v = h(np.array([1 - eps, 1 - eps / 2, 1 - eps / 4], dtype=np.complex128))
    d1, d2 = v[0] - v[1], v[1] - v[2]
    tail = np.max(np.abs(h.coefficients[-8:])) * (1 - eps / 4) ** h.order / (eps / 4)
    if tail > TAIL_RATIO * abs(d2):
        raise InsufficientOrder(f"truncation tail {tail:.2e} dominates at radius {1 - eps / 4:.4f}")
    return float(np.log2(abs(d1) / abs(d2)))


def _corner_radii(h):
    """
    the outermost radii set whose samples all clear the truncation tail.

    return : (radii, betas)
    """
    for outer in OUTER_RADII:
        radii = np.linspace(outer - RADII_SPAN, outer, RADII_COUNT)
        try:
            return radii, np.array([_exponent_at(h, 1.0 - r) for r in radii])
        except InsufficientOrder:
            continue
    raise InsufficientOrder(f"no radius set clears the truncation tail at order {h.order}")


def boundary_angle_probe(h, radii=None):
    """
    opening angle (degrees) of h(unit disk) at h(1), as 180 * beta for the
    local exponent beta measured along each radius and extrapolated
    linearly to radius 1.

    radii : increasing radii below 1; by default the outermost set the
        coefficient tail allows
    return : dict(angle, band, per_radius)
    """
    if h.order < PROBE_MIN_ORDER:
        raise InsufficientOrder(f"probe needs order >= {PROBE_MIN_ORDER}, got {h.order}")
    if radii is None:
        radii, betas = _corner_radii(h)
    else:
        radii = np.asarray(radii, dtype=np.float64)
        if radii.size < 2 or np.any(np.diff(radii) <= 0) or radii[-1] >= 1.0:
            raise ValueError("radii must increase toward 1")
        betas = np.array([_exponent_at(h, 1.0 - r) for r in radii])
    eps = 1.0 - radii
    slope, intercept = np.polyfit(eps, betas, 1)
    spread = float(np.max(np.abs(betas - (slope * eps + intercept))))
    angle = 180.0 * intercept
    band = sorted([180.0 * (intercept - spread) - 180.0 * abs(intercept - betas[-1]),
                   180.0 * (intercept + spread) + 180.0 * abs(intercept - betas[-1])])
    com.logger.debug(f"boundary angle probe: {angle:.3f} deg, band {band}")
    return {"angle": float(angle), "band": [float(band[0]), float(band[1])],
            "per_radius": [[float(r), 180.0 * float(b)] for r, b in zip(radii, betas)]}


def dual_construction_gap(theta, rho, N):
    """
    f_from_h of the normalized linearizer against carleson_recursion started
    from the same constant term.

    return : dict(gap, order, a0, normalization)
    """
    family = SiegelFamily(rho, theta)
    g, info = normalize_at_critical_point(linearize(family, N))
    f_h = f_from_h(g)
    f_c = carleson_recursion(family.theta, family.rho, f_h.order, a0=f_h[0])
    order = min(AGREEMENT_ORDER, N - 10)
    gap = f_h.distance(f_c, order=order)
    return {"gap": gap, "order": order, "a0": [f_h[0].real, f_h[0].imag], "normalization": info}
