"""
Linearization of P_rho, P_rho'(z) = lam (1 - z)^rho, P_rho(0) = 0.

h(lam z) = P_rho(h(z)) with h(0) = 0, h'(0) = 1 is solved order by order:
(lam^n - lam) h_n = sum_{k>=2} P_k [h^k]_n, where [h^k]_n only involves
h_1..h_{n-1}.
"""
from dataclasses import dataclass

import numpy as np

from errors import SmallDivisorOverflow
from siegel.power_series import PowerSeries, binomial_coefficients
from siegel.rotation_number import resolve_theta

import common as com

DEFAULT_ORDER = 256
SMALL_DIVISOR_FLOOR = 1e-12
RESIDUAL_TOL = 1e-8
CRITICAL_SEARCH = 720


@dataclass(frozen=True)
class SiegelFamily:
    rho: complex
    theta: float

    def __post_init__(self):
        if complex(self.rho).real <= 0:
            raise ValueError(f"rho must have positive real part: {self.rho}")
        object.__setattr__(self, "rho", complex(self.rho))
        object.__setattr__(self, "theta", resolve_theta(self.theta))

    @property
    def lam(self):
        return complex(np.exp(2j * np.pi * self.theta))

    def lam_power(self, n):
        """
        lam^n with the angle reduced mod 1 first.
        """
        return np.exp(2j * np.pi * np.mod(np.asarray(n) * self.theta, 1.0))

    def to_dict(self):
        return {"rho": [self.rho.real, self.rho.imag], "theta": self.theta,
                "lambda": [self.lam.real, self.lam.imag]}


def series_P_rho(family, N):
    """
    termwise integral of lam (1 - z)^rho.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    derivative = PowerSeries(family.lam * binomial_coefficients(family.rho, N - 1))
    return derivative.integral()


def small_divisor_scan(family, N):
    """
    smallest |lam^n - lam| for 2 <= n <= N.

    return : (n, divisor)
    """
    n = np.arange(2, N + 1)
    divisors = 2.0 * np.abs(np.sin(np.pi * np.mod((n - 1) * family.theta, 1.0)))
    k = int(np.argmin(divisors))
    return int(n[k]), float(divisors[k])


def linearize(family, N=DEFAULT_ORDER):
    """
    return : PowerSeries h through order N, h(z) = z + O(z^2)
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    n_min, divisor = small_divisor_scan(family, N)
    if divisor < SMALL_DIVISOR_FLOOR:
        raise SmallDivisorOverflow(n_min, divisor)
    P = series_P_rho(family, N).coefficients
    lam = family.lam
    h = np.zeros(N + 1, dtype=np.complex128)
    h[1] = 1.0
    # powers[k, m] = [h^k]_m
    powers = np.zeros((N + 1, N + 1), dtype=np.complex128)
    powers[1, 1] = 1.0
    for n in range(2, N + 1):
        previous = powers[1:n, 1:n][:, ::-1]
        powers[2:n + 1, n] = previous @ h[1:n]
        h[n] = np.dot(P[2:n + 1], powers[2:n + 1, n]) / (family.lam_power(n) - lam)
        powers[1, n] = h[n]
    com.logger.debug(f"linearize: min divisor {divisor:.3e} at n={n_min}, max|h_n| {np.max(np.abs(h)):.3e}")
    return PowerSeries(h)


def conjugacy_residual(family, h):
    """
    max coefficient of h(lam z) - P_rho(h(z)) relative to max |h_n|.
    """
    P = series_P_rho(family, h.order)
    lhs = PowerSeries(h.coefficients * family.lam_power(np.arange(h.order + 1)))
    return lhs.distance(P.compose(h)) / h.max_abs()


def conformal_radius_estimate(h, start=None):
    """
    radius of convergence of h from the growth rate of log|h_n| over the
    upper part of the coefficient range, fitted on the running maximum.
    """
    c = np.abs(h.coefficients)
    n = np.arange(c.size)
    start = max(2, c.size // 4) if start is None else start
    mask = (n >= start) & (c > 0)
    if mask.sum() < 4:
        raise ValueError("not enough nonzero coefficients for a radius estimate")
    envelope = np.maximum.accumulate(np.log(c[mask]))
    slope, _ = np.polyfit(n[mask], envelope, 1)
    return float(np.exp(-slope))


def normalize_at_critical_point(h, radius=None, shrink=0.98):
    """
    g(z) = h(r e^{i alpha} z) with r the conformal radius estimate and alpha
    the direction whose image comes closest to the critical point 1.

    return : (g, dict(radius, alpha, miss))
    """
    radius = conformal_radius_estimate(h) if radius is None else radius
    alpha = np.linspace(0.0, 2 * np.pi, CRITICAL_SEARCH, endpoint=False)
    values = h(shrink * radius * np.exp(1j * alpha))
    k = int(np.argmin(np.abs(values - 1.0)))
    factor = radius * np.exp(1j * alpha[k])
    g = h.rescale(factor)
    info = {"radius": radius, "alpha": float(alpha[k]), "miss": float(abs(values[k] - 1.0))}
    com.logger.info(f"h(1)=1 normalization: r*={radius:.6f}, alpha={alpha[k]:.4f}, |h - 1| = {info['miss']:.3e}")
    return g, info
