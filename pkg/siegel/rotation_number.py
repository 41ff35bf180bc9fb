"""
Continued fractions of rotation numbers.

The expansion runs on the exact binary value of the float theta and stops
once the convergents reach double precision.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from errors import RationalInput

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MAX_QUOTIENTS = 40
# a terminating expansion with a denominator below this is a genuine rational
RATIONAL_DENOMINATOR = 10 ** 7
# floats within PRECISION_FLOOR of p/q are read as p/q only for q up to this
NEAR_RATIONAL_DENOMINATOR = 10 ** 4
PRECISION_FLOOR = 1e-15


def resolve_theta(theta):
    """
    "golden" or a number in (0, 1).
    """
    if isinstance(theta, str):
        if theta.lower() == "golden":
            return GOLDEN
        theta = float(theta)
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1): {theta}")
    return theta


@dataclass
class RotationNumber:
    theta: float
    continued_fraction: list = field(default_factory=list)
    convergents: list = field(default_factory=list)
    bounded_type_bound: int = None
    diophantine_exponent: float = None

    @property
    def lam(self):
        return complex(np.exp(2j * np.pi * self.theta))

    def reconstructs(self):
        """
        every convergent p/q lies within 1/q^2 of theta.
        """
        exact = Fraction(self.theta)
        return all(abs(exact - Fraction(p, q)) <= Fraction(1, q * q) for p, q in self.convergents)

    def to_dict(self):
        return {
            "theta": self.theta,
            "continued_fraction": list(self.continued_fraction),
            "convergents": [[p, q] for p, q in self.convergents],
            "bounded_type_bound": self.bounded_type_bound,
            "diophantine_exponent": self.diophantine_exponent,
        }


def _exponent(theta, convergents):
    """
    gamma in |theta - p/q| ~ q^-gamma, least squares over the convergents.
    """
    rows = [(math.log(q), math.log(abs(theta - p / q))) for p, q in convergents
            if q >= 2 and theta != p / q]
    if len(rows) < 3:
        return None
    logq, logerr = np.array(rows).T
    slope, _ = np.polyfit(logq, logerr, 1)
    return float(-slope)


def continued_fraction(theta, k=MAX_QUOTIENTS):
    """
    partial quotients a_1..a_k of theta = [0; a_1, a_2, ...].

    return : RotationNumber
    """
    if not 1 <= k <= MAX_QUOTIENTS:
        raise ValueError(f"k must lie in [1, {MAX_QUOTIENTS}]")
    theta = resolve_theta(theta)
    x = Fraction(theta)
    quotients, convergents = [], []
    p0, q0, p1, q1 = 1, 0, 0, 1
    for _ in range(k):
        if x == 0:
            if q1 < RATIONAL_DENOMINATOR:
                raise RationalInput(f"theta = {p1}/{q1} is rational")
            break
        x = 1 / x
        a = math.floor(x)
        x -= a
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        quotients.append(int(a))
        convergents.append((p1, q1))
        if abs(theta - p1 / q1) < PRECISION_FLOOR and q1 <= NEAR_RATIONAL_DENOMINATOR:
            raise RationalInput(f"theta = {p1}/{q1} is rational")
        if 1.0 / (q1 * q1) < PRECISION_FLOOR:
            break
    return RotationNumber(theta, quotients, convergents, max(quotients), _exponent(theta, convergents))
