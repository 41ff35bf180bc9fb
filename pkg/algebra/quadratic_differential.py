"""
Pushforward of a quadratic-differential density under s(z) = z^2:

    s_* q(z) = sum over s(w) = z of q(w) / s'(w)^2 = (q(w) + q(-w)) / (4 w^2),  w^2 = z.
"""
import numpy as np

from algebra.polynomial import Polynomial, RationalFunction
from algebra.roots import poly_roots, cluster_roots
from errors import UnsupportedInput

import common as com


def _mirror(p):
    """p(-w)."""
    c = np.array(p.coefficients, dtype=np.complex128)
    c[1::2] *= -1
    return Polynomial(c)


def _even_part_in_z(p):
    """p(w) = g(w^2) -> g(z)."""
    return Polynomial(p.coefficients[0::2])


def pole_orders(q):
    if q.denominator.degree == 0:
        return []
    return cluster_roots(poly_roots(q.denominator))


def pushforward_qd(q):
    """
    q : RationalFunction
        density with at most simple poles, all finite

    return : RationalFunction in z, reduced
    """
    if not isinstance(q, RationalFunction):
        q = RationalFunction(q)
    q = q.reduced()
    poles = pole_orders(q)
    for pole, order in poles:
        if order >= 2:
            raise UnsupportedInput(f"pole of order {order} at {pole}")
    if not poles:
        com.logger.warning("pushforward_qd: density has no finite poles, returning the formal result")
    N, D = q.numerator, q.denominator
    A = N * _mirror(D) + _mirror(N) * D
    B = D * _mirror(D)
    numerator = _even_part_in_z(A)
    if numerator.is_zero():
        return RationalFunction(Polynomial([0.0]), Polynomial([1.0]))
    denominator = Polynomial([0.0, 4.0]) * _even_part_in_z(B)
    return RationalFunction(numerator, denominator).reduced()
