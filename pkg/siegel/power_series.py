"""
Truncated power series a_0 + a_1 z + ... + a_N z^N.

Coefficients beyond the truncation order are unknown, not zero, so every
result is truncated to the lowest order among its operands. Series built
from Fraction coefficients stay exact (object dtype).
"""
from fractions import Fraction

import numpy as np


def _as_array(coefficients):
    values = list(coefficients)
    if any(isinstance(v, Fraction) for v in values):
        return np.array([Fraction(v) for v in values], dtype=object)
    return np.asarray(values, dtype=np.complex128)


def _cauchy(a, b, order):
    """
    product coefficients through order.
    """
    if a.dtype == object or b.dtype == object:
        out = np.array([Fraction(0)] * (order + 1), dtype=object)
        for n in range(order + 1):
            out[n] = sum((a[k] * b[n - k] for k in range(n + 1)), Fraction(0))
        return out
    return np.convolve(a[:order + 1], b[:order + 1])[:order + 1]


def binomial_coefficients(beta, order):
    """
    coefficients of (1 - z)^beta through order.
    """
    out = np.empty(order + 1, dtype=np.complex128)
    term = 1.0 + 0j
    out[0] = term
    for k in range(1, order + 1):
        term *= -(beta - k + 1) / k
        out[k] = term
    return out


class PowerSeries:

    def __init__(self, coefficients, order=None):
        c = _as_array(coefficients)
        if c.size == 0:
            raise ValueError("empty power series")
        order = c.size - 1 if order is None else int(order)
        if order < c.size - 1:
            c = c[:order + 1]
        elif order > c.size - 1:
            pad = np.array([Fraction(0)] * (order + 1 - c.size), dtype=object) if c.dtype == object \
                else np.zeros(order + 1 - c.size, dtype=np.complex128)
            c = np.concatenate([c, pad])
        c.setflags(write=False)
        self._c = c

    @property
    def coefficients(self):
        return self._c

    @property
    def order(self):
        return self._c.size - 1

    @property
    def exact(self):
        return self._c.dtype == object

    def __getitem__(self, k):
        return self._c[k]

    def __len__(self):
        return self._c.size

    def __repr__(self):
        return f"PowerSeries(order={self.order}, {self._c[:6]}...)"

    @classmethod
    def variable(cls, order):
        c = np.zeros(order + 1, dtype=np.complex128)
        c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(c)

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            return other
        if self.exact:
            return PowerSeries([Fraction(other)], order=self.order)
        return PowerSeries.constant(other, self.order)

    ####################################################################
    # arithmetic
    ####################################################################
    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return PowerSeries(self._c[:n + 1] + other._c[:n + 1])

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self._c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries(self._c * other)
        n = min(self.order, other.order)
        return PowerSeries(_cauchy(self._c, other._c, n))

    __rmul__ = __mul__

    def reciprocal(self):
        a = self._c
        if a[0] == 0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        b = a.copy()
        b[0] = 1 / a[0]
        for n in range(1, a.size):
            if self.exact:
                b[n] = -b[0] * sum((a[k] * b[n - k] for k in range(1, n + 1)), Fraction(0))
            else:
                b[n] = -b[0] * np.dot(a[1:n + 1], b[n - 1::-1])
        return PowerSeries(b)

    def __truediv__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries(self._c / other)
        return self * other.reciprocal()

    def derivative(self):
        """
        order drops by one.
        """
        if self.order == 0:
            return PowerSeries([self._c[0] * 0])
        k = np.arange(1, self.order + 1)
        return PowerSeries(self._c[1:] * (k if not self.exact else [Fraction(int(i)) for i in k]))

    def integral(self):
        """
        antiderivative vanishing at 0; order rises by one.
        """
        k = np.arange(1, self.order + 2)
        if self.exact:
            return PowerSeries([Fraction(0)] + [a / int(i) for a, i in zip(self._c, k)])
        return PowerSeries(np.concatenate([[0.0], self._c / k]))

    def compose(self, inner):
        """
        self(inner(z)); inner must vanish at 0.
        """
        if abs(inner._c[0]) != 0:
            raise ValueError("inner series must vanish at 0")
        n = min(self.order, inner.order)
        result = PowerSeries.constant(self._c[n], n) if not self.exact else PowerSeries([self._c[n]], order=n)
        for k in range(n - 1, -1, -1):
            result = result * inner + self._c[k]
        return PowerSeries(result._c[:n + 1])

    def rescale(self, factor):
        """
        the series of z -> self(factor * z).
        """
        return PowerSeries(self._c * factor ** np.arange(self.order + 1))

    def truncate(self, order):
        return PowerSeries(self._c[:order + 1])

    ####################################################################
    # evaluation
    ####################################################################
    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros_like(z)
        for a in self._c[::-1]:
            out = out * z + complex(a)
        return out if out.ndim else complex(out)

    def max_abs(self):
        return float(np.max(np.abs(self._c.astype(np.complex128))))

    def distance(self, other, order=None):
        n = min(self.order, other.order) if order is None else order
        diff = self._c[:n + 1].astype(np.complex128) - other._c[:n + 1].astype(np.complex128)
        return float(np.max(np.abs(diff)))
