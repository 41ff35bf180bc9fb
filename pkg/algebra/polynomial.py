from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as P

from algebra.extended import INF, is_inf
from errors import PoleAt

# relative size of |denominator| below which a point counts as a pole
POLE_TOL = 1e-14
# normalized resultant below which numerator and denominator share a root
COPRIME_TOL = 1e-12


def _trim(coefficients):
    c = np.atleast_1d(np.asarray(coefficients, dtype=np.complex128)).copy()
    if c.size == 0:
        return np.zeros(1, dtype=np.complex128)
    nonzero = np.nonzero(c)[0]
    if nonzero.size == 0:
        return np.zeros(1, dtype=np.complex128)
    return c[:nonzero[-1] + 1]


class Polynomial:
    """
    Complex polynomial, coefficients in ascending degree order.

    Evaluation accepts scalars and numpy arrays.
    """

    def __init__(self, coefficients):
        self._c = _trim(coefficients)
        self._c.setflags(write=False)

    @property
    def coefficients(self):
        return self._c

    @property
    def degree(self):
        return self._c.size - 1

    @property
    def leading(self):
        return self._c[-1]

    def is_zero(self):
        return self.degree == 0 and self._c[0] == 0

    def is_real(self):
        return bool(np.all(self._c.imag == 0))

    def is_monic(self):
        return self._c[-1] == 1

    def scale(self):
        return float(np.max(np.abs(self._c)))

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        return cls(leading * P.polyfromroots(np.asarray(roots, dtype=np.complex128)))

    @classmethod
    def monomial(cls, k, coefficient=1.0):
        c = np.zeros(k + 1, dtype=np.complex128)
        c[k] = coefficient
        return cls(c)

    def __call__(self, z):
        return self.eval_with_derivative(z)[0]

    def eval_with_derivative(self, z):
        """
        simultaneous Horner recurrence for p(z) and p'(z).

        z : complex or numpy.array( complex )

        return : (value, derivative)
        """
        if np.isscalar(z) and is_inf(z):
            return (INF, INF) if self.degree >= 1 else (complex(self._c[0]), 0j)
        p = self._c[-1] + 0 * z
        dp = 0 * z
        for a in self._c[-2::-1]:
            dp = dp * z + p
            p = p * z + a
        if np.isscalar(p):
            return complex(p), complex(dp)
        return p, dp

    def trimmed(self, rel_tol=1e-14):
        """
        zero the coefficients that are rounding noise relative to the scale.
        """
        c = self._c.copy()
        c[np.abs(c) <= rel_tol * self.scale()] = 0
        return Polynomial(c)

    def derivative(self):
        if self.degree == 0:
            return Polynomial([0.0])
        return Polynomial(P.polyder(self._c))

    def reversed(self, degree=None):
        """
        coefficients of w^d p(1/w), the polynomial in the chart at infinity.
        """
        d = self.degree if degree is None else degree
        c = np.zeros(d + 1, dtype=np.complex128)
        c[:self._c.size] = self._c
        return Polynomial(c[::-1])

    def __add__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(P.polyadd(self._c, other._c))
        return Polynomial(P.polyadd(self._c, [complex(other)]))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(P.polymul(self._c, other._c))
        return Polynomial(self._c * complex(other))

    __rmul__ = __mul__

    def __repr__(self):
        terms = []
        for k, a in enumerate(self._c):
            if a != 0:
                terms.append(f"({a.real:.6g}{a.imag:+.6g}j)z^{k}")
        return "Polynomial(" + (" + ".join(terms) if terms else "0") + ")"

    ####################################################################
    # plain-text form: one "re,im" pair per line, ascending degree
    ####################################################################
    def to_text(self):
        return "".join(f"{a.real!r},{a.imag!r}\n" for a in self._c)

    @classmethod
    def from_text(cls, text):
        coefficients = []
        for line in text.splitlines():
            line = line.split("#")[0].strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) == 1:
                coefficients.append(complex(float(parts[0]), 0.0))
            elif len(parts) == 2:
                coefficients.append(complex(float(parts[0]), float(parts[1])))
            else:
                raise ValueError(f"expected 're,im' per line, got: {line}")
        if not coefficients:
            raise ValueError("empty polynomial file")
        return cls(coefficients)

    def save(self, path):
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path):
        return cls.from_text(Path(path).read_text())


def resultant(p, q):
    """
    resultant of p and q from the Sylvester matrix.
    """
    m, n = p.degree, q.degree
    if m == 0:
        return complex(p.leading) ** n
    if n == 0:
        return complex(q.leading) ** m
    size = m + n
    S = np.zeros((size, size), dtype=np.complex128)
    a = p.coefficients[::-1]
    b = q.coefficients[::-1]
    for i in range(n):
        S[i, i:i + m + 1] = a
    for i in range(m):
        S[n + i, i:i + n + 1] = b
    return complex(np.linalg.det(S))


def normalized_resultant(p, q):
    m, n = p.degree, q.degree
    scale = np.linalg.norm(p.coefficients) ** n * np.linalg.norm(q.coefficients) ** m
    return abs(resultant(p, q)) / scale


class RationalFunction:
    """
    Quotient numerator/denominator of polynomials.

    Used directly for quadratic-differential densities, where a zero or
    constant result is meaningful; RationalMap adds the dynamical
    requirements.
    """

    def __init__(self, numerator, denominator=None):
        if not isinstance(numerator, Polynomial):
            numerator = Polynomial(numerator)
        if denominator is None:
            denominator = Polynomial([1.0])
        elif not isinstance(denominator, Polynomial):
            denominator = Polynomial(denominator)
        if denominator.is_zero():
            raise ValueError("denominator is the zero polynomial")
        self.numerator = numerator
        self.denominator = denominator

    @property
    def degree(self):
        if self.numerator.is_zero():
            return self.denominator.degree
        return max(self.numerator.degree, self.denominator.degree)

    def is_real(self):
        return self.numerator.is_real() and self.denominator.is_real()

    def is_polynomial(self):
        return self.denominator.degree == 0

    def value_at_infinity(self):
        if self.numerator.is_zero():
            return 0j
        dn, dd = self.numerator.degree, self.denominator.degree
        if dn > dd:
            return INF
        if dn == dd:
            return complex(self.numerator.leading / self.denominator.leading)
        return 0j

    def eval_with_derivative(self, z):
        """
        value and derivative at a finite z; at infinity the value is the
        limit and the derivative is that of w -> F(1/w) at w = 0.

        z : complex

        return : (value, derivative)
        """
        if is_inf(z):
            value = self.value_at_infinity()
            if is_inf(value):
                return INF, INF
            d = self.degree
            n0, dn0 = self.numerator.reversed(d).eval_with_derivative(0j)
            d0, dd0 = self.denominator.reversed(d).eval_with_derivative(0j)
            return value, (dn0 * d0 - n0 * dd0) / (d0 * d0)
        n, dn = self.numerator.eval_with_derivative(z)
        d, dd = self.denominator.eval_with_derivative(z)
        scale = max(self.denominator.scale(), 1e-300) * max(1.0, abs(z)) ** self.denominator.degree
        if abs(d) <= POLE_TOL * scale:
            raise PoleAt(z)
        return n / d, (dn * d - n * dd) / (d * d)

    def __call__(self, z):
        return self.eval_with_derivative(z)[0]

    def evaluate_array(self, z):
        return self.numerator(z) / self.denominator(z)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            num = self.numerator * other.denominator + other.numerator * self.denominator
            return RationalFunction(num, self.denominator * other.denominator)
        return RationalFunction(self.numerator + self.denominator * complex(other), self.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)
        return RationalFunction(self.numerator * complex(other), self.denominator)

    __rmul__ = __mul__

    def reduced(self, tol=1e-7):
        """
        cancel numerator roots that coincide with denominator roots.
        """
        from algebra.roots import poly_roots
        if self.numerator.is_zero():
            return RationalFunction(Polynomial([0.0]), Polynomial([1.0]))
        if self.numerator.degree == 0 or self.denominator.degree == 0:
            return RationalFunction(self.numerator, self.denominator)
        num_roots = list(poly_roots(self.numerator))
        den_roots = list(poly_roots(self.denominator))
        kept_num = []
        for r in num_roots:
            match = None
            for k, s in enumerate(den_roots):
                if abs(r - s) <= tol * max(1.0, abs(r)):
                    match = k
                    break
            if match is None:
                kept_num.append(r)
            else:
                den_roots.pop(match)
        if len(kept_num) == len(num_roots):
            return RationalFunction(self.numerator, self.denominator)
        num = Polynomial.from_roots(kept_num, self.numerator.leading) if kept_num else Polynomial([self.numerator.leading])
        den = Polynomial.from_roots(den_roots, self.denominator.leading) if den_roots else Polynomial([self.denominator.leading])
        return RationalFunction(num, den)

    def inverted_chart(self):
        """
        conjugate by z -> 1/z: G(w) = 1/F(1/w).
        """
        d = self.degree
        return RationalFunction(self.denominator.reversed(d), self.numerator.reversed(d))

    def __repr__(self):
        return f"RationalFunction({self.numerator!r} / {self.denominator!r})"


class RationalMap(RationalFunction):
    """
    Rational map of the sphere: degree >= 1, coprime numerator and denominator.
    """

    def __init__(self, numerator, denominator=None, coprime_tol=COPRIME_TOL):
        super().__init__(numerator, denominator)
        if self.degree < 1 or self.numerator.is_zero():
            raise ValueError("rational map must have degree >= 1")
        if self.denominator.degree >= 1 and self.numerator.degree >= 1:
            if normalized_resultant(self.numerator, self.denominator) < coprime_tol:
                raise ValueError("numerator and denominator share a root")

    @classmethod
    def from_polynomial(cls, p):
        return cls(p, Polynomial([1.0]))

    def inverted_chart(self):
        chart = super().inverted_chart()
        return RationalMap(chart.numerator, chart.denominator)


def as_rational(f):
    if isinstance(f, RationalMap):
        return f
    if isinstance(f, Polynomial):
        return RationalMap.from_polynomial(f)
    raise TypeError(f"unsupported map type: {type(f)}")


def eval_with_derivative(f, z):
    """
    value and derivative of a Polynomial or RationalMap at z.

    PoleAt is raised when z is (numerically) a pole; callers map that to INF.
    """
    return f.eval_with_derivative(z)


def apply(f, z):
    """
    f(z) on the extended plane.
    """
    if isinstance(f, Polynomial):
        if is_inf(z):
            return INF if f.degree >= 1 else complex(f.coefficients[0])
        return f(z)
    if is_inf(z):
        return f.value_at_infinity()
    try:
        return f(z)
    except PoleAt:
        return INF
