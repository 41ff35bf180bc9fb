from dataclasses import dataclass, field

import numpy as np

from algebra.polynomial import Polynomial
from algebra.roots import poly_roots
from errors import DegenerateCondition, Diverged, NoConvergence

import common as com


class PolynomialFamily:
    """
    One-parameter family f_c(z) = template(z) + c * z^slot.

    The critical point used by a condition is the one of f_c nearest to
    critical_seed, tracked continuously as c moves.
    """

    def __init__(self, template, slot, critical_seed=0j, name=""):
        if not isinstance(template, Polynomial):
            template = Polynomial(template)
        if slot < 0:
            raise ValueError("slot must be >= 0")
        self.template = template
        self.slot = slot
        self.critical_seed = complex(critical_seed)
        self.name = name

    def at(self, c):
        return self.template + Polynomial.monomial(self.slot, c)

    def critical_point(self, c, near=None):
        f = self.at(c)
        near = self.critical_seed if near is None else near
        df = f.derivative()
        if df.degree == 0:
            raise DegenerateCondition("map has no finite critical point")
        if df.degree == 1:
            return complex(-df.coefficients[0] / df.coefficients[1])
        roots = poly_roots(df)
        return complex(roots[np.argmin(np.abs(roots - near))])

    def critical_point_derivative(self, c, crit):
        """
        d(crit)/dc from f_c'(crit(c)) = 0.
        """
        if self.slot == 0:
            return 0j
        f = self.at(c)
        d2 = f.derivative().derivative()(crit)
        if d2 == 0:
            raise DegenerateCondition("critical point is degenerate, its position is not differentiable")
        return -self.slot * crit ** (self.slot - 1) / d2


@dataclass(frozen=True)
class PeriodicCondition:
    """f^n(crit) = crit, deflated by the proper divisors of n."""
    period: int
    exclude_divisors: bool = True

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be positive")


@dataclass(frozen=True)
class PreperiodicCondition:
    """f^m(crit) = f^n(crit) with m > n, deflated by the listed (m', n') pairs."""
    m: int
    n: int
    exclude: tuple = ()

    def __post_init__(self):
        if self.n < 0 or self.m < 1:
            raise ValueError("condition indices must be positive")
        if self.m <= self.n:
            raise ValueError("need m > n when two iterates are equated")
        for pair in self.exclude:
            if pair[0] <= pair[1]:
                raise ValueError("need m > n when two iterates are equated")


@dataclass(frozen=True)
class MultiplierCondition:
    """some period-p point z has (f^p)'(z) = multiplier; z is solved with c."""
    period: int
    multiplier: complex
    z_seed: complex = 0j

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be positive")


@dataclass
class ParameterProblem:
    family: PolynomialFamily
    condition: object
    seed: complex
    search_radius: float = 10.0
    name: str = ""
    notes: dict = field(default_factory=dict)


def _orbit_in_parameter(family, c, n):
    """
    orbit z_k = f_c^k(crit(c)) and dz_k/dc by forward recurrence.
    """
    f = family.at(c)
    crit = family.critical_point(c)
    z = crit
    dz = family.critical_point_derivative(c, crit)
    zs = [z]
    dzs = [dz]
    for _ in range(n):
        value, deriv = f.eval_with_derivative(z)
        dz = deriv * dz + z ** family.slot
        z = value
        zs.append(z)
        dzs.append(dz)
    return zs, dzs


def _pairs(condition):
    """
    (equated pair, excluded pairs) as index pairs (m, n).
    """
    if isinstance(condition, PeriodicCondition):
        p = condition.period
        exclude = []
        if condition.exclude_divisors:
            exclude = [(d, 0) for d in range(1, p) if p % d == 0]
        return (p, 0), exclude
    return (condition.m, condition.n), list(condition.exclude)


def _deflated_residual(family, c, condition):
    (m, n), exclude = _pairs(condition)
    top = max([m] + [a for a, _ in exclude])
    zs, dzs = _orbit_in_parameter(family, c, top)
    G = zs[m] - zs[n]
    dG = dzs[m] - dzs[n]
    H = 1.0 + 0j
    dH = 0j
    for a, b in exclude:
        factor = zs[a] - zs[b]
        dfactor = dzs[a] - dzs[b]
        dH = dH * factor + H * dfactor
        H = H * factor
    return G, dG, H, dH


def _solve_orbit_relation(problem, tolerance, max_iter):
    c = complex(problem.seed)
    condition = problem.condition
    for it in range(max_iter):
        G, dG, H, dH = _deflated_residual(problem.family, c, condition)
        if H == 0:
            raise DegenerateCondition(f"excluded iterates coincide at c={c}")
        R = G / H
        dR = (dG * H - G * dH) / (H * H)
        if R == 0:
            break
        if dR == 0:
            raise DegenerateCondition(f"residual is stationary at c={c}")
        step = R / dR
        c = c - step
        if not np.isfinite(c) or abs(c - problem.seed) > problem.search_radius:
            raise Diverged(f"Newton left the search disk |c - {problem.seed}| <= {problem.search_radius}")
        if abs(step) <= 1e-15 * max(1.0, abs(c)):
            break
    G, _, _, _ = _deflated_residual(problem.family, c, condition)
    com.logger.debug(f"solve_parameter: c={c} residual={abs(G):.3e} after {it + 1} steps")
    if abs(G) >= tolerance:
        raise NoConvergence("solve_parameter", max_iter)
    return c


def _multiplier_system(family, c, z0, period):
    """
    F1 = f^p(z0) - z0, F2 = (f^p)'(z0) - multiplier and the 2x2 Jacobian in (z0, c).
    """
    f = family.at(c)
    df = f.derivative()
    d2f = df.derivative()
    slot = family.slot
    z = z0
    D = 1.0 + 0j      # d z_k / d z0
    D2 = 0j           # d^2 z_k / d z0^2
    C = 0j            # d z_k / dc
    DC = 0j           # d^2 z_k / dz0 dc
    for _ in range(period):
        fz, f1 = f.eval_with_derivative(z)
        f2 = d2f(z)
        dcf = z ** slot
        dcf1 = slot * z ** (slot - 1) if slot else 0j
        D2_next = f2 * D * D + f1 * D2
        DC_next = f2 * C * D + f1 * DC + dcf1 * D
        C_next = f1 * C + dcf
        D_next = f1 * D
        z, D, D2, C, DC = fz, D_next, D2_next, C_next, DC_next
    return z - z0, D, (D - 1.0, C), (D2, DC)


def _solve_multiplier(problem, tolerance, max_iter):
    condition = problem.condition
    c = complex(problem.seed)
    z0 = complex(condition.z_seed)
    lam = complex(condition.multiplier)
    for it in range(max_iter):
        F1, mult, (a11, a12), (a21, a22) = _multiplier_system(problem.family, c, z0, condition.period)
        F2 = mult - lam
        det = a11 * a22 - a12 * a21
        if det == 0:
            raise DegenerateCondition(f"singular Jacobian at c={c}")
        dz = (F1 * a22 - a12 * F2) / det
        dc = (a11 * F2 - a21 * F1) / det
        z0 -= dz
        c -= dc
        if not np.isfinite(c) or abs(c - problem.seed) > problem.search_radius:
            raise Diverged(f"Newton left the search disk |c - {problem.seed}| <= {problem.search_radius}")
        if max(abs(dz), abs(dc)) <= 1e-15 * max(1.0, abs(c), abs(z0)):
            break
    F1, mult, _, _ = _multiplier_system(problem.family, c, z0, condition.period)
    residual = max(abs(F1), abs(mult - lam))
    problem.notes["z"] = z0
    com.logger.debug(f"solve_parameter: c={c} z={z0} residual={residual:.3e} after {it + 1} steps")
    if residual >= tolerance:
        raise NoConvergence("solve_parameter", max_iter)
    return c


def solve_parameter(problem, tolerance=1e-12, max_iter=100):
    """
    Newton iteration on the family parameter.

    problem : ParameterProblem
    tolerance : float
        bound on the undeflated condition residual at the returned c

    return : complex
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if isinstance(problem.condition, MultiplierCondition):
        return _solve_multiplier(problem, tolerance, max_iter)
    return _solve_orbit_relation(problem, tolerance, max_iter)


def condition_residual(problem, c):
    if isinstance(problem.condition, MultiplierCondition):
        z0 = problem.notes.get("z", problem.condition.z_seed)
        F1, mult, _, _ = _multiplier_system(problem.family, c, z0, problem.condition.period)
        return max(abs(F1), abs(mult - problem.condition.multiplier))
    G, _, _, _ = _deflated_residual(problem.family, c, problem.condition)
    return abs(G)

########################################################################
# presets (maps.yaml "families" / "problems")
########################################################################
def _complex(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v), 0.0)


def family_from_config(name, presets):
    try:
        entry = presets["families"][name]
    except KeyError as e:
        raise KeyError(f"unknown family '{name}'") from e
    template = [_complex(a) for a in entry["template"]]
    return PolynomialFamily(template, int(entry["slot"]), _complex(entry.get("critical_seed", 0)), name=name)


def problem_from_config(name, presets, seed=None):
    try:
        entry = presets["problems"][name]
    except KeyError as e:
        raise KeyError(f"unknown parameter problem '{name}'") from e
    family = family_from_config(entry["family"], presets)
    kind = entry["condition"]
    if kind == "periodic":
        condition = PeriodicCondition(int(entry["period"]))
    elif kind == "preperiodic":
        condition = PreperiodicCondition(int(entry["m"]), int(entry["n"]),
                                         tuple(tuple(int(i) for i in pair) for pair in entry.get("exclude", [])))
    elif kind == "multiplier":
        condition = MultiplierCondition(int(entry["period"]), _complex(entry["multiplier"]),
                                        _complex(entry.get("z_seed", 0)))
    else:
        raise KeyError(f"unknown condition kind '{kind}'")
    start = _complex(entry["seed"]) if seed is None else seed
    return ParameterProblem(family, condition, start, float(entry.get("search_radius", 10.0)), name=name)
