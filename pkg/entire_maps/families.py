"""
Entire families lam e^z, lam sin z, lam cos z, lam e^z sin z, lam e^z cos z.

Each map is a short sum of exponentials c_k lam exp(a_k z), so the modulus
of every term is known from Re(a_k z) before anything is evaluated; a step
whose largest term would pass OVERFLOW_BOUND returns an Overflow token
instead of a number.
"""
import cmath
import math
from dataclasses import dataclass, field

import torch

import common as com

OVERFLOW_BOUND = 1e300
LOG_BOUND = math.log(OVERFLOW_BOUND)
CYCLE_TOL = 1e-9
MAX_PERIOD = 12
PARABOLIC_TOL = 1e-6

# (a_k, c_k) with f(z) = lam * sum c_k exp(a_k z)
TERMS = {
    "exp": ((1.0 + 0j, 1.0 + 0j),),
    "sin": ((1j, -0.5j), (-1j, 0.5j)),
    "cos": ((1j, 0.5 + 0j), (-1j, 0.5 + 0j)),
    "expsin": ((1.0 + 1j, -0.5j), (1.0 - 1j, 0.5j)),
    "expcos": ((1.0 + 1j, 0.5 + 0j), (1.0 - 1j, 0.5 + 0j)),
}
KINDS = tuple(TERMS)
EXP_TYPE = ("exp", "expsin", "expcos")


@dataclass(frozen=True)
class Overflow:
    """
    certified escape: the next value would exceed OVERFLOW_BOUND in modulus.

    direction : unit complex number, the argument of the dominant term
    log_modulus : log of the dominant term's modulus
    """
    direction: complex
    log_modulus: float

    def to_dict(self):
        return {"overflow": True, "direction": [self.direction.real, self.direction.imag],
                "log_modulus": self.log_modulus}


def is_overflow(w):
    return isinstance(w, Overflow)


@dataclass(frozen=True)
class EntireFamily:
    kind: str
    lam: complex

    def __post_init__(self):
        if self.kind not in TERMS:
            raise ValueError(f"unknown family '{self.kind}', expected one of {KINDS}")
        if complex(self.lam) == 0:
            raise ValueError("lambda must be nonzero")
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def terms(self):
        return TERMS[self.kind]

    @property
    def exp_type(self):
        return self.kind in EXP_TYPE

    def singular_values(self):
        """
        exp: the omitted value 0; sin/cos: the critical values +-lam; the
        exp-trig products: the asymptotic value 0 and the critical values
        of the critical points -pi/4 + k pi (resp. pi/4 + k pi), |k| <= 2.
        """
        if self.kind == "exp":
            return [0j]
        if self.kind in ("sin", "cos"):
            return [self.lam, -self.lam]
        offset = -math.pi / 4 if self.kind == "expsin" else math.pi / 4
        values = [0j]
        for k in range(-2, 3):
            w = entire_step(self, complex(offset + k * math.pi, 0.0))
            if not is_overflow(w):
                values.append(w)
        return values

    def derivative(self, z):
        lead = cmath.log(self.lam)
        return sum(c * a * cmath.exp(a * z + lead) for a, c in self.terms)

    def to_dict(self):
        return {"kind": self.kind, "lambda": [self.lam.real, self.lam.imag]}


def escape_threshold(lam):
    """
    Re z beyond which lam e^z overflows.
    """
    return LOG_BOUND - math.log(abs(lam))


def entire_step(family, z):
    """
    For exp the test reduces to Re z > escape_threshold(lam); for sin and cos
    it is the |Im z| certificate |sin z|, |cos z| >= sinh|Im z|.

    return : complex, or Overflow when the result would exceed OVERFLOW_BOUND
    """
    z = complex(z)
    lead = cmath.log(family.lam)
    best_log, best_arg = -math.inf, 0.0
    for a, c in family.terms:
        exponent = a * z + lead
        size = exponent.real + math.log(abs(c))
        if size > best_log:
            best_log, best_arg = size, exponent.imag + cmath.phase(c)
    if best_log > LOG_BOUND:
        return Overflow(cmath.exp(1j * best_arg), best_log)
    return sum(c * cmath.exp(a * z + lead) for a, c in family.terms)


def entire_step_tensor(family, z, lam=None):
    """
    vectorized entire_step on a complex128 tensor; lam may be a per-pixel tensor.

    return : (values, overflow bool tensor); overflowed entries hold 0
    """
    lead = torch.log(lam) if lam is not None else torch.full_like(z, cmath.log(family.lam))
    total = torch.zeros_like(z)
    largest = torch.full(z.shape, -math.inf, dtype=torch.float64, device=z.device)
    exponents = []
    for a, c in family.terms:
        exponent = a * z + lead
        exponents.append(exponent)
        largest = torch.maximum(largest, exponent.real + math.log(abs(c)))
    overflow = largest > LOG_BOUND
    for (a, c), exponent in zip(family.terms, exponents):
        safe = torch.where(overflow, torch.zeros_like(exponent), exponent)
        total = total + c * torch.exp(safe)
    total = torch.where(overflow, torch.zeros_like(total), total)
    return total, overflow


########################################################################
# singular orbits
########################################################################
@dataclass
class SingularOrbitReport:
    singular_value: complex
    outcome: str
    iterations: int
    period: int = None
    cycle: list = field(default_factory=list)
    multiplier: complex = None
    parabolic: bool = False

    def to_dict(self):
        return {
            "singular_value": [self.singular_value.real, self.singular_value.imag],
            "outcome": self.outcome,
            "iterations": self.iterations,
            "period": self.period,
            "cycle": [[z.real, z.imag] for z in self.cycle],
            "multiplier": None if self.multiplier is None else [self.multiplier.real, self.multiplier.imag],
            "parabolic": self.parabolic,
        }


def _cycle_multiplier(family, points):
    m = 1.0 + 0j
    for z in points:
        m *= family.derivative(z)
    return m


def _classify_orbit(family, s, max_iter):
    z = complex(s)
    history = [z]
    threshold = escape_threshold(family.lam) + 1.0 if family.kind == "exp" else math.inf
    for n in range(1, max_iter + 1):
        w = entire_step(family, z)
        if is_overflow(w) or w.real > threshold:
            return SingularOrbitReport(s, "escaping", n)
        z = w
        history.append(z)
    tail = history[-(MAX_PERIOD + 1):]
    for p in range(1, min(MAX_PERIOD, len(tail) - 1) + 1):
        if abs(tail[-1] - tail[-1 - p]) <= CYCLE_TOL * max(1.0, abs(tail[-1])):
            points = tail[-p:]
            multiplier = _cycle_multiplier(family, points)
            if abs(multiplier) < 1.0 - PARABOLIC_TOL:
                return SingularOrbitReport(s, "attracted", max_iter, p, points, multiplier)
            return SingularOrbitReport(s, "undecided", max_iter, p, points, multiplier, parabolic=True)
    return SingularOrbitReport(s, "undecided", max_iter)


def singular_orbit_classify(family, max_iter=500):
    """
    outcome of every singular orbit: escaping (certified Overflow),
    attracted (period, cycle, multiplier) or undecided.

    return : list of SingularOrbitReport
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    reports = [_classify_orbit(family, s, max_iter) for s in family.singular_values()]
    com.logger.debug(f"{family.kind} lam={family.lam}: {[r.outcome for r in reports]}")
    return reports


def attracting_cycles(reports):
    """
    distinct attracting cycles among the reports.
    """
    cycles = []
    for r in reports:
        if r.outcome != "attracted":
            continue
        if any(min(abs(r.cycle[0] - q) for q in known.cycle) < 1e-7 for known in cycles):
            continue
        cycles.append(r)
    return cycles


def real_slice_transition(lo=0.3, hi=0.45, max_iter=5000, tolerance=1e-4):
    """
    bisect the real lam-interval [lo, hi] of lam e^z for the point where the
    singular orbit stops being attracted.
    """
    def attracted(lam):
        report = singular_orbit_classify(EntireFamily("exp", lam), max_iter)[0]
        return report.outcome == "attracted"

    if not attracted(lo) or attracted(hi):
        raise ValueError(f"[{lo}, {hi}] does not bracket the attracted/non-attracted transition")
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if attracted(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def escape_certificate_holds(lam, z):
    """
    Re z > escape_threshold(lam) + 1 forces Overflow on the next exp step.
    """
    family = EntireFamily("exp", lam)
    if complex(z).real <= escape_threshold(family.lam) + 1.0:
        return True
    return is_overflow(entire_step(family, z))

