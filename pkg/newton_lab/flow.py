"""
Newton flow dz/dt = -f/f' (raw) and its desingularized form dz/dt = -f conj(f').

Both fields carry trajectories to rays through the origin under f: along
raw trajectories f(z(t)) = e^-t f(z0), along desingularized ones |f|
decreases with arg f fixed.
"""
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp

from algebra.roots import roots_with_multiplicity
from errors import StepFailure
from newton_lab.newton_map import NewtonMap, relaxed_newton_eval

import common as com

FIELDS = ("raw", "desing")
ROOT_TOL = 1e-8
SINGULAR_TOL = 1e-6
RTOL = 1e-10
ATOL = 1e-12
ARG_TOL = 1e-6
EXACTNESS_TOL = 1e-6
# arg and exactness checks skip samples with |f| below this fraction of |f(z0)|
ARG_FLOOR = 1e-3
# critical values with an argument gap below this share a flow line
DEGENERATE_TOL = 1e-9


@dataclass
class FlowTrajectory:
    field: str
    t: np.ndarray
    z: np.ndarray
    terminal: str
    root_index: int = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.z.tolist()))

    def to_frame(self, f):
        values = f(self.z)
        return pd.DataFrame({"t": self.t, "re": self.z.real, "im": self.z.imag,
                             "abs_f": np.abs(values), "arg_f": np.angle(values)})

    def to_dict(self):
        return {"field": self.field, "terminal": self.terminal, "root_index": self.root_index,
                "samples": len(self.t), "t_end": float(self.t[-1]),
                "z_end": [float(self.z[-1].real), float(self.z[-1].imag)], "diagnostics": self.diagnostics}


def _vector_field(f, df, kind):
    def raw(t, s):
        z = complex(s[0], s[1])
        w = -f(z) / df(z)
        return [w.real, w.imag]

    def desing(t, s):
        z = complex(s[0], s[1])
        w = -f(z) * np.conj(df(z))
        return [w.real, w.imag]
    return raw if kind == "raw" else desing


def _check_invariants(f, t, z, f0):
    """
    index of the first sample that breaks |f| decreasing or arg f constant,
    or None.
    """
    values = f(z)
    modulus = np.abs(values)
    bad = np.nonzero(np.diff(modulus) >= 0)[0]
    first = int(bad[0]) + 1 if bad.size else None
    drift = np.abs(np.angle(values / f0))
    allowed = ARG_TOL * (1.0 + t)
    bad = np.nonzero((drift > allowed) & (modulus >= ARG_FLOOR * abs(f0)))[0]
    if bad.size and (first is None or bad[0] < first):
        first = int(bad[0])
    return first


def newton_flow(f, z0, t_max, field="raw", rtol=RTOL, atol=ATOL):
    """
    f : Polynomial
    z0 : complex, not a root or a zero of f'
    field : "raw" or "desing"

    return : FlowTrajectory
    """
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}")
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    z0 = complex(z0)
    df = f.derivative()
    f0 = f(z0)
    if f0 == 0:
        raise ValueError("z0 is a root of f")
    if abs(df(z0)) < SINGULAR_TOL:
        raise ValueError("z0 is a zero of f'")
    nmap = NewtonMap(f)

    def root_event(t, s):
        return abs(f(complex(s[0], s[1]))) - ROOT_TOL * abs(f0)
    root_event.terminal = True
    root_event.direction = -1

    def singular_event(t, s):
        return abs(df(complex(s[0], s[1]))) - SINGULAR_TOL
    singular_event.terminal = True
    singular_event.direction = -1

    sol = solve_ivp(_vector_field(f, df, field), (0.0, float(t_max)), [z0.real, z0.imag], method="RK45",
                    rtol=rtol, atol=atol, events=[root_event, singular_event])
    t = sol.t
    z = sol.y[0] + 1j * sol.y[1]
    if sol.status == -1:
        raise StepFailure(f"integration failed: {sol.message}", last_sample=(float(t[-1]), complex(z[-1])))
    broken = _check_invariants(f, t, z, f0)
    if broken is not None:
        raise StepFailure(f"flow invariant broken at t={t[broken]:.6g}",
                          last_sample=(float(t[broken - 1]), complex(z[broken - 1])))
    terminal, root_index = "time-budget", None
    if sol.t_events[0].size:
        terminal = "reached-root"
        root_index, _ = nmap.nearest_root(z[-1])
    elif sol.t_events[1].size:
        terminal = "reached-singularity"
    diagnostics = {"steps": int(t.size - 1), "nfev": int(sol.nfev)}
    if field == "raw":
        values = f(z)
        kept = np.abs(values) >= ARG_FLOOR * abs(f0)
        ratio = values[kept] / (f0 * np.exp(-t[kept]))
        diagnostics["exactness"] = float(np.max(np.abs(ratio - 1.0)))
        if diagnostics["exactness"] > EXACTNESS_TOL:
            com.logger.warning(f"raw flow: f(z(t)) deviates from e^-t f(z0) by {diagnostics['exactness']:.2e}")
    com.logger.debug(f"newton_flow {field} from {z0}: {terminal} at t={t[-1]:.4g}")
    return FlowTrajectory(field, t, z, terminal, root_index, diagnostics)


def detect_degenerate(f, tol=DEGENERATE_TOL):
    """
    the flow of f is degenerate when two nonzero critical values share an
    argument. Critical values equal to 0 (a root at a critical point) are
    listed apart and never paired.

    return : dict(degenerate, pairs, critical_values, zero_values)
    """
    if f.degree < 3:
        raise ValueError("degeneracy is defined for degree >= 3")
    points = [c for c, _ in roots_with_multiplicity(f.derivative())]
    values = [complex(f(c)) for c in points]
    scale = max([abs(v) for v in values] + [1.0])
    zero = [k for k, v in enumerate(values) if abs(v) <= 1e-12 * scale]
    pairs = []
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if i in zero or j in zero:
                continue
            gap = abs(np.angle(values[i] / values[j]))
            if gap < tol:
                pairs.append((i, j))
    if pairs:
        com.logger.info(f"degenerate Newton flow: critical values {[values[k] for p in pairs for k in p]}")
    return {"degenerate": bool(pairs), "pairs": pairs, "critical_values": values, "zero_values": zero}


def euler_discrepancy(f, window, h=0.05, max_speed=10.0):
    """
    mean |N_{h,f}(z) - phi_h(z)| over the window points, where phi_h is the
    raw flow for time h. Points whose speed |f/f'| exceeds max_speed are skipped.

    return : dict(mean, max, points, h)
    """
    nmap = NewtonMap(f, h)
    df = f.derivative()
    points = window.points().reshape(-1)
    fz, dfz = f(points), df(points)
    with np.errstate(divide="ignore", invalid="ignore"):
        speed = np.abs(fz / dfz)
    usable = np.isfinite(speed) & (speed < max_speed) & (np.abs(fz) > 0)
    start = points[usable]
    n = start.size

    def rhs(t, s):
        z = s[:n] + 1j * s[n:]
        w = -f(z) / df(z)
        return np.concatenate([w.real, w.imag])

    sol = solve_ivp(rhs, (0.0, h), np.concatenate([start.real, start.imag]), method="RK45", rtol=1e-10, atol=1e-12)
    if sol.status == -1:
        raise StepFailure(f"euler cross-check integration failed: {sol.message}")
    flowed = sol.y[:n, -1] + 1j * sol.y[n:, -1]
    stepped = np.array([relaxed_newton_eval(nmap, z) for z in start])
    gap = np.abs(stepped - flowed)
    return {"mean": float(np.mean(gap)), "max": float(np.max(gap)), "points": int(n), "h": h,
            "mean_over_h2": float(np.mean(gap)) / h ** 2}
