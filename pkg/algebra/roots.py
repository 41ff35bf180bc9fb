import numpy as np

from algebra.extended import INF
from algebra.polynomial import Polynomial, RationalFunction
from errors import NoConvergence

# roots closer than this (relative) are reported as one root with multiplicity
MULTIPLICITY_TOL = 1e-4
RESIDUAL_TOL = 1e-10


def root_residual_bound(p, r):
    return RESIDUAL_TOL * p.scale() * max(1.0, abs(r)) ** p.degree


def _aberth(c, max_iter):
    """
    Aberth-Ehrlich simultaneous iteration on a polynomial with nonzero
    constant term.

    c : numpy.array( complex ), ascending coefficients
    """
    d = c.size - 1
    monic = c / c[-1]
    radius = 1.0 + np.max(np.abs(monic[:-1]))
    # offset angle keeps the start off any symmetry axis of the input
    z = radius * np.exp(2j * np.pi * (np.arange(d) + 0.4) / d)
    if d == 1:
        return np.array([-c[0] / c[1]])
    rev = c[::-1]
    drev = np.polyder(rev)
    off_diagonal = ~np.eye(d, dtype=bool)
    for it in range(max_iter):
        pv = np.polyval(rev, z)
        dpv = np.polyval(drev, z)
        ratio = np.zeros_like(z)
        good = dpv != 0
        ratio[good] = pv[good] / dpv[good]
        ratio[~good & (pv != 0)] = 1e-8 * radius
        diff = z[:, None] - z[None, :]
        inv = np.zeros_like(diff)
        inv[off_diagonal] = 1.0 / diff[off_diagonal]
        s = inv.sum(axis=1)
        w = ratio / (1.0 - ratio * s)
        z = z - w
        if np.all(np.abs(w) <= 4e-16 * np.maximum(1.0, np.abs(z))):
            break
    return z


def _conjugate_close(roots, tol=1e-8):
    """
    pair roots of a real polynomial with their conjugates and symmetrize.
    """
    roots = roots.copy()
    upper = [k for k, r in enumerate(roots) if r.imag > tol * max(1.0, abs(r))]
    lower = [k for k, r in enumerate(roots) if r.imag < -tol * max(1.0, abs(r))]
    real = [k for k in range(roots.size) if k not in upper and k not in lower]
    if len(upper) != len(lower):
        return roots
    used = set()
    for k in upper:
        best = None
        for j in lower:
            if j in used:
                continue
            if best is None or abs(roots[j] - np.conj(roots[k])) < abs(roots[best] - np.conj(roots[k])):
                best = j
        used.add(best)
        mean = 0.5 * (roots[k] + np.conj(roots[best]))
        roots[k] = mean
        roots[best] = np.conj(mean)
    for k in real:
        roots[k] = complex(roots[k].real, 0.0)
    return roots


def poly_roots(p, max_iter=500):
    """
    all roots of p counted with multiplicity.

    p : Polynomial, degree >= 1
    max_iter : int
        simultaneous-iteration sweeps

    return : numpy.array( complex ) of length p.degree, sorted by (real, imag)
    """
    if p.degree < 1:
        raise ValueError("poly_roots needs degree >= 1")
    c = np.asarray(p.coefficients, dtype=np.complex128)
    zeros_at_origin = int(np.argmax(c != 0))
    c = c[zeros_at_origin:]
    roots = np.zeros(zeros_at_origin, dtype=np.complex128)
    if c.size > 1:
        found = _aberth(c, max_iter)
        if not np.all(np.isfinite(found)):
            raise NoConvergence("poly_roots", max_iter)
        roots = np.concatenate([roots, found])
    if p.is_real():
        roots = _conjugate_close(roots)
    for r in roots:
        if abs(p(r)) > root_residual_bound(p, r):
            raise NoConvergence("poly_roots", max_iter)
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def cluster_roots(roots, tol=MULTIPLICITY_TOL):
    """
    group numerically coincident roots.

    return : list of (center, multiplicity)
    """
    remaining = list(roots)
    clusters = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        rest = []
        for r in remaining:
            if abs(r - seed) <= tol * max(1.0, abs(seed)):
                members.append(r)
            else:
                rest.append(r)
        remaining = rest
        clusters.append((complex(np.mean(members)), len(members)))
    return clusters


def roots_with_multiplicity(p):
    return cluster_roots(poly_roots(p))


def critical_points(f, with_multiplicity=False):
    """
    critical points of a Polynomial or rational map on the sphere.

    Finite critical points are zeros of f' (of the Wronskian N'D - ND' for
    rational maps); infinity is added with the multiplicity missing from the
    count 2d - 2.

    return : list of points, or list of (point, multiplicity)
    """
    if isinstance(f, Polynomial):
        d = f.degree
        if d < 2:
            raise ValueError("critical_points needs degree >= 2")
        finite = cluster_roots(poly_roots(f.derivative()))
        at_infinity = d - 1
    elif isinstance(f, RationalFunction):
        d = f.degree
        if d < 2:
            raise ValueError("critical_points needs degree >= 2")
        wronskian = (f.numerator.derivative() * f.denominator - f.numerator * f.denominator.derivative()).trimmed()
        finite = cluster_roots(poly_roots(wronskian)) if wronskian.degree >= 1 else []
        at_infinity = 2 * d - 2 - wronskian.degree if not wronskian.is_zero() else 2 * d - 2
    else:
        raise TypeError(f"unsupported map type: {type(f)}")
    result = list(finite)
    if at_infinity > 0:
        result.append((INF, at_infinity))
    if with_multiplicity:
        return result
    return [z for z, _ in result]
