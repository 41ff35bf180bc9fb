from dataclasses import replace

import numpy as np
import torch

from algebra.extended import is_inf, chordal_distance
from algebra.polynomial import Polynomial, as_rational
from algebra.roots import poly_roots
from dynamics.coding_tree import DEFAULT_BUDGET, build_coding_tree
from dynamics.orbits import classify_critical_orbits, escape_radius_bound
from planes import kernels
from planes.window import BOUNDED, ESCAPED, UNDECIDED, ClassifiedGrid, basin_code

import common as com

PARAMETER_RADIUS = 2.0


def attracting_cycles(f, max_iter=500):
    """
    attracting cycles found through the critical orbits, without duplicates.

    return : list of CycleRecord
    """
    cycles = []
    for report in classify_critical_orbits(f, max_iter=max_iter):
        cycle = report.cycle
        if cycle is None or abs(cycle.multiplier) >= 1.0:
            continue
        duplicate = any(min(chordal_distance(cycle.points[0], q) for q in known.points) < 1e-6
                        for known in cycles)
        if not duplicate:
            cycles.append(cycle)
    return cycles


def _cycle_targets(cycles):
    points, owner, position = [], [], []
    for k, cycle in enumerate(cycles):
        for m, p in enumerate(cycle.points):
            points.append(p)
            owner.append(k)
            position.append(m)
    return points, np.array(owner, dtype=np.int64), np.array(position, dtype=np.int32)


def _polynomial_compute(f, max_iter, cycles=None, undecided_code=BOUNDED):
    coefficients = list(f.coefficients)
    radius = escape_radius_bound(f)
    degree = f.degree
    finite, owner, position = _cycle_targets(cycles or [])
    if any(is_inf(p) for p in finite):
        raise ValueError("polynomial basins cannot contain infinity")
    targets = kernels.as_tensor(np.array(finite)) if finite else None

    def step(z, _):
        return kernels.horner(coefficients, z)

    def compute(points):
        z = kernels.as_tensor(points)
        escaped, captured, values, _ = kernels.escape_iterate(z, step, max_iter, radius, degree, targets=targets)
        escaped = kernels.to_numpy(escaped)
        captured = kernels.to_numpy(captured)
        classes = np.full(points.size, undecided_code, dtype=np.uint8)
        aux = np.zeros(points.size, dtype=np.int32)
        classes[escaped] = ESCAPED
        hit = captured >= 0
        if hit.any():
            classes[hit] = [basin_code(k) for k in owner[captured[hit]]]
            aux[hit] = position[captured[hit]]
        return classes, kernels.to_numpy(values), aux
    return compute


def _rational_compute(f, max_iter, cycles):
    g = as_rational(f)
    degree = g.degree
    numerator = list(g.numerator.coefficients)
    denominator = list(g.denominator.coefficients)
    targets, owner, position = _cycle_targets(cycles)

    def compute(points):
        z = kernels.as_tensor(points)
        u = z.clone()
        v = torch.ones_like(z)
        captured, values = kernels.homogeneous_iterate(u, v, numerator, denominator, degree, max_iter, targets)
        captured = kernels.to_numpy(captured)
        classes = np.full(points.size, UNDECIDED, dtype=np.uint8)
        aux = np.zeros(points.size, dtype=np.int32)
        hit = captured >= 0
        if hit.any():
            classes[hit] = [basin_code(k) for k in owner[captured[hit]]]
            aux[hit] = position[captured[hit]]
        return classes, kernels.to_numpy(values), aux
    return compute


def render_escape(f, window, max_iter, chunk_rows=64):
    """
    dynamic plane of a Polynomial (escaped / bounded, smooth count) or a
    RationalMap (one basin code per attracting cycle, 255 when undecided).

    return : ClassifiedGrid
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if isinstance(f, Polynomial):
        compute = _polynomial_compute(f, max_iter)
        return kernels.render_chunked(window, compute, chunk_rows, desc="julia")
    cycles = attracting_cycles(f)
    com.logger.info(f"render_escape: {len(cycles)} attracting cycle(s) from critical orbits")
    return kernels.render_chunked(window, _rational_compute(f, max_iter, cycles), chunk_rows, desc="julia")


def render_basins(f, window, max_iter, chunk_rows=64):
    """
    polynomial dynamic plane with bounded attracting basins split by cycle.
    """
    cycles = attracting_cycles(f)
    compute = _polynomial_compute(f, max_iter, cycles, undecided_code=BOUNDED)
    return kernels.render_chunked(window, compute, chunk_rows, desc="basins")


def julia_area_bound(f, window, max_iter, refinement=1, chunk_rows=64):
    """
    area of the pixels that neither escape nor reach an attracting cycle
    within max_iter; nonincreasing in max_iter.

    The window must cover [-R, R]^2 for the escape radius R of f.
    refinement : every window pixel is split into refinement^2 sub-pixels
    """
    if not isinstance(f, Polynomial):
        raise ValueError("julia_area_bound needs a polynomial")
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    window = replace(window, columns=window.columns * refinement, rows=window.rows * refinement)
    radius = escape_radius_bound(f)
    if not window.contains_square(radius):
        raise ValueError(f"window must cover [-{radius}, {radius}]^2")
    cycles = attracting_cycles(f)
    compute = _polynomial_compute(f, max_iter, cycles, undecided_code=UNDECIDED)
    grid = kernels.render_chunked(window, compute, chunk_rows, desc="area")
    return grid.area(UNDECIDED)


########################################################################
# parameter planes
########################################################################
def _parameter_compute(step, max_iter, start=None):
    def compute(points):
        c = kernels.as_tensor(points)
        z = torch.zeros_like(c) if start is None else start(c)
        escaped, _, values, _ = kernels.escape_iterate(z, step, max_iter, PARAMETER_RADIUS, 2, param=c)
        escaped = kernels.to_numpy(escaped)
        classes = np.where(escaped, ESCAPED, BOUNDED).astype(np.uint8)
        return classes, kernels.to_numpy(values), np.zeros(points.size, dtype=np.int32)
    return compute


def _quadratic(z, c):
    return z * z + c


def _anti_quadratic(z, c):
    w = torch.conj(z)
    return w * w + c


def classify_parameters(points, max_iter, family="mandelbrot"):
    """
    escape classification of the critical orbit for an array of parameters.

    return : (classes, values) numpy arrays shaped like points
    """
    points = np.asarray(points, dtype=np.complex128)
    step = {"mandelbrot": _quadratic, "tricorn": _anti_quadratic}[family]
    classes, values, _ = _parameter_compute(step, max_iter)(points.reshape(-1))
    return classes.reshape(points.shape), values.reshape(points.shape)


def render_mandelbrot(window, max_iter, chunk_rows=64):
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    return kernels.render_chunked(window, _parameter_compute(_quadratic, max_iter), chunk_rows, desc="mandel")


def render_tricorn(window, max_iter, chunk_rows=64):
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    return kernels.render_chunked(window, _parameter_compute(_anti_quadratic, max_iter), chunk_rows, desc="tricorn")


def cubic_u_classes(lams, max_iter):
    """
    number of finite critical points of lam z^2 + z^3 attracted to 0.

    The critical point 0 is fixed, so the count is 1 + [free critical point -2 lam / 3 converges to 0].
    """
    lams = np.asarray(lams, dtype=np.complex128).reshape(-1)
    lam = kernels.as_tensor(lams)
    z = -2.0 * lam / 3.0
    radius = torch.clamp(1.0 + lam.abs(), min=2.0)

    def step(w, p):
        return p * w * w + w * w * w

    total = lam.numel()
    classes = np.ones(total, dtype=np.uint8)
    values = np.zeros(total)
    active = torch.arange(total, device=lam.device)
    zz, pp, rr = z.clone(), lam.clone(), radius.clone()
    for k in range(max_iter + 1):
        if k > 0:
            zz = step(zz, pp)
        mag = zz.abs()
        out = mag > rr
        inside = mag < kernels.CAPTURE_TOL
        if inside.any():
            idx = kernels.to_numpy(active[inside])
            classes[idx] = 2
            values[idx] = k
        if out.any():
            values[kernels.to_numpy(active[out])] = k
        done = out | inside
        keep = ~done
        active, zz, pp, rr = active[keep], zz[keep], pp[keep], rr[keep]
        if active.numel() == 0:
            break
    return classes, values


def render_cubic_U(window, max_iter, chunk_rows=64):
    """
    lambda plane of lam z^2 + z^3; class 2 approximates the region where
    both critical points lie in the basin of 0.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")

    def compute(points):
        classes, values = cubic_u_classes(points, max_iter)
        return classes, values, np.zeros(points.size, dtype=np.int32)
    return kernels.render_chunked(window, compute, chunk_rows, desc="cubic-u")


########################################################################
# inverse iteration
########################################################################
def repelling_fixed_point(f):
    """
    the finite fixed point of largest multiplier modulus.
    """
    fixed = poly_roots(f - Polynomial([0.0, 1.0]))
    moduli = [abs(f.eval_with_derivative(z)[1]) for z in fixed]
    k = int(np.argmax(moduli))
    if moduli[k] <= 1.0:
        raise ValueError("no repelling fixed point")
    return complex(fixed[k])


def render_inverse(f, depth, sample_budget, root=None, tree_budget=None):
    """
    coding-tree leaves used as a Julia-set point cloud.

    root : complex, default the most repelling fixed point
    sample_budget : int, number of leaves emitted (evenly thinned)

    return : numpy.array( complex )
    """
    if sample_budget < 1:
        raise ValueError("sample_budget must be >= 1")
    if root is None:
        root = repelling_fixed_point(f)
    if tree_budget is None:
        tree_budget = max(DEFAULT_BUDGET, depth * f.degree ** depth)
    tree = build_coding_tree(f, root, depth, sample_budget=tree_budget)
    leaves = tree.level(depth)
    if leaves.size > sample_budget:
        keep = np.linspace(0, leaves.size - 1, sample_budget).round().astype(np.int64)
        leaves = leaves[keep]
    return leaves


def cloud_to_grid(cloud, window, fill=BOUNDED, marker=ESCAPED):
    """
    rasterize a point cloud: marker class on every pixel holding a point.
    """
    grid = ClassifiedGrid.empty(window, fill=fill)
    for z in cloud:
        i, j = window.point_to_pixel(z)
        if 0 <= i < window.columns and 0 <= j < window.rows:
            grid.classes[j, i] = marker
            grid.values[j, i] = 0.0
    return grid


def boundary_band(f, points, max_iter=200, radius=0.01, directions=8):
    """
    fraction of points that have both an escaping and a non-escaping sample
    within the given radius (or are themselves non-escaping with an escaping neighbor).
    """
    points = np.asarray(points, dtype=np.complex128).reshape(-1)
    offsets = np.concatenate([[0.0], radius * np.exp(2j * np.pi * np.arange(directions) / directions)])
    samples = (points[:, None] + offsets[None, :]).reshape(-1)
    compute = _polynomial_compute(f, max_iter)
    classes, _, _ = compute(samples)
    classes = classes.reshape(points.size, offsets.size)
    escaped_any = (classes == ESCAPED).any(axis=1)
    bounded_any = (classes == BOUNDED).any(axis=1)
    return float(np.mean(escaped_any & bounded_any))
