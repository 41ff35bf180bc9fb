"""
Basins of relaxed Newton maps and the common-basin arc experiment.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from newton_lab.newton_map import NewtonMap, find_bad_cycles
from planes import kernels
from planes.window import BAD_CYCLE, UNDECIDED, Window, basin_code

import common as com

ROOT_CAPTURE = 1e-8
BLOWUP_RADIUS = 1e30
H_SAMPLES = 16
H_SAMPLE_FLOOR = 0.05
# iterations per unit of h/m needed to contract a radius-R start to ROOT_CAPTURE
ITERATIONS_PER_RATE = 30


def _newton_targets(nmap, bad_cycles):
    roots = [r for r, _ in nmap.roots]
    extra = [p for cycle in bad_cycles for p in cycle.points]
    return np.array(roots + extra, dtype=np.complex128), len(roots)


def _basin_compute(nmap, max_iter, bad_cycles):
    f = list(nmap.f.coefficients)
    df = list(nmap.df.coefficients)
    h = nmap.h
    points, n_roots = _newton_targets(nmap, bad_cycles)
    targets = kernels.as_tensor(points)

    def step(z, _):
        return z - h * kernels.horner(f, z) / kernels.horner(df, z)

    def compute(chunk):
        z = kernels.as_tensor(chunk)
        _, captured, values, _ = kernels.escape_iterate(z, step, max_iter, BLOWUP_RADIUS, 2, targets=targets,
                                                        capture_tol=ROOT_CAPTURE)
        captured = kernels.to_numpy(captured)
        classes = np.full(chunk.size, UNDECIDED, dtype=np.uint8)
        aux = np.full(chunk.size, -1, dtype=np.int32)
        root_hit = (captured >= 0) & (captured < n_roots)
        bad_hit = captured >= n_roots
        if root_hit.any():
            classes[root_hit] = [basin_code(k) for k in captured[root_hit]]
            aux[root_hit] = captured[root_hit]
        classes[bad_hit] = BAD_CYCLE
        values = kernels.to_numpy(values)
        values[~(root_hit | bad_hit)] = float(max_iter)
        return classes, values, aux
    return compute


def classify_points(f, h, points, max_iter=100, bad_cycles=None):
    """
    basin classes for an arbitrary array of starting points.

    return : (classes, aux) shaped like points
    """
    nmap = NewtonMap(f, h)
    bad_cycles = find_bad_cycles(f, h) if bad_cycles is None else bad_cycles
    points = np.asarray(points, dtype=np.complex128)
    classes, _, aux = _basin_compute(nmap, max_iter, bad_cycles)(points.reshape(-1))
    return classes.reshape(points.shape), aux.reshape(points.shape)


def basin_grid(f, h, window, max_iter=100, chunk_rows=64):
    """
    per pixel: basin_code(root index), BAD_CYCLE, or UNDECIDED.

    return : ClassifiedGrid
    """
    nmap = NewtonMap(f, h)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    bad_cycles = find_bad_cycles(f, h)
    if bad_cycles:
        com.logger.info(f"basin_grid: {len(bad_cycles)} bad cycle(s), periods {[c.period for c in bad_cycles]}")
    compute = _basin_compute(nmap, max_iter, bad_cycles)
    return kernels.render_chunked(window, compute, chunk_rows, desc="newton")


def immediate_basin(grid, root_index, root):
    """
    connected component (8-neighbour) of the root's basin class that contains
    the pixel of the root.

    return : numpy.array( bool ) shaped like the grid
    """
    i, j = grid.window.point_to_pixel(root)
    if not (0 <= i < grid.window.columns and 0 <= j < grid.window.rows):
        raise ValueError(f"root {root} lies outside the window")
    member = grid.classes == basin_code(root_index)
    labels, _ = ndimage.label(member, structure=np.ones((3, 3), dtype=bool))
    label = labels[j, i]
    if label == 0:
        return np.zeros_like(member)
    return labels == label


def default_h_samples(multiplicity):
    """
    H_SAMPLES geometrically spaced values in [H_SAMPLE_FLOOR m, m].
    """
    m = float(multiplicity)
    return np.geomspace(H_SAMPLE_FLOOR * m, m, H_SAMPLES)


def _arcs(inside, step):
    """
    maximal runs of True on a circular sample array.

    return : list of [start_angle, end_angle) in [0, 2 pi]; a run through
        angle 0 is split there
    """
    n = inside.size
    if inside.all():
        return [[0.0, 2 * np.pi]]
    if not inside.any():
        return []
    shift = int(np.argmin(inside))
    rolled = np.roll(inside, -shift)
    arcs = []
    k = 0
    while k < n:
        if rolled[k]:
            start = k
            while k < n and rolled[k]:
                k += 1
            first = (start + shift) % n
            last = first + k - start
            if last > n:
                arcs.append([float(first * step), float(2 * np.pi)])
                arcs.append([0.0, float((last - n) * step)])
            else:
                arcs.append([float(first * step), float(last * step)])
        else:
            k += 1
    return sorted(arcs)


@dataclass
class ArcReport:
    radius: float
    alpha: int
    h_set: list
    arcs: list = field(default_factory=list)
    total_length: float = 0.0
    bound: float = None
    c: float = None
    degree: int = 0
    per_h_length: list = field(default_factory=list)
    # rows follow h_set, columns the sampled angles
    membership: np.ndarray = None
    caveats: list = field(default_factory=list)

    def to_dict(self):
        return {"radius": self.radius, "alpha": self.alpha, "h_set": [float(h) for h in self.h_set],
                "arcs": self.arcs, "total_length": self.total_length, "bound": self.bound, "c": self.c,
                "degree": self.degree, "per_h_length": self.per_h_length, "caveats": self.caveats}


def common_basin_arcs(f, alpha_index, h_samples=None, R=3.0, angular_resolution=720, grid_size=512,
                      max_iter=100, chunk_rows=64):
    """
    arcs of the circle |z| = R lying in the immediate basin of root alpha for
    every h in h_samples.

    return : ArcReport
    """
    nmap = NewtonMap(f)
    if np.max(np.abs(nmap.root_points)) > 1.0 + 1e-12:
        raise ValueError("all roots must lie in the closed unit disk")
    if R < 3.0:
        raise ValueError("R must be >= 3")
    if not 0 <= alpha_index < len(nmap.roots):
        raise ValueError(f"root index out of range: {alpha_index}")
    root, m = nmap.roots[alpha_index]
    h_samples = default_h_samples(m) if h_samples is None else np.asarray(h_samples, dtype=np.float64)
    if np.any(h_samples <= 0) or np.any(h_samples > m + 1e-12):
        raise ValueError(f"h samples must lie in (0, {m}]")
    half = R + 0.5
    window = Window(0j, 2 * half, 2 * half, grid_size, grid_size)
    step = 2 * np.pi / angular_resolution
    angles = np.arange(angular_resolution) * step
    circle = R * np.exp(1j * angles)
    pixels = [window.point_to_pixel(z) for z in circle]
    cols = np.array([p[0] for p in pixels])
    rows = np.array([p[1] for p in pixels])
    common = np.ones(angular_resolution, dtype=bool)
    per_h = []
    membership = []
    for h in h_samples:
        iterations = max(max_iter, int(np.ceil(ITERATIONS_PER_RATE * m / h)))
        grid = basin_grid(f, h, window, iterations, chunk_rows)
        basin = immediate_basin(grid, alpha_index, root)
        inside = basin[rows, cols]
        per_h.append(float(R * step * inside.sum()))
        membership.append(inside)
        common &= inside
    arcs = _arcs(common, step)
    total = float(R * sum(b - a for a, b in arcs))
    d = f.degree
    report = ArcReport(float(R), int(alpha_index), list(h_samples), arcs, total, degree=d, per_h_length=per_h,
                       membership=np.array(membership))
    if total > 0:
        report.c = 2 * np.pi * R / (total * d)
        report.bound = 2 * np.pi * R / (report.c * d)
    report.caveats = [
        f"finite conjunction over {len(h_samples)} values of h over-estimates the common basin",
        f"membership sampled at {angular_resolution} angles on a {grid_size}^2 grid",
        "undecided pixels are excluded",
    ]
    return report
