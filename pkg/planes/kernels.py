"""
torch engines for per-pixel iteration.

Every kernel works on a flat complex128 tensor of starting points and
compacts the active set as pixels resolve. Pixels never interact, so the
result does not depend on how a window is split into row chunks or on the
thread count.
"""
import math

import numpy as np
import torch
from tqdm import tqdm

from planes.window import ClassifiedGrid

import common as com

DEVICE = torch.device("cpu")
DTYPE = torch.complex128
CAPTURE_TOL = 1e-6


def configure(threads=1, use_cuda=False, gpu_id=0):
    global DEVICE
    torch.set_num_threads(max(1, int(threads)))
    if use_cuda and torch.cuda.is_available():
        DEVICE = torch.device("cuda", gpu_id)
    else:
        DEVICE = torch.device("cpu")
    return DEVICE


def as_tensor(points):
    return torch.as_tensor(np.ascontiguousarray(points, dtype=np.complex128).reshape(-1), dtype=DTYPE, device=DEVICE)


def horner(coefficients, z):
    """
    coefficients : sequence of complex, ascending order
    """
    p = torch.full_like(z, complex(coefficients[-1]))
    for a in coefficients[-2::-1]:
        p = p * z + complex(a)
    return p


def homogeneous(coefficients, degree, u, v):
    """
    sum a_k u^k v^(degree-k).
    """
    v_powers = [torch.ones_like(v)]
    for _ in range(degree):
        v_powers.append(v_powers[-1] * v)
    result = torch.zeros_like(u)
    for k in range(degree, -1, -1):
        a = complex(coefficients[k]) if k < len(coefficients) else 0j
        result = result * u + a * v_powers[degree - k]
    return result


def smooth_count(n, magnitude, degree):
    return n + 1.0 - torch.log(torch.log(magnitude)) / math.log(degree)


def escape_iterate(z, step, max_iter, radius, degree, param=None, targets=None, capture_tol=CAPTURE_TOL):
    """
    iterate z <- step(z, param) until |z| > radius or z comes within
    capture_tol of one of the targets.

    z : tensor( complex128 ), flat
    param : tensor like z or None, per-pixel parameter
    targets : tensor( complex128 ) of finite attracting-cycle points

    return : (escaped bool, captured int64 target index or -1, values float64, final z)
    """
    total = z.numel()
    escaped = torch.zeros(total, dtype=torch.bool, device=z.device)
    captured = torch.full((total,), -1, dtype=torch.int64, device=z.device)
    values = torch.zeros(total, dtype=torch.float64, device=z.device)
    final = z.clone()
    active = torch.arange(total, device=z.device)
    zz = z.clone()
    pp = param
    for k in range(0, max_iter + 1):
        if k > 0:
            zz = step(zz, pp)
        mag = zz.abs()
        out = mag > radius
        done = out.clone()
        if out.any():
            idx = active[out]
            escaped[idx] = True
            values[idx] = smooth_count(k, mag[out], degree)
        if targets is not None and targets.numel():
            dist = (zz[:, None] - targets[None, :]).abs()
            scale = torch.clamp(targets.abs(), min=1.0)[None, :]
            hit = dist < capture_tol * scale
            near = hit.any(dim=1) & ~out
            if near.any():
                idx = active[near]
                captured[idx] = hit[near].to(torch.int64).argmax(dim=1)
                values[idx] = float(k)
                done = done | near
        if done.any():
            final[active[done]] = zz[done]
            keep = ~done
            active = active[keep]
            zz = zz[keep]
            if pp is not None:
                pp = pp[keep]
        if active.numel() == 0:
            break
    if active.numel():
        final[active] = zz
    return escaped, captured, values, final


def homogeneous_iterate(u, v, numerator, denominator, degree, max_iter, targets, capture_tol=CAPTURE_TOL):
    """
    iterate (u : v) <- (N(u, v) : D(u, v)) on the sphere, normalizing by max(|u|, |v|).

    targets : list of complex or INF, cycle points on the sphere

    return : (captured int64 target index or -1, values float64)
    """
    total = u.numel()
    captured = torch.full((total,), -1, dtype=torch.int64, device=u.device)
    values = torch.zeros(total, dtype=torch.float64, device=u.device)
    active = torch.arange(total, device=u.device)
    uu, vv = u.clone(), v.clone()
    for k in range(0, max_iter + 1):
        if k > 0:
            uu, vv = homogeneous(numerator, degree, uu, vv), homogeneous(denominator, degree, uu, vv)
            norm = torch.maximum(uu.abs(), vv.abs())
            norm = torch.where(norm > 0, norm, torch.ones_like(norm))
            uu, vv = uu / norm, vv / norm
        length = torch.sqrt(uu.abs() ** 2 + vv.abs() ** 2)
        hit_any = torch.zeros(uu.numel(), dtype=torch.bool, device=u.device)
        which = torch.full((uu.numel(),), -1, dtype=torch.int64, device=u.device)
        for t, p in enumerate(targets):
            if math.isinf(p.real):
                chordal = vv.abs() / length
            else:
                chordal = (uu - p * vv).abs() / (length * math.sqrt(1.0 + abs(p) ** 2))
            hit = (chordal < capture_tol) & ~hit_any
            which[hit] = t
            hit_any = hit_any | hit
        if hit_any.any():
            idx = active[hit_any]
            captured[idx] = which[hit_any]
            values[idx] = float(k)
            keep = ~hit_any
            active, uu, vv = active[keep], uu[keep], vv[keep]
        if active.numel() == 0:
            break
    return captured, values


def render_chunked(window, compute, chunk_rows=64, desc="render"):
    """
    evaluate compute on the window row chunk by row chunk.

    compute : callable(points numpy.array( complex, flat )) -> (classes, values, aux) numpy arrays

    return : ClassifiedGrid
    """
    if chunk_rows < 1:
        raise ValueError("chunk_rows must be >= 1")
    grid = ClassifiedGrid.empty(window)
    starts = range(0, window.rows, chunk_rows)
    for start in tqdm(starts, desc=desc, disable=len(starts) < 4):
        stop = min(window.rows, start + chunk_rows)
        points = window.rows_points(start, stop)
        classes, values, aux = compute(points.reshape(-1))
        shape = points.shape
        grid.classes[start:stop] = np.asarray(classes, dtype=np.uint8).reshape(shape)
        grid.values[start:stop] = np.asarray(values, dtype=np.float64).reshape(shape)
        grid.aux[start:stop] = np.asarray(aux, dtype=np.int32).reshape(shape)
    com.logger.debug(f"{desc}: {grid.summary()}")
    return grid


def to_numpy(t):
    return t.detach().cpu().numpy()
