"""
Dynamic plane, parameter plane and invariant strip renders for the entire
families. Escape is always the Overflow certificate, never a radius test.
"""
import math

import numpy as np
import torch

from entire_maps.families import (CYCLE_TOL, MAX_PERIOD, PARABOLIC_TOL, EntireFamily, attracting_cycles,
                                  entire_step_tensor, singular_orbit_classify)
from planes import kernels
from planes.window import BOUNDED, ESCAPED, UNDECIDED, basin_code

import common as com

STRIP_HEIGHT = math.pi
# |Im w| <= SNAP_ULPS * eps * |w| is rounding noise off the real axis
SNAP_ULPS = 8
EPS = np.finfo(np.float64).eps
STRIP_SLACK = 1e-12


def _check_iter(max_iter):
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")


########################################################################
# dynamic plane
########################################################################
def _dynamic_compute(family, max_iter, cycles):
    points = [p for c in cycles for p in c.cycle]
    owner = np.array([k for k, c in enumerate(cycles) for _ in c.cycle], dtype=np.int64)
    targets = kernels.as_tensor(np.array(points)) if points else None

    def compute(chunk):
        z = kernels.as_tensor(chunk)
        total = z.numel()
        escaped = torch.zeros(total, dtype=torch.bool, device=z.device)
        captured = torch.full((total,), -1, dtype=torch.int64, device=z.device)
        values = torch.full((total,), float(max_iter), dtype=torch.float64, device=z.device)
        active = torch.arange(total, device=z.device)
        zz = z.clone()
        for k in range(1, max_iter + 1):
            zz, out = entire_step_tensor(family, zz)
            done = out.clone()
            if out.any():
                idx = active[out]
                escaped[idx] = True
                values[idx] = float(k)
            if targets is not None:
                dist = (zz[:, None] - targets[None, :]).abs()
                scale = torch.clamp(targets.abs(), min=1.0)[None, :]
                hit = dist < kernels.CAPTURE_TOL * scale
                near = hit.any(dim=1) & ~out
                if near.any():
                    idx = active[near]
                    captured[idx] = hit[near].to(torch.int64).argmax(dim=1)
                    values[idx] = float(k)
                    done = done | near
            if done.any():
                keep = ~done
                active, zz = active[keep], zz[keep]
            if active.numel() == 0:
                break
        escaped = kernels.to_numpy(escaped)
        captured = kernels.to_numpy(captured)
        classes = np.full(chunk.size, UNDECIDED, dtype=np.uint8)
        aux = np.full(chunk.size, -1, dtype=np.int32)
        classes[escaped] = ESCAPED
        hit = captured >= 0
        if hit.any():
            classes[hit] = [basin_code(k) for k in owner[captured[hit]]]
            aux[hit] = owner[captured[hit]]
        return classes, kernels.to_numpy(values), aux
    return compute


def render_exp_dynamic(family, window, max_iter=200, chunk_rows=64):
    """
    per pixel: ESCAPED with the dwell to the Overflow certificate,
    basin_code(k) for capture by the k-th attracting cycle of a singular
    orbit, UNDECIDED otherwise.

    return : ClassifiedGrid
    """
    _check_iter(max_iter)
    cycles = attracting_cycles(singular_orbit_classify(family, max(max_iter, 500)))
    if cycles:
        com.logger.info(f"{family.kind} lam={family.lam}: attracting cycles of period {[c.period for c in cycles]}")
    grid = kernels.render_chunked(window, _dynamic_compute(family, max_iter, cycles), chunk_rows,
                                  desc=f"{family.kind}-dynamic")
    return grid


########################################################################
# invariant strip
########################################################################
def _snap(w):
    imag = torch.where(w.imag.abs() <= SNAP_ULPS * EPS * w.abs(), torch.zeros_like(w.imag), w.imag)
    return torch.complex(w.real, imag)


def _in_strip(w):
    return (w.imag >= -STRIP_SLACK) & (w.imag <= STRIP_HEIGHT + STRIP_SLACK)


def strip_classes(lam, points, N):
    """
    classes : BOUNDED when the orbit keeps 0 <= Im <= pi through N steps
              (aux 1 when it overflowed first, "undecided-in"), ESCAPED
              when it leaves the strip
    values : the iterate that left or overflowed, else N

    return : (classes, values, aux) flat numpy arrays
    """
    family = EntireFamily("exp", lam)
    z = _snap(kernels.as_tensor(points))
    total = z.numel()
    classes = np.full(total, BOUNDED, dtype=np.uint8)
    values = np.full(total, float(N))
    aux = np.zeros(total, dtype=np.int32)
    active = torch.arange(total, device=z.device)
    outside = ~_in_strip(z)
    if outside.any():
        idx = kernels.to_numpy(active[outside])
        classes[idx] = ESCAPED
        values[idx] = 0.0
    active, zz = active[~outside], z[~outside]
    for n in range(1, N + 1):
        if active.numel() == 0:
            break
        zz, out = entire_step_tensor(family, zz)
        zz = _snap(zz)
        left = ~out & ~_in_strip(zz)
        if out.any():
            idx = kernels.to_numpy(active[out])
            aux[idx] = 1
            values[idx] = float(n)
        if left.any():
            idx = kernels.to_numpy(active[left])
            classes[idx] = ESCAPED
            values[idx] = float(n)
        keep = ~(out | left)
        active, zz = active[keep], zz[keep]
    return classes, values, aux


def strip_invariant_set(lam, window, N=60, chunk_rows=64):
    """
    lam : real, > 1/e
    window : inside 0 <= Im z <= pi

    return : ClassifiedGrid
    """
    lam = complex(lam)
    if lam.imag != 0 or lam.real <= math.exp(-1):
        raise ValueError("strip sets need real lambda > 1/e")
    if N < 1:
        raise ValueError("N must be >= 1")
    y = window.imag_axis()
    if y.min() < -STRIP_SLACK or y.max() > STRIP_HEIGHT + STRIP_SLACK:
        raise ValueError("window must lie inside the strip 0 <= Im z <= pi")
    grid = kernels.render_chunked(window, lambda chunk: strip_classes(lam, chunk, N), chunk_rows, desc="strip")
    undecided_in = int(np.count_nonzero((grid.classes == BOUNDED) & (grid.aux == 1)))
    if undecided_in:
        com.logger.info(f"strip set: {undecided_in} pixel(s) overflowed inside the strip (undecided-in)")
    return grid


########################################################################
# parameter plane of lam e^z
########################################################################
def _param_compute(max_iter):
    family = EntireFamily("exp", 1.0)

    def compute(chunk):
        lam = kernels.as_tensor(chunk)
        total = lam.numel()
        classes = np.full(total, UNDECIDED, dtype=np.uint8)
        values = np.full(total, float(max_iter))
        aux = np.zeros(total, dtype=np.int32)
        active = torch.arange(total, device=lam.device)
        zz = torch.zeros_like(lam)
        ll = lam
        for k in range(1, max_iter + 1):
            zz, out = entire_step_tensor(family, zz, ll)
            if out.any():
                idx = kernels.to_numpy(active[out])
                classes[idx] = ESCAPED
                values[idx] = float(k)
                keep = ~out
                active, zz, ll = active[keep], zz[keep], ll[keep]
            if active.numel() == 0:
                break
        if active.numel():
            # period and multiplier of the cycle the orbit of 0 has settled on
            start = zz
            w = zz
            multiplier = torch.ones_like(zz)
            period = torch.zeros(zz.numel(), dtype=torch.int64, device=zz.device)
            blown = torch.zeros(zz.numel(), dtype=torch.bool, device=zz.device)
            product = torch.ones_like(zz)
            for p in range(1, MAX_PERIOD + 1):
                w, out = entire_step_tensor(family, w, ll)
                blown = blown | out
                # (lam e^z)' = lam e^z, so the multiplier is the product of the images
                product = product * w
                closed = ((w - start).abs() <= CYCLE_TOL * torch.clamp(start.abs(), min=1.0)) & (period == 0) & ~blown
                period = torch.where(closed, torch.full_like(period, p), period)
                multiplier = torch.where(closed, product, multiplier)
            attracted = (period > 0) & (multiplier.abs() < 1.0 - PARABOLIC_TOL)
            idx = kernels.to_numpy(active[attracted])
            p = kernels.to_numpy(period[attracted])
            classes[idx] = [basin_code(int(q) - 1) for q in p]
            aux[idx] = p
        return classes, values, aux
    return compute


def render_exp_param(window, max_iter=500, chunk_rows=64):
    """
    per lam: ESCAPED with the dwell of the orbit of 0, basin_code(p - 1)
    with aux p when it settles on an attracting p-cycle, UNDECIDED otherwise.

    return : ClassifiedGrid
    """
    _check_iter(max_iter)
    return kernels.render_chunked(window, _param_compute(max_iter), chunk_rows, desc="exp-param")
