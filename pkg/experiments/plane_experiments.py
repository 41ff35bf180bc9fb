"""
Dynamic and parameter plane subcommands: julia, mandel, tricorn, cubic-u,
ray, coding-tree, yoccoz-limbs, limb-diameter, solve-param.
"""
import math

import pandas as pd

# original lib
import common as com
from algebra.parameter import condition_residual, problem_from_config, solve_parameter
from algebra.polynomial import Polynomial
from dynamics import coding_tree, orbits
from dynamics.coding_tree import branch_limit, build_coding_tree
from dynamics.orbits import classify_critical_orbits, critical_orbit_diagnostic
from errors import ConfigError
from experiments.base_experiment import BaseExperiment, dump_json, load_map, load_polynomial
from planes import kernels, rays, yoccoz
from planes.escape import (cloud_to_grid, render_basins, render_cubic_U, render_escape, render_inverse,
                           render_mandelbrot, render_tricorn, repelling_fixed_point)
from planes.rays import trace_external_ray
from planes.yoccoz import limb_diameter, yoccoz_disks, yoccoz_disks_figure


class JuliaExperiment(BaseExperiment):
    name = "julia"
    tolerances = {"capture_tol": kernels.CAPTURE_TOL, "landing_tol": orbits.LANDING_TOL}

    def run(self):
        f = load_map(self.args.poly)
        window = self.window()
        if self.args.method == "inverse":
            if not isinstance(f, Polynomial):
                raise ConfigError("inverse iteration renders need a polynomial")
            cloud = render_inverse(f, self.args.depth, self.args.sample_budget)
            grid = cloud_to_grid(cloud, window)
        elif self.args.method == "basins":
            if not isinstance(f, Polynomial):
                raise ConfigError("basin renders need a polynomial, rational maps already get one class per basin")
            grid = render_basins(f, window, self.args.max_iter, self.args.chunk_rows)
        else:
            grid = render_escape(f, window, self.args.max_iter, self.args.chunk_rows)
        results = {"map": repr(f), "method": self.args.method, "window": window.to_dict(),
                   "summary": grid.summary(), "output": self.save_grid(grid)}
        if f.degree >= 2:
            results["critical_orbits"] = [r.to_dict() for r in classify_critical_orbits(f)]
            if isinstance(f, Polynomial):
                results["orbit_diagnostic"] = critical_orbit_diagnostic(f)
        return results


class MandelExperiment(BaseExperiment):
    name = "mandel"
    default_window = (-0.5, 0.0, 3.0, 3.0)

    def run(self):
        grid = render_mandelbrot(self.window(), self.args.max_iter, self.args.chunk_rows)
        return {"summary": grid.summary(), "output": self.save_grid(grid)}


class TricornExperiment(BaseExperiment):
    name = "tricorn"

    def run(self):
        grid = render_tricorn(self.window(), self.args.max_iter, self.args.chunk_rows)
        return {"summary": grid.summary(), "output": self.save_grid(grid)}


class CubicUExperiment(BaseExperiment):
    name = "cubic-u"
    default_window = (0.0, 0.0, 6.0, 6.0)
    tolerances = {"capture_tol": kernels.CAPTURE_TOL}

    def run(self):
        grid = render_cubic_U(self.window(), self.args.max_iter, self.args.chunk_rows)
        both = grid.count(2)
        return {"summary": grid.summary(), "both_attracted_area": both * grid.window.pixel_area,
                "output": self.save_grid(grid)}


class RayExperiment(BaseExperiment):
    name = "ray"
    tolerances = {"ray_radius": rays.RAY_RADIUS, "landing_window": rays.LANDING_WINDOW}

    def run(self):
        f = load_polynomial(self.args.poly)
        try:
            ray = trace_external_ray(f, self.args.angle, levels=self.args.levels, max_iter=self.args.max_iter)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        results = ray.to_dict()
        if self.args.format == "csv":
            path = self.output_path()
            pd.DataFrame({"potential": ray.potentials, "re": [z.real for z in ray.points],
                          "im": [z.imag for z in ray.points]}).to_csv(path, index=False, float_format="%.17g")
            print(f"save ray -> {path}")
            results["output"] = path
        return results


class CodingTreeExperiment(BaseExperiment):
    name = "coding-tree"
    tolerances = {"critical_value_tol": coding_tree.CRITICAL_VALUE_TOL}

    def run(self):
        f = load_map(self.args.poly)
        root = self.args.start if self.args.start is not None else repelling_fixed_point(f)
        try:
            tree = build_coding_tree(f, root, self.args.depth, sample_budget=self.args.sample_budget)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        results = {"root": root, "depth": tree.depth, "degree": tree.preimage_count,
                   "level_sizes": [int(tree.level(n).size) for n in range(tree.depth + 1)],
                   "shift_residual": tree.shift_residual()}
        if self.args.word:
            try:
                point, converged, diameter = branch_limit(tree, self.args.word, max(1, self.args.depth))
            except ValueError as e:
                raise ConfigError(f"--word: {e}") from e
            results["branch_limit"] = {"word": self.args.word, "point": point, "converged": converged,
                                       "tail_diameter": diameter}
        if self.args.format == "csv":
            rows = [{"level": n, "index": k, "re": z.real, "im": z.imag}
                    for n in range(tree.depth + 1) for k, z in enumerate(tree.level(n))]
            path = self.output_path()
            pd.DataFrame(rows).to_csv(path, index=False, float_format="%.17g")
            print(f"save vertices -> {path}")
            results["output"] = path
        return results


class YoccozLimbsExperiment(BaseExperiment):
    name = "yoccoz-limbs"
    default_window = (0.0, math.pi, 2.0, 2.0 * math.pi + 1.0)

    def run(self):
        grid = yoccoz_disks_figure(self.args.q_max, self.window())
        return {"disks": yoccoz_disks(self.args.q_max), "summary": grid.summary(), "output": self.save_grid(grid)}


class LimbDiameterExperiment(BaseExperiment):
    name = "limb-diameter"
    tolerances = {"bisect_tol": yoccoz.BISECT_TOL, "half_angle": yoccoz.LIMB_HALF_ANGLE}

    def run(self):
        try:
            estimate = limb_diameter(self.args.p, self.args.q, self.args.sampling, self.args.max_iter)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        com.logger.info(f"limb {self.args.p}/{self.args.q}: q^2 * diameter = {estimate['k_estimate']:.4f}")
        return estimate


class SolveParamExperiment(BaseExperiment):
    name = "solve-param"
    tolerances = {"residual": 1e-12}

    def run(self):
        presets = com.load_presets()
        try:
            problem = problem_from_config(self.args.condition, presets, seed=self.args.start)
        except KeyError as e:
            raise ConfigError(str(e)) from e
        if problem.family.name != self.args.family:
            raise ConfigError(f"problem '{self.args.condition}' belongs to family '{problem.family.name}', "
                              f"not '{self.args.family}'")
        c = solve_parameter(problem, tolerance=self.tolerances["residual"])
        f = problem.family.at(c)
        results = {"problem": problem.name, "family": problem.family.name, "c": c,
                   "residual": condition_residual(problem, c),
                   "critical_orbits": [r.to_dict() for r in classify_critical_orbits(f)]}
        if "z" in problem.notes:
            results["z"] = problem.notes["z"]
        if self.args.out:
            dump_json(self.output_path("json"), {"c": c})
        return results
