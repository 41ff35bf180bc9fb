import numpy as np

# original lib
from errors import ConfigError
from experiments.base_experiment import BaseExperiment, load_polynomial
from newton_lab import basins, flow
from newton_lab.basins import H_SAMPLE_FLOOR, basin_grid, common_basin_arcs
from newton_lab.flow import detect_degenerate, euler_discrepancy, newton_flow
from newton_lab.newton_map import NewtonMap, find_bad_cycles, root_multiplier_estimate
from planes.window import Window
from tools.plot_common import Figdata, show_figs

EULER_GRID = 64


class NewtonBasinsExperiment(BaseExperiment):
    name = "newton-basins"
    tolerances = {"root_capture": basins.ROOT_CAPTURE}

    def run(self):
        f = load_polynomial(self.args.poly)
        try:
            nmap = NewtonMap(f, self.args.h)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        grid = basin_grid(f, self.args.h, self.window(), self.args.max_iter, self.args.chunk_rows)
        roots = [{"root": r, "multiplicity": m, "multiplier": 1.0 - self.args.h / m,
                  "multiplier_estimate": root_multiplier_estimate(nmap, k)}
                 for k, (r, m) in enumerate(nmap.roots)]
        return {"h": self.args.h, "roots": roots, "free_critical_points": nmap.free_critical_points(),
                "bad_cycles": [c.to_dict() for c in find_bad_cycles(f, self.args.h)],
                "summary": grid.summary(), "output": self.save_grid(grid)}


class NewtonFlowExperiment(BaseExperiment):
    name = "newton-flow"
    tolerances = {"rtol": flow.RTOL, "atol": flow.ATOL, "arg_tol": flow.ARG_TOL,
                  "exactness_tol": flow.EXACTNESS_TOL}

    def run(self):
        f = load_polynomial(self.args.poly)
        try:
            trajectory = newton_flow(f, self.args.z0, self.args.tmax, field=self.args.field)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        path = self.output_path("csv", stem="trajectory", primary=True)
        trajectory.to_frame(f).to_csv(path, index=False, float_format="%.17g")
        print(f"save trajectory -> {path}")
        cx, cy, w, h = self.args.window or self.default_window
        window = Window(complex(cx, cy), w, h, EULER_GRID, EULER_GRID)
        degenerate = detect_degenerate(f) if f.degree >= 3 else None
        return {"trajectory": trajectory.to_dict(), "output": path, "degenerate": degenerate,
                "euler_discrepancy": euler_discrepancy(f, window, h=min(self.args.h, 0.05))}


class NewtonArcsExperiment(BaseExperiment):
    name = "newton-arcs"
    report_is_output = True
    tolerances = {"root_capture": basins.ROOT_CAPTURE}

    def run(self):
        f = load_polynomial(self.args.poly)
        roots = NewtonMap(f).roots
        if not 0 <= self.args.root < len(roots):
            raise ConfigError(f"root index {self.args.root} out of range, f has {len(roots)} distinct roots")
        _, m = roots[self.args.root]
        h_samples = np.geomspace(H_SAMPLE_FLOOR * m, m, self.args.h_samples)
        try:
            report = common_basin_arcs(f, self.args.root, h_samples=h_samples, R=self.args.radius,
                                       angular_resolution=self.args.resolution, grid_size=self.args.size[0],
                                       max_iter=self.args.max_iter, chunk_rows=self.args.chunk_rows)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        results = report.to_dict()
        results["plot"] = show_figs(
            Figdata(report.per_h_length, x=report.h_set, title="arc length inside the immediate basin",
                    xlabel="h", ylabel="length"),
            Figdata(report.membership.astype(np.float64), type="heatmap", title="basin membership",
                    xlabel="angle", ylabel="h index"),
            fold_interval=2, width_mm=120, height_mm=80, export_path=self.output_path("png", stem="arcs"))
        return results
