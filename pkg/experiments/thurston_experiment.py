from pathlib import Path

import numpy as np

# original lib
import common as com
from errors import ConfigError
from experiments.base_experiment import BaseExperiment
from thurston_interval import pullback
from thurston_interval.interval_maps import PiecewiseMonotoneMap, uniform_grid
from thurston_interval.pullback import thurston_run
from tools.plot_common import Figdata, show_figs

OVERLAY_STEPS = (0, 1, 9)


def load_interval_map(source, samples, presets=None):
    """
    source : map file ("breakpoint value" per line) or a name under interval_maps in maps.yaml
    """
    if Path(source).is_file():
        return PiecewiseMonotoneMap.load(source, samples=samples)
    presets = com.load_presets() if presets is None else presets
    entries = presets.get("interval_maps", {})
    if source not in entries:
        raise ConfigError(f"'{source}' is neither an interval map file nor a preset ({', '.join(sorted(entries))})")
    entry = entries[source]
    try:
        return PiecewiseMonotoneMap.from_points(entry["points"], entry["values"], samples=samples)
    except (KeyError, ValueError) as e:
        raise ConfigError(f"interval map preset '{source}': {e}") from e


class ThurstonIntervalExperiment(BaseExperiment):
    name = "thurston-interval"
    report_is_output = True
    tolerances = {"range_tol": pullback.RANGE_TOL, "conjugacy_tol": pullback.CONJUGACY_TOL,
                  "refine_tol": pullback.REFINE_TOL}

    def run(self):
        f0 = load_interval_map(self.args.map, self.args.samples_per_lap)
        run = thurston_run(f0, self.args.steps, self.args.tol, samples=self.args.samples_per_lap)
        results = run.to_dict()
        final_path = self.output_path("txt", stem="f_final")
        run.maps[-1].save(final_path)
        print(f"save final map -> {final_path}")
        results["final_map"] = final_path
        results["plot"] = self.plot_graphs(run)
        return results

    def plot_graphs(self, run):
        """
        graphs of f_0, f_1, f_9 (those that exist) over the diagonal.
        """
        x = uniform_grid(1001)
        steps = [n for n in OVERLAY_STEPS if n < len(run.maps)]
        curves = [run.maps[n](x) for n in steps]
        path = Path(self.args.plot) if self.args.plot else self.output_path("png", stem="graphs")
        fig = Figdata(curves[0], x=x, data2=curves[1:] + [x], labels=[f"f{n}" for n in steps] + ["diagonal"],
                      title=f"Thurston pullback, {run.steps} steps", xlabel="x", ylabel="f(x)",
                      xlim=(0.0, 1.0), ylim=(0.0, 1.0))
        norms = Figdata(np.maximum(run.h_norms, 1e-17), type="semilogy", title="sup |h_n - id|",
                        xlabel="step")
        return show_figs(fig, norms, fold_interval=1, width_mm=100, height_mm=100, export_path=path)
