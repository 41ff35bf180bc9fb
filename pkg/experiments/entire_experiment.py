import math

import numpy as np

# original lib
from entire_maps import families
from entire_maps.families import EntireFamily, singular_orbit_classify
from entire_maps.render import render_exp_dynamic, render_exp_param, strip_invariant_set
from errors import ConfigError
from experiments.base_experiment import BaseExperiment
from planes.window import BOUNDED

DEFAULT_WINDOWS = {
    "dynamic": (1.0, 0.0, 6.0, 6.0),
    "param": (0.0, 0.0, 4.0, 4.0),
    "strip": (1.5, math.pi / 2, 5.0, math.pi),
}


class ExpFamilyExperiment(BaseExperiment):
    name = "exp-family"
    tolerances = {"overflow_bound": families.OVERFLOW_BOUND, "cycle_tol": families.CYCLE_TOL,
                  "parabolic_tol": families.PARABOLIC_TOL}

    def run(self):
        plane = self.args.plane
        window = self.window(DEFAULT_WINDOWS[plane])
        results = {"plane": plane, "window": window.to_dict()}
        if plane == "param":
            grid = render_exp_param(window, self.args.max_iter, self.args.chunk_rows)
        else:
            try:
                family = EntireFamily(self.args.kind, self.args.lam)
            except ValueError as e:
                raise ConfigError(str(e)) from e
            results["family"] = family.to_dict()
            results["singular_orbits"] = [r.to_dict() for r in singular_orbit_classify(family, self.args.max_iter)]
            if plane == "strip":
                if family.kind != "exp":
                    raise ConfigError("strip sets are defined for the exponential family")
                grid = strip_invariant_set(family.lam, window, self.args.max_iter, self.args.chunk_rows)
                results["undecided_in"] = int(np.count_nonzero((grid.classes == BOUNDED) & (grid.aux == 1)))
            else:
                grid = render_exp_dynamic(family, window, self.args.max_iter, self.args.chunk_rows)
        results["summary"] = grid.summary()
        results["output"] = self.save_grid(grid)
        return results
