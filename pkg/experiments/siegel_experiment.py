import numpy as np
import pandas as pd

# original lib
import common as com
from errors import ConfigError, InsufficientOrder, SmallDivisorOverflow
from experiments.base_experiment import BaseExperiment
from siegel import carleson, linearization
from siegel.carleson import (boundary_angle_probe, carleson_recursion, deviation_from_f0, dual_construction_gap,
                             f0_constant)
from siegel.linearization import (SiegelFamily, conformal_radius_estimate, conjugacy_residual, linearize,
                                  normalize_at_critical_point, small_divisor_scan)
from siegel.rotation_number import continued_fraction

CORNER_RETRY_ORDER = 512


class SiegelExperiment(BaseExperiment):
    """
    rotation number, linearizer h of the Siegel family, the f-recursion and
    the corner angle of the disk image at the critical point.
    """
    name = "siegel"
    tolerances = {"small_divisor_floor": linearization.SMALL_DIVISOR_FLOOR,
                  "linearization_residual": linearization.RESIDUAL_TOL,
                  "cot_guard": carleson.COT_GUARD, "probe_min_order": carleson.PROBE_MIN_ORDER}

    def run(self):
        try:
            family = SiegelFamily(self.args.rho, self.args.theta)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        order = self.args.order
        rotation = continued_fraction(family.theta)
        n_min, divisor = small_divisor_scan(family, order)
        h = linearize(family, order)
        residual = conjugacy_residual(family, h)
        if residual > linearization.RESIDUAL_TOL:
            com.logger.warning(f"linearizer residual {residual:.3e} above {linearization.RESIDUAL_TOL}")
        g, normalization = normalize_at_critical_point(h)

        f = carleson_recursion(family.theta, family.rho, order)
        f_real = carleson_recursion(family.theta, family.rho, order, drop_imaginary=True)
        results = {
            "family": family.to_dict(),
            "rotation": rotation.to_dict(),
            "small_divisor": {"n": n_min, "divisor": divisor},
            "linearizer": {"order": h.order, "residual": residual,
                           "conformal_radius": conformal_radius_estimate(h), "normalization": normalization},
            "recursion": self.recursion_summary(f, f_real, family.rho),
            "dual_construction": dual_construction_gap(family.theta, family.rho, min(order, 128)),
        }
        results["boundary_angle"] = self.estimate_boundary_angle(family, g, order)
        results["coefficients"] = self.save_coefficients(f, family.rho)
        return results

    def recursion_summary(self, f, f_real, rho):
        deviation = deviation_from_f0(f, rho)
        if deviation >= carleson.DEVIATION_BOUND:
            com.logger.warning(f"max |a_nu - a_0| = {deviation:.4f} exceeds {carleson.DEVIATION_BOUND}")
        return {"a0": f0_constant(rho), "deviation_from_f0": deviation,
                "deviation_without_cot": deviation_from_f0(f_real, rho),
                "bound": carleson.DEVIATION_BOUND, "within_bound": bool(deviation < carleson.DEVIATION_BOUND)}

    def estimate_boundary_angle(self, family, g, order):
        """
        Corner angle of g, then once more on a linearizer of order CORNER_RETRY_ORDER
        when the coefficient tail of g is too heavy.
        """
        try:
            return dict(boundary_angle_probe(g), order=order)
        except InsufficientOrder as e:
            if order >= CORNER_RETRY_ORDER:
                com.logger.warning(f"boundary angle estimate skipped: {e}")
                return None
            com.logger.info(f"boundary angle estimate at order {order} failed ({e}), retrying at {CORNER_RETRY_ORDER}")
        try:
            g, _ = normalize_at_critical_point(linearize(family, CORNER_RETRY_ORDER))
            return dict(boundary_angle_probe(g), order=CORNER_RETRY_ORDER)
        except (InsufficientOrder, SmallDivisorOverflow) as e:
            com.logger.warning(f"boundary angle estimate skipped: {e}")
            return None

    def save_coefficients(self, f, rho):
        """
        nu, Re a_nu, Im a_nu, |a_nu - a_0| per row.
        """
        a = f.coefficients
        frame = pd.DataFrame({"nu": np.arange(a.size), "re": a.real, "im": a.imag,
                              "dev": np.abs(a - f0_constant(rho))})
        path = self.output_path("csv", stem="coefficients", primary=True)
        frame.to_csv(path, index=False, float_format="%.17g")
        print(f"save coefficients -> {path}")
        return path
