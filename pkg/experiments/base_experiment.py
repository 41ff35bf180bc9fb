import json
import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

# original lib
import common as com
from algebra.polynomial import Polynomial, RationalMap
from errors import ConfigError
from planes.window import Window, load_palette
from tools.image_io import write_grid


def to_jsonable(value):
    """
    complex -> [re, im], numpy scalars and arrays -> python, Fraction -> "p/q".
    Non-finite floats become null.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Path):
        return str(value)
    return value


def dump_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as tf:
        json.dump(to_jsonable(payload), tf, indent=2, ensure_ascii=False)
    return path


########################################################################
# named maps
########################################################################
def _complex(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v), 0.0)


def map_from_entry(name, entry):
    """
    maps.yaml entry -> Polynomial or RationalMap.

    coefficients : ascending, each a number or [re, im]
    numerator, denominator : rational map
    rotation : alpha, for z^2 + e^{2 pi i alpha} z
    """
    if "coefficients" in entry:
        return Polynomial([_complex(a) for a in entry["coefficients"]])
    if "numerator" in entry:
        return RationalMap(Polynomial([_complex(a) for a in entry["numerator"]]),
                           Polynomial([_complex(a) for a in entry["denominator"]]))
    if "rotation" in entry:
        lam = np.exp(2j * np.pi * float(entry["rotation"]))
        return Polynomial([0.0, complex(lam), 1.0])
    raise ConfigError(f"map preset '{name}' needs coefficients, numerator/denominator or rotation")


def load_map(source, presets=None):
    """
    source : path of a "re,im" per line file, or a preset name from maps.yaml
    """
    path = Path(source)
    if path.is_file():
        try:
            return Polynomial.load(path)
        except ValueError as e:
            raise ConfigError(f"{path}: {e}") from e
    presets = com.load_presets() if presets is None else presets
    maps = presets.get("maps", {})
    if source not in maps:
        raise ConfigError(f"'{source}' is neither a map file nor a preset ({', '.join(sorted(maps))})")
    return map_from_entry(source, maps[source])


def load_polynomial(source, presets=None):
    f = load_map(source, presets)
    if not isinstance(f, Polynomial):
        raise ConfigError(f"'{source}' is a rational map, this subcommand needs a polynomial")
    return f


class BaseExperiment(object):
    """
    One subcommand. run() returns the results payload; execute() wraps it
    into report.json together with the effective config, the tolerances
    in force and the wall time.
    """
    name = ""
    default_window = (0.0, 0.0, 4.0, 4.0)
    tolerances = {}
    # subcommands whose --out names the report rather than an image or table
    report_is_output = False

    def __init__(self, args):
        self.args = args
        self.export_dir = f"{self.args.export_dir}" if self.args.export_dir else ""
        self.result_dir = Path(f"{args.result_directory}/{self.name}/{self.export_dir}")
        self.result_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = com.setup_logging(self.result_dir / "run.log")
        self.report_path = self.result_dir / "report.json"
        self._palette = None

        # output parameter to json
        self.args_path = self.result_dir / "args.json"
        dump_json(self.args_path, vars(self.args))
        print(f"save args -> {self.args_path}")

    @property
    def palette(self):
        if self._palette is None:
            self._palette = load_palette(self.args.palette)
        return self._palette

    def window(self, default=None):
        return Window.from_args(self.args.window or default or self.default_window, self.args.size)

    def output_path(self, fmt=None, stem=None, primary=False):
        """
        --out when given for the primary output, else <result_dir>/<stem>.<fmt>.
        Outputs without a stem are primary.
        """
        fmt = fmt or self.args.format
        if self.args.out and not self.report_is_output and (primary or stem is None):
            path = Path(self.args.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            return path
        return self.result_dir / f"{stem or self.name}.{fmt}"

    def save_grid(self, grid):
        """
        write the grid in --format; json keeps the grid out of the outputs.
        """
        if self.args.format == "json":
            return None
        path = write_grid(self.output_path(), grid, self.palette if self.args.format != "csv" else None,
                          self.args.format)
        print(f"save {self.args.format} -> {path}")
        return path

    def run(self):
        raise NotImplementedError

    def status(self, results):
        return 0

    def execute(self):
        print(f"============== BEGIN {self.name.upper()} ==============")
        start = time.perf_counter()
        results = self.run()
        wall_time = time.perf_counter() - start
        report = {
            "tool_version": com.__versions__,
            "subcommand": self.name,
            "config": vars(self.args),
            "tolerances": self.tolerances,
            "wall_time": wall_time,
            "results": results,
        }
        dump_json(self.report_path, report)
        print(f"save report -> {self.report_path}")
        if self.report_is_output and self.args.out:
            dump_json(self.args.out, report)
            print(f"save report -> {self.args.out}")
        print(f"============ END OF {self.name.upper()} ============")
        return self.status(results)
