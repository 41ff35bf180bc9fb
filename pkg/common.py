import yaml
import itertools
import argparse
import logging
from fractions import Fraction
from pathlib import Path

from errors import ConfigError

########################################################################
# version
########################################################################
__versions__ = "1.0.0"

########################################################################
# setup STD I/O
########################################################################
"""
Diagnostics go to the "dynlab" logger. run.py attaches a file handler
that writes run.log next to the experiment outputs.
"""
logger = logging.getLogger("dynlab")
logger.setLevel(logging.DEBUG)
if not logger.handlers:
    handler = logging.StreamHandler()
    handler.setLevel(logging.INFO)
    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    handler.setFormatter(formatter)
    logger.addHandler(handler)


def setup_logging(log_path):
    log_path = Path(log_path)
    log_path.parent.mkdir(parents=True, exist_ok=True)
    for h in list(logger.handlers):
        if isinstance(h, logging.FileHandler):
            logger.removeHandler(h)
            h.close()
    file_handler = logging.FileHandler(log_path)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
    logger.addHandler(file_handler)
    return log_path

########################################################################
# load parameter.yaml
########################################################################
def yaml_load(path="baseline.yaml"):
    with open(path) as stream:
        param = yaml.safe_load(stream)
    return param or {}

def param_to_args_list(params):
    params = list(itertools.chain.from_iterable(zip(params.keys(), params.values())))
    args_list = []
    for param in params:
        if type(param) is list:
            args_list.extend([str(p) for p in param])
        else:
            args_list.append(str(param))
    return args_list

########################################################################
# named maps and figures
########################################################################
MAPS_YAML = "maps.yaml"
FIGURES_YAML = "figures.yaml"

def load_presets(path=MAPS_YAML):
    """
    maps.yaml holds named maps ("maps") and parameter problems ("problems").

    return : dict
    """
    try:
        return yaml_load(path)
    except FileNotFoundError as e:
        raise ConfigError(f"preset file not found: {path}") from e

########################################################################
# argparse setting
########################################################################
def str2bool(v):
    if isinstance(v, bool):
        return v
    if v.lower() in ['true', '1']:
        return True
    elif v.lower() in ['false', '0']:
        return False
    else:
        raise argparse.ArgumentTypeError('Boolean value expected.')

def float_or_None(v):
    if v.lower() in ["none", "null"]:
        return None
    return float(v)

def parse_complex(v):
    """
    "re,im" or a plain real number.
    """
    try:
        parts = [float(p) for p in str(v).split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"complex value expected as RE,IM: {v}")
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise argparse.ArgumentTypeError(f"complex value expected as RE,IM: {v}")

def parse_window(v):
    try:
        cx, cy, w, h = [float(p) for p in str(v).split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"window expected as cx,cy,w,h: {v}")
    if w <= 0 or h <= 0:
        raise argparse.ArgumentTypeError(f"window width and height must be positive: {v}")
    return (cx, cy, w, h)

def parse_size(v):
    try:
        cols, rows = [int(p) for p in str(v).lower().split("x")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"size expected as WxH: {v}")
    if cols < 1 or rows < 1:
        raise argparse.ArgumentTypeError(f"size must be positive: {v}")
    return (cols, rows)

def parse_fraction(v):
    try:
        angle = Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"rational angle expected as p/q: {v}")
    return angle

def parse_theta(v):
    if str(v).lower() == "golden":
        return "golden"
    try:
        return float(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"theta expected as 'golden' or a decimal: {v}")

def get_argparse():
    parser = argparse.ArgumentParser(
            description='Complex dynamics workbench: renders, solvers and reference figures')
    parser.add_argument('subcommand', type=str, nargs='?', default=None,
                        help='experiment to run (see experiments/experiments.py)')
    parser.add_argument('--config', type=str, default='baseline.yaml',
                        help='YAML file of --flag: value defaults')
    parser.add_argument('--seed', type=int, default=13711, metavar='S',
                        help='random seed for any randomized sampling')

    parser.add_argument('--use_cuda', type=str2bool, default=False,
                        help='run grid engines on CUDA when available')
    parser.add_argument('--gpu_id', type=int, nargs='*', default=[0,],
                        help='Specify GPU id')
    parser.add_argument('--threads', type=int, default=1,
                        help='torch intra-op threads; output does not depend on it')
    parser.add_argument('--chunk-rows', '--chunk_rows', dest='chunk_rows', type=int, default=64,
                        help='rows per grid chunk; output does not depend on it')

    # save data
    parser.add_argument('--result_directory', type=str, default='results/', metavar='N',
                        help='Where to store outputs')
    parser.add_argument('--export_dir', type=str, default='',
                        help='root directory for reports and images, one subdirectory per subcommand')
    parser.add_argument('--out', type=str, default='',
                        help='primary output file (default: inside the result directory)')
    parser.add_argument('--format', type=str, default='ppm', choices=['ppm', 'png', 'csv', 'json'])
    parser.add_argument('--palette', type=str, default='planes/palette.yaml',
                        help='256-entry palette file')

    # maps and windows
    parser.add_argument('--poly', type=str, default='basilica',
                        help='map file ("re,im" per line) or preset name from maps.yaml')
    parser.add_argument('--window', type=parse_window, default=None,
                        help='cx,cy,w,h (default: per subcommand)')
    parser.add_argument('--size', type=parse_size, default=(512, 512),
                        help='WxH in pixels')
    parser.add_argument('--max-iter', '--max_iter', dest='max_iter', type=int, default=500)
    parser.add_argument('--method', type=str, default='escape', choices=['escape', 'basins', 'inverse'],
                        help='julia render engine')

    # rays and coding trees
    parser.add_argument('--angle', type=parse_fraction, default=Fraction(0),
                        help='external angle p/q')
    parser.add_argument('--levels', type=int, default=60,
                        help='potential levels for ray tracing')
    parser.add_argument('--depth', type=int, default=10)
    parser.add_argument('--sample-budget', '--sample_budget', dest='sample_budget', type=int, default=100000)
    parser.add_argument('--word', type=str, default='',
                        help='periodic symbol word for branch limits, e.g. 01')

    # thurston interval
    parser.add_argument('--map', type=str, default='tent',
                        help='interval map file ("breakpoint value" per line) or preset name from maps.yaml')
    parser.add_argument('--steps', type=int, default=30)
    parser.add_argument('--tol', type=float, default=1e-4,
                        help='stop once sup|h_n - id| falls below it')
    parser.add_argument('--plot', type=str, default='',
                        help='graph overlay output (png or ppm)')
    parser.add_argument('--samples-per-lap', '--samples_per_lap', dest='samples_per_lap', type=int, default=4096)

    # siegel
    parser.add_argument('--theta', type=parse_theta, default='golden')
    parser.add_argument('--rho', type=parse_complex, default=complex(1.0, 0.0))
    parser.add_argument('--order', type=int, default=256)

    # newton
    parser.add_argument('--h', type=float, default=1.0, help='Newton relaxation')
    parser.add_argument('--z0', type=parse_complex, default=complex(2.0, 0.0))
    parser.add_argument('--field', type=str, default='raw', choices=['raw', 'desing'])
    parser.add_argument('--tmax', type=float, default=5.0)
    parser.add_argument('--root', type=int, default=0, help='root index')
    parser.add_argument('--radius', type=float, default=3.0)
    parser.add_argument('--h-samples', '--h_samples', dest='h_samples', type=int, default=16)
    parser.add_argument('--resolution', type=int, default=720,
                        help='angular samples on the arc circle')

    # entire maps
    parser.add_argument('--kind', type=str, default='exp', choices=['exp', 'sin', 'cos', 'expsin', 'expcos'])
    parser.add_argument('--lambda', dest='lam', type=parse_complex, default=complex(1.0, 0.0))
    parser.add_argument('--plane', type=str, default='dynamic', choices=['dynamic', 'param', 'strip'])

    # parameter planes and limbs
    parser.add_argument('--q-max', '--q_max', dest='q_max', type=int, default=12)
    parser.add_argument('--p', type=int, default=1)
    parser.add_argument('--q', type=int, default=2)
    parser.add_argument('--sampling', type=int, default=64)

    # parameter solving
    parser.add_argument('--family', type=str, default='quadratic')
    parser.add_argument('--condition', type=str, default='period3',
                        help='parameter problem name from maps.yaml')
    parser.add_argument('--start', type=parse_complex, default=None,
                        help='Newton seed for solve-param (default: from maps.yaml)')

    # figures and baselines
    parser.add_argument('--baseline-dir', '--baseline_dir', dest='baseline_dir', type=str, default='baseline',
                        help='directory holding the reference figures and their hash manifest')
    parser.add_argument('--update-baseline', '--update_baseline', dest='update_baseline', type=str2bool, default=False,
                        help='rewrite the hash manifest after regenerating figures')
    parser.add_argument('--figure-scale', '--figure_scale', dest='figure_scale', type=float, default=1.0,
                        help='scale factor applied to shipped figure sizes')

    return parser

# flag -> (lowest allowed value, strict)
ARG_FLOORS = {
    "threads": (1, False), "chunk_rows": (1, False), "max_iter": (1, False),
    "levels": (2, False), "depth": (0, False), "sample_budget": (1, False),
    "steps": (1, False), "tol": (0.0, True), "samples_per_lap": (8, False),
    "order": (2, False), "h": (0.0, True), "tmax": (0.0, True),
    "h_samples": (1, False), "resolution": (8, False), "q_max": (1, False),
    "q": (1, False), "sampling": (2, False), "figure_scale": (0.0, True),
}

def check_args(args):
    """
    range checks on the numeric flags; raises ConfigError naming the flag.
    """
    for name, (floor, strict) in ARG_FLOORS.items():
        value = getattr(args, name, None)
        if value is None:
            continue
        if value < floor or (strict and value == floor):
            relation = ">" if strict else ">="
            flag = "--" + name.replace("_", "-")
            raise ConfigError(f"{flag} must be {relation} {floor}, got {value}")
    return args
