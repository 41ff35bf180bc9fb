import argparse
import random
import sys

import numpy as np
import torch

# original lib
import common as com
from errors import ConfigError, NumericalError
from experiments.experiments import Experiments
from planes import kernels

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


########################################################################
# load parameter.yaml
########################################################################
def load_args(argv):
    """
    defaults from the yaml named by --config, then the command line on top.
    """
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config', type=str, default='baseline.yaml')
    known, _ = pre.parse_known_args(argv)
    try:
        param = com.yaml_load(known.config)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {known.config}") from e
    if not isinstance(param, dict):
        raise ConfigError(f"{known.config} must hold a mapping of --flag: value")

    parser = com.get_argparse()
    # read parameters from yaml
    flat_param = com.param_to_args_list(params=param)
    args = parser.parse_args(args=flat_param)
    # read parameters from command line
    args = parser.parse_args(args=argv, namespace=args)
    return args


def setup(argv):
    """
    parse and check the configuration, seed, configure torch and build the
    experiment. Every failure here is a configuration error.
    """
    args = com.check_args(load_args(argv))
    if args.subcommand not in Experiments.ExperimentsDic:
        raise ConfigError(f"unknown subcommand '{args.subcommand}', "
                          f"choose from: {', '.join(Experiments.show_list())}")

    # Python random
    random.seed(args.seed)
    # Numpy
    np.random.seed(args.seed)
    # Pytorch
    torch.manual_seed(args.seed)
    kernels.configure(threads=args.threads, use_cuda=args.use_cuda,
                      gpu_id=args.gpu_id[0] if args.gpu_id else 0)

    return Experiments(args.subcommand).experiment(args)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        experiment = setup(argv)
    except SystemExit as e:
        # argparse reports bad flags through SystemExit
        if e.code in (0, None):
            return EXIT_OK
        return EXIT_CONFIG
    except (ConfigError, ValueError) as e:
        com.logger.error(f"config error: {e}")
        return EXIT_CONFIG

    try:
        return experiment.execute()
    except ConfigError as e:
        com.logger.error(f"config error: {e}")
        return EXIT_CONFIG
    except NumericalError as e:
        com.logger.error(f"{type(e).__name__}: {e}")
        return EXIT_NUMERICAL
    except ValueError as e:
        # inputs were accepted above, so this comes from inside a solver
        com.logger.error(f"numerical failure: {e}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
