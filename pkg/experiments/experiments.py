from experiments.entire_experiment import ExpFamilyExperiment
from experiments.figures import BaselineCheckExperiment, PaperFiguresExperiment
from experiments.newton_experiments import NewtonArcsExperiment, NewtonBasinsExperiment, NewtonFlowExperiment
from experiments.plane_experiments import (CodingTreeExperiment, CubicUExperiment, JuliaExperiment,
                                           LimbDiameterExperiment, MandelExperiment, RayExperiment,
                                           SolveParamExperiment, TricornExperiment, YoccozLimbsExperiment)
from experiments.siegel_experiment import SiegelExperiment
from experiments.thurston_experiment import ThurstonIntervalExperiment

class Experiments:
    ExperimentsDic = {
        "julia":JuliaExperiment,
        "mandel":MandelExperiment,
        "tricorn":TricornExperiment,
        "cubic-u":CubicUExperiment,
        "ray":RayExperiment,
        "coding-tree":CodingTreeExperiment,
        "thurston-interval":ThurstonIntervalExperiment,
        "siegel":SiegelExperiment,
        "newton-basins":NewtonBasinsExperiment,
        "newton-flow":NewtonFlowExperiment,
        "newton-arcs":NewtonArcsExperiment,
        "exp-family":ExpFamilyExperiment,
        "yoccoz-limbs":YoccozLimbsExperiment,
        "limb-diameter":LimbDiameterExperiment,
        "solve-param":SolveParamExperiment,
        "paper-figures":PaperFiguresExperiment,
        "baseline-check":BaselineCheckExperiment,
    }

    def __init__(self, experiment_str):
        self.experiment = Experiments.ExperimentsDic[experiment_str]

    @staticmethod
    def show_list():
        return Experiments.ExperimentsDic.keys()
