"""Time-series reconstruction and semi-supervised labeling via set-cover QUBOs."""

from tsqubo.dataio import Dataset, TimeSeries, load_dataset, load_ucr, znormalize
from tsqubo.encoder import EncoderModel, SymbolicWord, encode, fit_sax, fit_sfa, paa
from tsqubo.pulling import PulledSubset, SubsetFamily, build_family, pull_pair
from tsqubo.qubo import CoverSolution, Qubo, build_qubo, decode, energy
from tsqubo.solver import AnnealParams, SolveResult, anneal, exhaustive, greedy_cover
from tsqubo.classifier import (
    ReconstructionReport,
    assign_label,
    reconstruct,
    score_largest_common,
    score_num_common,
    score_sum,
)
from tsqubo.baselines import accuracy_report, cluster2_dtw, dtw, dtw_matrix, knn1_dtw
from tsqubo.experiment import ExperimentConfig, RunReport, run_baselines, run_experiment

__version__ = "0.1.0"

__all__ = [
    "AnnealParams",
    "CoverSolution",
    "Dataset",
    "EncoderModel",
    "ExperimentConfig",
    "PulledSubset",
    "Qubo",
    "ReconstructionReport",
    "RunReport",
    "SolveResult",
    "SubsetFamily",
    "SymbolicWord",
    "TimeSeries",
    "accuracy_report",
    "anneal",
    "assign_label",
    "build_family",
    "build_qubo",
    "cluster2_dtw",
    "decode",
    "dtw",
    "dtw_matrix",
    "encode",
    "energy",
    "exhaustive",
    "fit_sax",
    "fit_sfa",
    "greedy_cover",
    "knn1_dtw",
    "load_dataset",
    "load_ucr",
    "paa",
    "pull_pair",
    "reconstruct",
    "run_baselines",
    "run_experiment",
    "score_largest_common",
    "score_num_common",
    "score_sum",
    "znormalize",
]
