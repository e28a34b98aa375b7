"""Predicted and fitted asymptotic coefficients, with their special functions and kernels."""

from .coefficients import PredictedCoefficients, basis_function, power_label, predicted_cor4, prop3_coeffs
from .fitting import DEFAULT_BASIS, ExpansionFit, RankDeficientFit, design_matrix, fit_expansion
from .kernels import QuadratureError, phi_log, w_log
from .probe import constant_term_fit, constant_term_probe, probe_partial_sums
from .residues import (
    EpsilonSeries,
    IllConditionedFit,
    NonDecayingSeries,
    ResidueTable,
    epsilon_C,
    expansion_values,
    residues_fit,
)
from .special import euler_gamma, zeta_int

__all__ = [
    "DEFAULT_BASIS",
    "EpsilonSeries",
    "ExpansionFit",
    "IllConditionedFit",
    "NonDecayingSeries",
    "PredictedCoefficients",
    "QuadratureError",
    "RankDeficientFit",
    "ResidueTable",
    "basis_function",
    "constant_term_fit",
    "constant_term_probe",
    "design_matrix",
    "epsilon_C",
    "euler_gamma",
    "expansion_values",
    "fit_expansion",
    "phi_log",
    "power_label",
    "predicted_cor4",
    "probe_partial_sums",
    "prop3_coeffs",
    "residues_fit",
    "w_log",
    "zeta_int",
]
