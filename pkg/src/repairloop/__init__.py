"""Mean time to failure of absorbing CTMCs by repair-loop augmentation.

Close the chain with rate-``mu`` repairs from every absorbing state back to
the initial state, solve the steady state of the closed chain, and read the
MTTF, per-state holding times and absorption probabilities off it.
"""

from .analysis import (AnalysisReport, absorption_probabilities, analyze, availability,
                       holding_times, mttf_from_availability, mttr)
from .augment import AugmentedModel, augment_with_repairs
from .errors import (CtmcError, DegenerateAvailability, ModelSyntaxError,
                     ModelValidationError, NumericalError, OracleFailure, SolverFailure)
from .model import (CtmcModel, RateMatrix, StateClassification, Transition, classify_states,
                    dump_model, generator_matrix, parse_model)
from .oracle import McEstimate, fundamental_matrix_mttf, monte_carlo_mttf
from .solve import SteadyState, balance_residual, steady_state

__all__ = [
    "AnalysisReport", "AugmentedModel", "CtmcError", "CtmcModel", "DegenerateAvailability",
    "McEstimate", "ModelSyntaxError", "ModelValidationError", "NumericalError",
    "OracleFailure", "RateMatrix", "SolverFailure", "StateClassification", "SteadyState",
    "Transition", "absorption_probabilities", "analyze", "augment_with_repairs",
    "availability", "balance_residual", "classify_states", "dump_model",
    "fundamental_matrix_mttf", "generator_matrix", "holding_times", "monte_carlo_mttf",
    "mttf_from_availability", "mttr", "parse_model", "steady_state",
]
