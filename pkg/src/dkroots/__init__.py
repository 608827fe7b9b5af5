"""Durand-Kerner polynomial root finding with pluggable initial-radius bounds."""

from .bounds import (
    BoundMethod,
    BoundResult,
    CompanionMatrix,
    PowerIterConfig,
    aberth_bound,
    cauchy_bound,
    companion_matrix,
    dominant_modulus,
    lagrange_bound,
    lambda_max_bound,
    new_bound1,
    radius,
    shift_polynomial,
)
from .metrics import MatchReport, enclosure_check, match_roots
from .poly import (
    PolynomialError,
    RealPolynomial,
    clustered,
    evaluate,
    from_roots,
    random_poly,
    scale_variable,
    wilkinson,
    wilkinson_perturbed,
)
from .solver import SolveOutcome, SolverConfig, Status, dk_step, initial_points, solve

__version__ = "0.1.0"
