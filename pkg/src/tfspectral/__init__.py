"""FRG spectral collocation solvers for the Thomas-Fermi equation."""

from .errors import (
    DomainError,
    NonPhysicalIterate,
    RootRefinementError,
    ShapeError,
    SingularMatrixError,
)
from .frg import FrgBasis, collocation_nodes
from .numeric import Precision, working_precision
from .solver_post import PostNewtonConfig, solve_post_newton
from .solver_pre import PreNewtonConfig, SolveReport, solve_pre_newton
from .tfmodel import SeriesApproximant, eval_series, initial_slope, tf_residual

__all__ = [
    "DomainError",
    "FrgBasis",
    "NonPhysicalIterate",
    "PostNewtonConfig",
    "PreNewtonConfig",
    "Precision",
    "RootRefinementError",
    "SeriesApproximant",
    "ShapeError",
    "SingularMatrixError",
    "SolveReport",
    "collocation_nodes",
    "eval_series",
    "initial_slope",
    "solve_post_newton",
    "solve_pre_newton",
    "tf_residual",
    "working_precision",
]
