"""Collocate-then-solve: classical Newton on the collocated TF system ``F(A) = 0``."""

from __future__ import annotations

import time
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .errors import NonPhysicalIterate
from .frg import FrgBasis
from .linalg import lu_factor, lu_solve
from .numeric import Precision, to_big, to_rational, working_precision
from .solver_pre import MAX_HALVINGS, NEGATIVE_POLICIES, IterationRecord, SolveReport
from .tfmodel import (
    CollocationGrid,
    SeriesApproximant,
    check_physical,
    collocation_grid,
    collocation_residual,
    interior_values,
    max_norm,
    sum_squares,
)

JACOBIAN_MODES = ("analytic", "finite_difference")


@dataclass
class PostNewtonConfig:
    basis: FrgBasis
    precision: Precision = None
    max_iterations: int = 85
    step_tolerance: object = None
    damping: object = 1
    boundary_point: object = None
    jacobian_mode: str = "analytic"
    negative_policy: str = "extend"

    def __post_init__(self):
        if self.precision is None:
            self.precision = Precision.default_for(self.basis.N)
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        theta = to_rational(self.damping)
        if not 0 < theta <= 1:
            raise ValueError("damping must lie in (0, 1]")
        self.damping = theta
        if self.step_tolerance is not None and not to_rational(self.step_tolerance) > 0:
            raise ValueError("step_tolerance must be positive")
        if self.jacobian_mode not in JACOBIAN_MODES:
            raise ValueError(f"unknown jacobian mode {self.jacobian_mode!r}")
        if self.negative_policy not in NEGATIVE_POLICIES:
            raise ValueError(f"unknown negative policy {self.negative_policy!r}")

    def tolerance(self) -> mpfr:
        if self.step_tolerance is None:
            return self.precision.eps(10)
        return to_big(str(self.step_tolerance))

    def grid(self) -> CollocationGrid:
        return collocation_grid(self.basis, self.precision, self.boundary_point)


def _coeffs(A):
    if isinstance(A, SeriesApproximant):
        return A.vector()
    return np.asarray(A, dtype=object)


def residual_vector(A, cfg: PostNewtonConfig, grid: CollocationGrid | None = None,
                    extend: bool = False) -> np.ndarray:
    """``F_i = Res(x_i)`` on the ``N - 1`` smallest nodes and ``F_{N-1} = y(X_bc)``."""
    with working_precision(cfg.precision):
        grid = grid or cfg.grid()
        return collocation_residual(grid, _coeffs(A), extend)


def _analytic_jacobian(grid: CollocationGrid, coeffs, extend: bool = False) -> np.ndarray:
    n = grid.basis.N
    y, _ = interior_values(grid, coeffs)
    if not extend:
        check_physical(grid, y)
    J = np.empty((n, n), dtype=object)
    if n > 1:
        c = np.array([3 * gmpy2.sqrt(abs(v)) / 2 for v in y], dtype=object)
        J[:-1] = grid.sqrt_x[:, None] * grid.second - c[:, None] * grid.values
    J[-1] = grid.boundary_row
    return J


def _fd_jacobian(grid: CollocationGrid, coeffs, digits: int, extend: bool = False) -> np.ndarray:
    n = grid.basis.N
    h = mpfr(10) ** (-(digits // 2))
    base = collocation_residual(grid, coeffs, extend)
    J = np.empty((n, n), dtype=object)
    for j in range(n):
        shifted = coeffs.copy()
        shifted[j] = shifted[j] + h
        J[:, j] = (collocation_residual(grid, shifted, extend) - base) / h
    return J


def jacobian(A, cfg: PostNewtonConfig, grid: CollocationGrid | None = None,
             extend: bool = False) -> np.ndarray:
    """``dF_i/da_j``.

    Interior rows are ``sqrt(x_i) B_j''(x_i) - (3/2) y(x_i)**(1/2) B_j(x_i)``
    with ``B_j = x FRG_j``; the boundary row is ``B_j(X_bc)``.
    """
    with working_precision(cfg.precision):
        grid = grid or cfg.grid()
        coeffs = _coeffs(A)
        if cfg.jacobian_mode == "analytic":
            return _analytic_jacobian(grid, coeffs, extend)
        return _fd_jacobian(grid, coeffs, cfg.precision.decimal_digits, extend)


def solve_post_newton(cfg: PostNewtonConfig, initial: SeriesApproximant | None = None) -> SolveReport:
    """Newton from the all-ones coefficient vector (or ``initial``).

    ``J delta = F``, ``A <- A - theta delta``, with the LU refactorized each
    iteration.  ``theta`` starts at ``cfg.damping`` and is halved (at most ten
    times) only when the trial iterate goes negative on a node; past that the
    negative policy decides, as in the pre-Newton solver.
    """
    basis = cfg.basis
    with working_precision(cfg.precision):
        start = time.perf_counter()
        grid = cfg.grid()
        setup = time.perf_counter() - start
        coeffs = (initial or SeriesApproximant.constant(basis, 1)).vector()
        extend = False
        try:
            F = collocation_residual(grid, coeffs)
        except NonPhysicalIterate:
            if cfg.negative_policy == "raise":
                raise
            extend = True
            F = collocation_residual(grid, coeffs, extend)
        initial_sq = sum_squares(F)
        tol = cfg.tolerance()
        records = []
        converged = False
        for it in range(cfg.max_iterations):
            start = time.perf_counter()
            if cfg.jacobian_mode == "analytic":
                J = _analytic_jacobian(grid, coeffs, extend)
            else:
                J = _fd_jacobian(grid, coeffs, cfg.precision.decimal_digits, extend)
            delta = lu_solve(lu_factor(J), F)
            theta, F_new, extend = _damped_step(cfg, grid, coeffs, delta, extend)
            candidate = coeffs - theta * delta
            step = max_norm(theta * delta)
            coeffs, F = candidate, F_new
            elapsed = time.perf_counter() - start
            if it == 0:
                elapsed += setup
            records.append(IterationRecord(step, sum_squares(F), elapsed, theta, extend))
            if step < tol:
                converged = True
                break
        return SolveReport(
            solution=SeriesApproximant(basis, tuple(coeffs)),
            iterations_run=len(records),
            per_iteration=records,
            converged=converged,
            initial_residual_sq_norm=initial_sq,
            boundary_point=grid.boundary_point,
            method="post",
        )


def _damped_step(cfg, grid, coeffs, delta, extend):
    theta = mpfr(cfg.damping)
    if not extend:
        for _ in range(MAX_HALVINGS + 1):
            try:
                return theta, collocation_residual(grid, coeffs - theta * delta), False
            except NonPhysicalIterate as exc:
                failure = exc
                theta /= 2
        if cfg.negative_policy == "raise":
            raise failure
        theta = mpfr(cfg.damping)
    return theta, collocation_residual(grid, coeffs - theta * delta, True), True
