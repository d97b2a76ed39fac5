"""Linearize-then-collocate: Newton-Kantorovich iteration for the TF equation.

Each step solves the linear boundary-value problem

    sqrt(x) y'' - (3/2) y_i**(1/2) y = -(1/2) y_i**(3/2),  y(0) = 1,  y(X) = 0

by FRG collocation, starting from ``y_0 = 1``.  The linear problem is
collocated from scratch every iteration, since its coefficients change with
``y_i``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .errors import NonPhysicalIterate
from .frg import FrgBasis, collocation_nodes
from .linalg import lu_factor, lu_solve
from .numeric import Precision, to_big, to_rational, working_precision
from .tfmodel import (
    SeriesApproximant,
    max_norm,
    power_three_halves,
    resolve_boundary,
    sum_squares,
    trial_table,
)

MAX_HALVINGS = 10


NEGATIVE_POLICIES = ("extend", "raise")


@dataclass(frozen=True)
class IterationRecord:
    step_norm: mpfr
    residual_sq_norm: mpfr
    wall_seconds: float
    damping: mpfr
    extended: bool = False


@dataclass
class SolveReport:
    """Result of either solver.

    ``residual_sq_norm`` in each record is ``||F||_2**2`` at the iterate the
    step produced, with ``F`` the collocated residual vector (interior scaled
    residuals and the boundary value).
    """

    solution: SeriesApproximant
    iterations_run: int
    per_iteration: list[IterationRecord]
    converged: bool
    initial_residual_sq_norm: mpfr
    boundary_point: mpfr
    method: str

    @property
    def wall_seconds(self) -> float:
        return sum(r.wall_seconds for r in self.per_iteration)


@dataclass
class PreNewtonConfig:
    basis: FrgBasis
    precision: Precision = None
    max_iterations: int = 40
    step_tolerance: object = None
    relaxation: object = 1
    boundary_point: object = None
    negative_policy: str = "extend"

    def __post_init__(self):
        if self.precision is None:
            self.precision = Precision.default_for(self.basis.N)
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        theta = to_rational(self.relaxation)
        if not 0 < theta <= 1:
            raise ValueError("relaxation must lie in (0, 1]")
        self.relaxation = theta
        if self.step_tolerance is not None and not to_rational(self.step_tolerance) > 0:
            raise ValueError("step_tolerance must be positive")
        if self.negative_policy not in NEGATIVE_POLICIES:
            raise ValueError(f"unknown negative policy {self.negative_policy!r}")

    def tolerance(self) -> mpfr:
        if self.step_tolerance is None:
            return self.precision.eps(10)
        return to_big(str(self.step_tolerance))


def _linear_rows(prev: SeriesApproximant, x, extend: bool):
    tab = trial_table(prev.basis, x, kmax=2)
    y = 1 + gmpy2.fsum([c * v for c, v in zip(prev.coeffs, tab[0])])
    if y < 0 and not extend:
        raise NonPhysicalIterate(x, y)
    return tab, y


def _assemble(prev: SeriesApproximant, cfg: PreNewtonConfig, extend: bool = False):
    basis = prev.basis
    n = basis.N
    nodes = collocation_nodes(basis, cfg.precision)
    xb = resolve_boundary(basis, cfg.precision, cfg.boundary_point)
    M = np.empty((n, n), dtype=object)
    rhs = np.empty(n, dtype=object)
    values = np.empty((n - 1, n), dtype=object)
    second = np.empty((n - 1, n), dtype=object)
    sqrt_x = np.empty(n - 1, dtype=object)
    for i, x in enumerate(nodes[:-1]):
        tab, y = _linear_rows(prev, x, extend)
        root_y = gmpy2.sqrt(abs(y))
        sx = gmpy2.sqrt(x)
        values[i] = tab[0]
        second[i] = tab[2]
        sqrt_x[i] = sx
        c = 3 * root_y / 2
        M[i] = [sx * d2 - c * v for v, d2 in zip(tab[0], tab[2])]
        rhs[i] = c - y * root_y / 2
    M[n - 1] = trial_table(basis, xb)[0]
    rhs[n - 1] = mpfr(-1)
    return M, rhs, (nodes[:-1], sqrt_x, values, second, M[n - 1])


def assemble_linear_system(prev: SeriesApproximant, cfg: PreNewtonConfig):
    """Collocation matrix and right-hand side for the next linear iterate.

    Rows ``0 .. N-2`` collocate the linearized equation at the ``N - 1``
    smallest nodes; row ``N - 1`` imposes ``y(boundary_point) = 0``.
    """
    with working_precision(cfg.precision):
        M, rhs, _ = _assemble(prev, cfg)
    return M, rhs


def _residual(rows, coeffs, extend: bool = False):
    nodes, sqrt_x, values, second, brow = rows
    y = 1 + values.dot(coeffs)
    ypp = second.dot(coeffs)
    out = np.empty(len(coeffs), dtype=object)
    for i, (x, yi) in enumerate(zip(nodes, y)):
        if yi < 0 and not extend:
            raise NonPhysicalIterate(x, yi)
        out[i] = sqrt_x[i] * ypp[i] - power_three_halves(yi, extend=True)
    out[-1] = 1 + brow.dot(coeffs)
    return out


def solve_pre_newton(cfg: PreNewtonConfig, initial: SeriesApproximant | None = None) -> SolveReport:
    """Run the quasilinearization from ``y_0 = 1`` (or ``initial``).

    Stops after ``max_iterations`` or once the coefficient step drops below
    the step tolerance.  A step that would make ``y`` negative on a node is
    relaxed by halving, at most ten times.  If that is not enough, the
    ``raise`` policy gives up; the default ``extend`` policy continues with
    the odd extension ``y |y|**(1/2)`` of the power for the rest of the solve.
    """
    basis = cfg.basis
    with working_precision(cfg.precision):
        current = initial if initial is not None else SeriesApproximant.constant(basis, 0)
        coeffs = current.vector()
        tol = cfg.tolerance()
        records = []
        converged = False
        extend = False
        initial_sq = None
        xb = resolve_boundary(basis, cfg.precision, cfg.boundary_point)
        for _ in range(cfg.max_iterations):
            start = time.perf_counter()
            try:
                M, rhs, rows = _assemble(current, cfg, extend)
            except NonPhysicalIterate:
                # only reachable from a caller-supplied initial guess
                if cfg.negative_policy == "raise":
                    raise
                extend = True
                M, rhs, rows = _assemble(current, cfg, extend)
            if initial_sq is None:
                initial_sq = sum_squares(_residual(rows, coeffs, extend))
            target = lu_solve(lu_factor(M), rhs)
            candidate, resid, theta, extend = _relaxed_step(cfg, rows, coeffs, target, extend)
            step = max_norm(candidate - coeffs)
            coeffs = candidate
            current = SeriesApproximant(basis, tuple(coeffs))
            records.append(
                IterationRecord(step, sum_squares(resid), time.perf_counter() - start, theta, extend)
            )
            if step < tol:
                converged = True
                break
        if initial_sq is None:
            initial_sq = _initial_residual(current, cfg)
        return SolveReport(
            solution=current,
            iterations_run=len(records),
            per_iteration=records,
            converged=converged,
            initial_residual_sq_norm=initial_sq,
            boundary_point=xb,
            method="pre",
        )


def _relaxed_step(cfg, rows, coeffs, target, extend):
    theta = mpfr(cfg.relaxation)
    if not extend:
        for _ in range(MAX_HALVINGS + 1):
            candidate = coeffs + theta * (target - coeffs)
            try:
                return candidate, _residual(rows, candidate), theta, False
            except NonPhysicalIterate as exc:
                failure = exc
                theta /= 2
        if cfg.negative_policy == "raise":
            raise failure
        theta = mpfr(cfg.relaxation)
    candidate = coeffs + theta * (target - coeffs)
    return candidate, _residual(rows, candidate, True), theta, True


def _initial_residual(current, cfg):
    _, _, rows = _assemble(current, cfg, extend=True)
    return sum_squares(_residual(rows, current.vector(), extend=True))
