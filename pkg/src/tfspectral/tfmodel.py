"""Thomas-Fermi problem ``y'' = y**(3/2) / sqrt(x)``, ``y(0) = 1``, ``y(inf) = 0``.

Both solvers share the trial form ``y_N(x) = 1 + x * sum_j a_j FRG_j(x)``,
which satisfies ``y(0) = 1`` for any coefficients.  Residuals are reported in
the ``sqrt(x)``-scaled form ``sqrt(x) y'' - y**(3/2)``, bounded as ``x -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .errors import DomainError, NonPhysicalIterate
from .frg import FrgBasis, collocation_nodes, frg_table
from .numeric import Precision, pi, to_big


@dataclass(frozen=True)
class SeriesApproximant:
    basis: FrgBasis
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(c if isinstance(c, type(mpfr())) else to_big(c) for c in self.coeffs)
        if len(coeffs) != self.basis.N:
            raise ValueError(f"expected {self.basis.N} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, basis: FrgBasis, value=0) -> "SeriesApproximant":
        return cls(basis, (mpfr(value),) * basis.N)

    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=object)


def trial_table(basis: FrgBasis, x, kmax: int = 0):
    """``d^k/dx^k [x FRG_j(x)]`` for every ``j < N`` and ``k <= kmax``."""
    x = x if isinstance(x, type(mpfr())) else to_big(x)
    f = frg_table(basis, x, kmax=kmax)
    out = [[x * v for v in f[0]]]
    if kmax >= 1:
        out.append([v + x * d for v, d in zip(f[0], f[1])])
    if kmax >= 2:
        out.append([2 * d + x * d2 for d, d2 in zip(f[1], f[2])])
    return out


def eval_series(s: SeriesApproximant, x, k: int = 0) -> mpfr:
    """``y_N``, ``y_N'`` or ``y_N''`` at ``x``."""
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    x = x if isinstance(x, type(mpfr())) else to_big(x)
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    if x == 0:
        if k:
            raise DomainError("derivatives at x = 0 are limits; use initial_slope")
        return mpfr(1)
    col = trial_table(s.basis, x, kmax=k)[k]
    total = gmpy2.fsum([c * v for c, v in zip(s.coeffs, col)])
    return 1 + total if k == 0 else total


def initial_slope(s: SeriesApproximant) -> mpfr:
    """``y'(0) = sum_j a_j G_j(-1)``; the ``x FRG_j'`` term vanishes like ``x**alpha``."""
    g = frg_table(s.basis, mpfr(0))[0]
    return gmpy2.fsum([c * v for c, v in zip(s.coeffs, g)])


def power_three_halves(y, extend: bool = False) -> mpfr:
    """``y**(3/2)``; with ``extend`` the odd extension ``y |y|**(1/2)`` for ``y < 0``."""
    if y < 0:
        if not extend:
            raise NonPhysicalIterate(mpfr("nan"), y)
        return y * gmpy2.sqrt(-y)
    return y * gmpy2.sqrt(y)


def tf_residual(s: SeriesApproximant, x, extend: bool = False) -> mpfr:
    """``sqrt(x) y_N''(x) - y_N(x)**(3/2)`` at ``x > 0``.

    Raises :class:`NonPhysicalIterate` where ``y_N < 0`` unless ``extend``
    selects the odd extension of the power.
    """
    x = x if isinstance(x, type(mpfr())) else to_big(x)
    if not x > 0:
        raise DomainError("residual is evaluated at x > 0")
    tab = trial_table(s.basis, x, kmax=2)
    y = 1 + gmpy2.fsum([c * v for c, v in zip(s.coeffs, tab[0])])
    if y < 0 and not extend:
        raise NonPhysicalIterate(x, y)
    ypp = gmpy2.fsum([c * v for c, v in zip(s.coeffs, tab[2])])
    return gmpy2.sqrt(x) * ypp - power_three_halves(y, extend)


@dataclass(frozen=True)
class BakerSeries:
    """Expansion of the solution about the origin, parameterized by ``y'(0)``."""

    lam: mpfr
    order: int = 6

    def __post_init__(self):
        if not self.lam < 0:
            raise ValueError("the initial slope must be negative")
        if not 1 <= self.order <= 6:
            raise ValueError("only the first six terms are available")


def baker_eval(b: BakerSeries, x) -> mpfr:
    x = x if isinstance(x, type(mpfr())) else to_big(x)
    if x < 0:
        raise DomainError("Baker series is defined for x >= 0")
    lam = b.lam
    r = gmpy2.sqrt(x)
    terms = [
        mpfr(1),
        lam * x,
        mpfr(4) / 3 * x * r,
        2 * lam / 5 * x * x * r,
        x ** 3 / 3,
        3 * lam * lam / 70 * x ** 3 * r,
    ]
    return gmpy2.fsum(terms[: b.order])


def neutral_atom_energy(Z, lam) -> mpfr:
    """``(6/7) (4 pi / 3)**(2/3) Z**(7/3) y'(0)``."""
    Z = Z if isinstance(Z, type(mpfr())) else to_big(Z)
    if not Z > 0:
        raise DomainError("nuclear charge must be positive")
    lam = lam if isinstance(lam, type(mpfr())) else to_big(lam)
    return mpfr(6) / 7 * (4 * pi() / 3) ** (mpfr(2) / 3) * Z ** (mpfr(7) / 3) * lam


@dataclass(frozen=True)
class CollocationGrid:
    """Trial-function values on the interior nodes plus the boundary row.

    Interior rows are the ``N - 1`` smallest collocation nodes; the decay
    condition is imposed as ``y(boundary_point) = 0``.
    """

    basis: FrgBasis
    interior: tuple
    boundary_point: mpfr
    sqrt_x: np.ndarray
    values: np.ndarray
    second: np.ndarray
    boundary_row: np.ndarray


def resolve_boundary(basis: FrgBasis, prec: Precision, boundary_point=None) -> mpfr:
    if boundary_point is None:
        return collocation_nodes(basis, prec)[-1]
    point = boundary_point if isinstance(boundary_point, type(mpfr())) else to_big(boundary_point)
    if not point > 0:
        raise ValueError("boundary point must be positive")
    return point


def collocation_grid(basis: FrgBasis, prec: Precision, boundary_point=None) -> CollocationGrid:
    """Evaluate the trial functions once on every collocation row (ambient precision)."""
    nodes = collocation_nodes(basis, prec)
    interior = tuple(nodes[:-1])
    xb = resolve_boundary(basis, prec, boundary_point)
    n = basis.N
    values = np.empty((n - 1, n), dtype=object)
    second = np.empty((n - 1, n), dtype=object)
    for i, x in enumerate(interior):
        tab = trial_table(basis, x, kmax=2)
        values[i] = tab[0]
        second[i] = tab[2]
    return CollocationGrid(
        basis=basis,
        interior=interior,
        boundary_point=xb,
        sqrt_x=np.array([gmpy2.sqrt(x) for x in interior], dtype=object),
        values=values,
        second=second,
        boundary_row=np.array(trial_table(basis, xb)[0], dtype=object),
    )


def interior_values(grid: CollocationGrid, coeffs):
    """``(y, y'')`` on the interior nodes for coefficient vector ``coeffs``."""
    coeffs = np.asarray(coeffs, dtype=object)
    y = 1 + grid.values.dot(coeffs) if len(grid.interior) else np.empty(0, dtype=object)
    ypp = grid.second.dot(coeffs) if len(grid.interior) else np.empty(0, dtype=object)
    return y, ypp


def check_physical(grid: CollocationGrid, y) -> None:
    for x, v in zip(grid.interior, y):
        if v < 0:
            raise NonPhysicalIterate(x, v)


def collocation_residual(grid: CollocationGrid, coeffs, extend: bool = False) -> np.ndarray:
    """``F(A)``: scaled residuals on interior nodes, then ``y(boundary_point)``."""
    coeffs = np.asarray(coeffs, dtype=object)
    y, ypp = interior_values(grid, coeffs)
    if not extend:
        check_physical(grid, y)
    out = np.empty(grid.basis.N, dtype=object)
    for i, (r, yi, ri) in enumerate(zip(grid.sqrt_x, y, ypp)):
        out[i] = r * ri - power_three_halves(yi, extend=True)
    out[-1] = 1 + grid.boundary_row.dot(coeffs)
    return out


def sum_squares(values) -> mpfr:
    return gmpy2.fsum([v * v for v in values])


def max_norm(values) -> mpfr:
    return max((abs(v) for v in values), default=mpfr(0))


