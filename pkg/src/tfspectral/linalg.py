"""Dense LU with partial pivoting over mpfr.

Matrices and vectors are numpy object arrays holding mpfr entries; numpy
only supplies the slicing and broadcasting, every product and sum is done by
gmpy2 at the ambient precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpfr

from .errors import ShapeError, SingularMatrixError
from .numeric import current_digits


def as_matrix(rows) -> np.ndarray:
    """Object array of mpfr from nested sequences (ints, strings, mpfr)."""
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D array, got {arr.ndim}-D")
    return np.vectorize(mpfr, otypes=[object])(arr)


def as_vector(values) -> np.ndarray:
    arr = np.array(values, dtype=object)
    if arr.ndim != 1:
        raise ShapeError(f"expected a 1-D array, got {arr.ndim}-D")
    return np.vectorize(mpfr, otypes=[object])(arr)


def identity(n: int) -> np.ndarray:
    out = np.full((n, n), mpfr(0), dtype=object)
    for i in range(n):
        out[i, i] = mpfr(1)
    return out


def max_abs(values) -> mpfr:
    return max((abs(v) for v in np.ravel(values)), default=mpfr(0))


@dataclass(frozen=True)
class LuFactors:
    """Packed ``L\\U`` (unit lower triangle implied) and the row order used.

    ``pivots[i]`` is the original row that ended up in position ``i``, so
    ``A[pivots] == L @ U``.
    """

    lu: np.ndarray
    pivots: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def unpack(self):
        n = self.n
        L = identity(n)
        U = np.full((n, n), mpfr(0), dtype=object)
        for i in range(n):
            L[i, :i] = self.lu[i, :i]
            U[i, i:] = self.lu[i, i:]
        return L, U


def lu_factor(A, digits: int | None = None) -> LuFactors:
    """Partial-pivoted LU.

    The pivot is the largest-magnitude candidate, lowest row index on ties.
    A column whose best candidate is below ``10**(10 - D)`` times the largest
    entry of ``A`` is reported as singular.
    """
    A = np.asarray(A, dtype=object)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"lu_factor needs a square matrix, got shape {A.shape}")
    n = A.shape[0]
    digits = current_digits() if digits is None else digits
    lu = A.copy()
    scale = max_abs(lu)
    threshold = scale * mpfr(10) ** (10 - digits)
    perm = list(range(n))
    for k in range(n):
        col = [abs(v) for v in lu[k:, k]]
        p = k + max(range(len(col)), key=col.__getitem__)
        if scale == 0 or col[p - k] <= threshold:
            raise SingularMatrixError(f"no usable pivot in column {k}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[k], perm[p] = perm[p], perm[k]
        if k + 1 < n:
            mult = lu[k + 1 :, k] / lu[k, k]
            lu[k + 1 :, k] = mult
            lu[k + 1 :, k + 1 :] -= np.multiply.outer(mult, lu[k, k + 1 :])
    return LuFactors(lu, tuple(perm))


def lu_solve(factors: LuFactors, b) -> np.ndarray:
    b = np.asarray(b, dtype=object)
    n = factors.n
    if b.shape != (n,):
        raise ShapeError(f"right-hand side has shape {b.shape}, expected ({n},)")
    lu = factors.lu
    y = b[list(factors.pivots)].copy()
    for i in range(1, n):
        y[i] = y[i] - np.dot(lu[i, :i], y[:i])
    x = np.empty(n, dtype=object)
    for i in range(n - 1, -1, -1):
        acc = y[i] - np.dot(lu[i, i + 1 :], x[i + 1 :]) if i + 1 < n else y[i]
        x[i] = acc / lu[i, i]
    return x


def solve(A, b, refine: int = 0) -> np.ndarray:
    """Solve ``A x = b``; ``refine`` rounds of iterative refinement are optional."""
    A = np.asarray(A, dtype=object)
    factors = lu_factor(A)
    x = lu_solve(factors, b)
    for _ in range(refine):
        r = np.asarray(b, dtype=object) - A.dot(x)
        x = x + lu_solve(factors, r)
    return x
