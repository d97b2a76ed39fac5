import random

import numpy as np
import pytest
from gmpy2 import mpfr

from tfspectral.errors import ShapeError, SingularMatrixError
from tfspectral.linalg import as_matrix, as_vector, identity, lu_factor, lu_solve, max_abs, solve


def random_matrix(n, seed):
    rng = random.Random(seed)
    A = as_matrix([[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)])
    for i in range(n):
        A[i, i] += n  # diagonally dominant, well conditioned
    return A


def reconstruct(factors):
    L, U = factors.unpack()
    return L.dot(U)


def test_identity(d50):
    f = lu_factor(identity(3))
    assert f.pivots == (0, 1, 2)
    L, U = f.unpack()
    assert (L == identity(3)).all() and (U == identity(3)).all()


def test_permutation(d50):
    f = lu_factor(as_matrix([[0, 1], [1, 0]]))
    assert f.pivots == (1, 0)
    L, U = f.unpack()
    assert (L == identity(2)).all() and (U == identity(2)).all()


def test_two_by_two_by_hand(d50):
    A = as_matrix([[4, 3], [6, 3]])
    f = lu_factor(A)
    assert f.pivots == (1, 0)
    L, U = f.unpack()
    # [6 3; 4 3] = [1 0; 2/3 1] [6 3; 0 1]
    assert abs(L[1, 0] - mpfr(2) / 3) <= d50.eps(10)
    assert U[0, 0] == 6 and U[0, 1] == 3
    assert abs(U[1, 1] - 1) <= d50.eps(10)
    assert max_abs(reconstruct(f) - A[list(f.pivots)]) <= d50.eps(10)


def test_ties_pick_lowest_row(d50):
    f = lu_factor(as_matrix([[1, 2, 0], [-3, 1, 1], [3, 0, 2]]))
    assert f.pivots[0] == 1


@pytest.mark.parametrize("n", [5, 20, 50])
def test_reconstruction(d50, n):
    A = random_matrix(n, n)
    f = lu_factor(A)
    assert max_abs(reconstruct(f) - A[list(f.pivots)]) <= d50.eps(10) * max_abs(A)


def test_solve_examples(d50):
    b = as_vector([1, -2, 3])
    assert (lu_solve(lu_factor(identity(3)), b) == b).all()
    x = lu_solve(lu_factor(as_matrix([[2, 0], [0, 4]])), as_vector([2, 8]))
    assert list(x) == [1, 2]


@pytest.mark.parametrize("seed", range(3))
def test_solve_round_trip(d50, seed):
    A = random_matrix(10, 100 + seed)
    rng = random.Random(seed)
    v = as_vector([rng.uniform(-5, 5) for _ in range(10)])
    x = lu_solve(lu_factor(A), A.dot(v))
    assert max_abs(x - v) <= d50.eps(10) * max_abs(v)
    r = A.dot(x) - A.dot(v)
    assert max_abs(r) <= d50.eps(10) * max_abs(A) * max_abs(x)


def test_forward_error_tracks_condition(d50):
    # Hilbert matrix of order 8 has condition number about 1.5e10.
    n = 8
    H = as_matrix([[mpfr(1) / (i + j + 1) for j in range(n)] for i in range(n)])
    v = as_vector(range(1, n + 1))
    x = solve(H, H.dot(v))
    kappa = mpfr("1.6e10")
    assert max_abs(x - v) <= kappa * d50.eps(10) * max_abs(v)


def test_refinement_toggle(d50):
    A = random_matrix(6, 1)
    b = as_vector([1, 2, 3, 4, 5, 6])
    assert max_abs(solve(A, b, refine=2) - solve(A, b)) <= d50.eps(10)


def test_deterministic_pivots(d50):
    A = random_matrix(12, 5)
    A[:, 0] = A[::-1, 0]
    assert lu_factor(A).pivots == lu_factor(A.copy()).pivots


def test_singular(d50):
    with pytest.raises(SingularMatrixError):
        lu_factor(as_matrix([[1, 2], [2, 4]]))
    with pytest.raises(SingularMatrixError):
        lu_factor(as_matrix([[0, 0], [0, 0]]))


def test_shapes(d50):
    with pytest.raises(ShapeError):
        lu_factor(as_matrix([[1, 2, 3], [4, 5, 6]]))
    with pytest.raises(ShapeError):
        lu_solve(lu_factor(identity(3)), as_vector([1, 2]))
    with pytest.raises(ShapeError):
        as_vector(np.zeros((2, 2)))
