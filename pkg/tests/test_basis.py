import random

import mpmath
import pytest
from gmpy2 import mpfr, mpq

from tfspectral.basis import (
    eval_gegenbauer,
    eval_gegenbauer_closed,
    eval_gegenbauer_derivative,
    gegenbauer_norm,
    gegenbauer_roots,
    gegenbauer_table,
)
from tfspectral.errors import DomainError
from tfspectral.numeric import Precision, to_big

HALF = mpfr(1) / 2
ORDERS = ["1/2", "1", "3/2"]


def legendre(n, t):
    p0, p1 = mpfr(1), t
    if n == 0:
        return p0
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * t * p1 - k * p0) / (k + 1)
    return p1


def sample_ts(count, seed=7):
    rng = random.Random(seed)
    return [mpfr(rng.uniform(-1, 1)) for _ in range(count)]


def test_low_degree_values(d50):
    t = to_big("0.3")
    assert eval_gegenbauer("3/5", 0, t) == 1
    assert eval_gegenbauer(HALF, 1, t) == t
    assert eval_gegenbauer(HALF, 2, mpfr(1)) == 1
    assert abs(eval_gegenbauer_closed(HALF, 2, t) - (3 * t * t - 1) / 2) <= d50.eps(2)
    a = to_big("0.7")
    assert abs(eval_gegenbauer_closed(a, 1, t) - 2 * a * t) <= d50.eps(2)
    assert eval_gegenbauer_closed(HALF, 3, mpfr(0)) == 0


def test_order_domain():
    with pytest.raises(DomainError):
        eval_gegenbauer("-1/2", 3, mpfr(0))


@pytest.mark.parametrize("a", ORDERS)
def test_recurrence_matches_closed_form(d50, a):
    for n in range(16):
        for t in sample_ts(20, seed=n):
            rec = eval_gegenbauer(a, n, t)
            closed = eval_gegenbauer_closed(a, n, t)
            assert abs(rec - closed) <= d50.eps(10) * (1 + abs(rec))


def test_legendre_oracle(d50):
    for n in (0, 1, 2, 5, 17, 40, 90):
        for t in sample_ts(10, seed=n):
            assert abs(eval_gegenbauer(HALF, n, t) - legendre(n, t)) <= d50.eps(10)


def test_mpmath_oracle(d50):
    mpmath.mp.dps = 50
    for a in ("1/3", "2"):
        for n in (3, 11):
            t = to_big("0.41")
            ref = mpmath.gegenbauer(n, mpmath.mpf(mpq(a).numerator) / mpq(a).denominator, "0.41")
            assert abs(eval_gegenbauer(a, n, t) - mpfr(str(ref))) <= d50.eps(10) * (1 + abs(mpfr(str(ref))))


@pytest.mark.parametrize("a", ORDERS)
def test_orthogonality_by_quadrature(d50, a):
    mpmath.mp.dps = 40
    am = mpmath.mpf(mpq(a).numerator) / mpq(a).denominator
    tol = mpfr(10) ** (-25)
    for n in range(0, 11, 2):
        for m in (n, n + 1, n + 3):
            if m > 10:
                continue

            def integrand(t):
                tt = mpfr(str(t))
                return mpmath.mpf(str(eval_gegenbauer(a, n, tt) * eval_gegenbauer(a, m, tt))) * (
                    1 - t * t
                ) ** (am - mpmath.mpf(1) / 2)

            value = mpfr(str(mpmath.quad(integrand, [-1, 0, 1])))
            expected = gegenbauer_norm(a, n) if n == m else 0
            assert abs(value - expected) <= tol * (1 + abs(expected))


def test_derivative_examples(d50):
    t = to_big("0.4")
    a = to_big("0.8")
    assert eval_gegenbauer_derivative(a, 0, t, 1) == 0
    assert eval_gegenbauer_derivative(a, 1, t, 1) == 2 * a
    assert abs(eval_gegenbauer_derivative(HALF, 2, t, 1) - to_big("1.2")) <= d50.eps(2)


@pytest.mark.parametrize("a", ORDERS)
def test_derivatives_match_finite_differences(d50, a):
    h = mpfr(10) ** (-50 // 3)
    tol = mpfr(10) ** (-50 // 3 + 2)
    for n in (1, 4, 9, 20):
        for t in sample_ts(5, seed=n):
            f = lambda s: eval_gegenbauer(a, n, s)
            d1 = (f(t + h) - f(t - h)) / (2 * h)
            d2 = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h)
            g1 = eval_gegenbauer_derivative(a, n, t, 1)
            g2 = eval_gegenbauer_derivative(a, n, t, 2)
            assert abs(d1 - g1) <= tol * (1 + abs(g1))
            # second difference loses twice the digits
            assert abs(d2 - g2) <= mpfr(10) ** (-8) * (1 + abs(g2))


def test_table_agrees_with_single_evaluations(d50):
    t = to_big("-0.77")
    vals, d1, d2 = gegenbauer_table("1", 12, t, kmax=2)
    for n in range(12):
        assert vals[n] == eval_gegenbauer("1", n, t)
        assert d1[n] == eval_gegenbauer_derivative("1", n, t, 1)
        assert d2[n] == eval_gegenbauer_derivative("1", n, t, 2)


def test_roots_small_degrees(d50):
    prec = Precision(50)
    assert gegenbauer_roots(HALF, 1, prec) == [0]
    lo, hi = gegenbauer_roots(HALF, 2, prec)
    r = 1 / mpfr(3) ** HALF
    assert abs(lo + r) <= d50.eps(2) and abs(hi - r) <= d50.eps(2)
    five = gegenbauer_roots(HALF, 5, prec)
    assert abs(five[2]) <= d50.eps(5)
    assert abs(sum(five)) <= d50.eps(5)


@pytest.mark.parametrize("a", ["1/2", "1", "3/2", "1/5"])
def test_roots_are_roots_and_interlace(d50, a):
    prec = Precision(50)
    prev = None
    for n in (6, 7, 30, 31):
        roots = gegenbauer_roots(a, n, prec)
        assert len(roots) == n
        assert all(x < y for x, y in zip(roots, roots[1:]))
        scale = max(abs(v) for v in gegenbauer_table(a, n + 1, mpfr(1))[0])
        for r in roots:
            assert abs(eval_gegenbauer(a, n, r)) <= d50.eps(5) * max(1, scale)
        if prev is not None and len(prev) == n - 1:
            for i, p in enumerate(prev):
                assert roots[i] < p < roots[i + 1]
        prev = roots


def test_roots_need_positive_degree():
    with pytest.raises(DomainError):
        gegenbauer_roots(HALF, 0, Precision(40))
