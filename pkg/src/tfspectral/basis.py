"""Gegenbauer polynomials on [-1, 1]: values, derivatives and roots."""

from __future__ import annotations

import math
import threading
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr

from .errors import DomainError, RootRefinementError
from .numeric import Precision, gamma, pi, to_big, to_rational, working_precision

_MAX_POLISH_STEPS = 200


def _order(a) -> mpfr:
    a = a if isinstance(a, type(mpfr())) else mpfr(to_rational(a))
    if not a > -0.5:
        raise DomainError(f"Gegenbauer order must exceed -1/2, got {a}")
    return a


def gegenbauer_table(a, count: int, t, kmax: int = 0):
    """Values of ``G_0 .. G_{count-1}`` at ``t`` and up to ``kmax`` derivatives.

    Returns a list of ``kmax + 1`` lists, derivative order first.  The
    derivative recurrences come from differentiating the three-term
    recurrence, so they stay finite at ``t = +-1``.
    """
    a = _order(a)
    t = t if isinstance(t, type(mpfr())) else to_big(t)
    g = [mpfr(0)] * count
    g1 = [mpfr(0)] * count if kmax >= 1 else None
    g2 = [mpfr(0)] * count if kmax >= 2 else None
    if count == 0:
        return [g, g1, g2][: kmax + 1]
    g[0] = mpfr(1)
    if count > 1:
        g[1] = 2 * a * t
        if g1 is not None:
            g1[1] = 2 * a
    for n in range(1, count - 1):
        c1 = 2 * (n + a)
        c2 = n + 2 * a - 1
        g[n + 1] = (c1 * t * g[n] - c2 * g[n - 1]) / (n + 1)
        if g1 is not None:
            g1[n + 1] = (c1 * (g[n] + t * g1[n]) - c2 * g1[n - 1]) / (n + 1)
        if g2 is not None:
            g2[n + 1] = (c1 * (2 * g1[n] + t * g2[n]) - c2 * g2[n - 1]) / (n + 1)
    return [g, g1, g2][: kmax + 1]


def eval_gegenbauer(a, n: int, t) -> mpfr:
    """``G_n^a(t)`` by the three-term recurrence."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    return gegenbauer_table(a, n + 1, t)[0][n]


def eval_gegenbauer_derivative(a, n: int, t, k: int) -> mpfr:
    """``d^k/dt^k G_n^a(t)`` for ``k`` in {1, 2}."""
    if k not in (1, 2):
        raise ValueError("only first and second derivatives are supported")
    if n < 0:
        raise DomainError("degree must be nonnegative")
    return gegenbauer_table(a, n + 1, t, kmax=k)[k][n]


def eval_gegenbauer_closed(a, n: int, t) -> mpfr:
    """Explicit-sum form of ``G_n^a(t)``.

    Cancellation grows factorially with ``n``; meant as a check on the
    recurrence for small degrees.
    """
    a = _order(a)
    t = t if isinstance(t, type(mpfr())) else to_big(t)
    if a == 0:
        raise DomainError("explicit sum is undefined at a = 0")
    total = mpfr(0)
    ga = gamma(a)
    for j in range(n // 2 + 1):
        term = gamma(n + a - j) / (math.factorial(j) * math.factorial(n - 2 * j) * ga)
        term *= (2 * t) ** (n - 2 * j)
        total += -term if j % 2 else term
    return total


def gegenbauer_norm(a, n: int) -> mpfr:
    """``int_{-1}^{1} (G_n^a)^2 (1 - t^2)^(a - 1/2) dt``."""
    a = _order(a)
    return pi() * mpfr(2) ** (1 - 2 * a) * gamma(n + 2 * a) / (
        math.factorial(n) * (n + a) * gamma(a) ** 2
    )


def _newton_polish(a, n, seeds, tol):
    roots = []
    for t in seeds:
        t = mpfr(t)
        for _ in range(_MAX_POLISH_STEPS):
            vals = gegenbauer_table(a, n + 1, t, kmax=1)
            step = vals[0][n] / vals[1][n]
            t -= step
            if abs(step) <= tol:
                break
        else:
            raise RootRefinementError(f"root near {float(t)} of G_{n} did not converge")
        roots.append(t)
    roots.sort()
    return roots


def _distinct(roots) -> bool:
    return all(lo < hi for lo, hi in zip(roots, roots[1:])) and -1 < roots[0] and roots[-1] < 1


_cache_lock = threading.Lock()


@lru_cache(maxsize=64)
def _roots_cached(a_q, n: int, prec: Precision):
    with working_precision(prec):
        a = _order(a_q)
        tol = mpfr(10) ** (-prec.working_digits + 2)
        seeds = [math.cos(math.pi * (4 * i + 3) / (4 * n + 2)) for i in range(n)]
        roots = _newton_polish(a, n, seeds, tol)
        if not _distinct(roots):
            # Chebyshev angles are poor seeds far from a = 1/2; fall back to
            # Golub-Welsch eigenvalues.
            from scipy.special import roots_gegenbauer

            seeds = roots_gegenbauer(n, float(a_q))[0] if float(a_q) != 0 else None
            if seeds is None:
                raise RootRefinementError("no eigenvalue seeds for a = 0")
            roots = _newton_polish(a, n, seeds, tol)
            if not _distinct(roots):
                raise RootRefinementError(f"could not isolate the {n} roots of G_{n}^{a}")
        return tuple(roots)


def gegenbauer_roots(a, n: int, prec: Precision) -> list[mpfr]:
    """The ``n`` roots of ``G_n^a`` in increasing order, at ``prec`` plus guard digits."""
    if n < 1:
        raise DomainError("need n >= 1 for roots")
    key = to_rational(a) if not isinstance(a, type(mpfr())) else gmpy2.mpq(a)
    with _cache_lock:
        roots = _roots_cached(key, n, prec)
    return list(roots)
