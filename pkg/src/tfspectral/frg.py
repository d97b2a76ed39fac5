"""Fractional rational Gegenbauer functions on [0, inf).

``FRG_n(x) = G_n^a(t)`` with the algebraic map ``t = (x**alpha - L) / (x**alpha + L)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpq

from .basis import gegenbauer_norm, gegenbauer_roots, gegenbauer_table
from .errors import DomainError
from .numeric import Precision, pow_real, to_big, to_rational, working_precision

WEIGHT_CONVENTIONS = ("as_printed", "squared")


@dataclass(frozen=True)
class FrgBasis:
    """Truncated FRG family ``FRG_0 .. FRG_{N-1}``.

    ``a``, ``alpha`` and ``L`` are stored as exact rationals and rounded to
    the ambient precision on use, so a basis built before entering a
    high-precision context loses nothing.
    """

    a: mpq
    alpha: mpq
    L: mpq
    N: int
    weight_convention: str = field(default="as_printed", compare=False)

    def __post_init__(self):
        for name in ("a", "alpha", "L"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))
        if not self.a > mpq(-1, 2):
            raise ValueError(f"a must exceed -1/2, got {self.a}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.weight_convention not in WEIGHT_CONVENTIONS:
            raise ValueError(f"unknown weight convention {self.weight_convention!r}")

    def params(self):
        """``(a, alpha, L)`` as mpfr at the ambient precision."""
        return mpfr(self.a), mpfr(self.alpha), mpfr(self.L)

    def with_size(self, N: int) -> "FrgBasis":
        return FrgBasis(self.a, self.alpha, self.L, N, self.weight_convention)


def _x(x) -> mpfr:
    return x if isinstance(x, type(mpfr())) else to_big(x)


def map_to_t(basis: FrgBasis, x) -> mpfr:
    x = _x(x)
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    _, alpha, L = basis.params()
    u = pow_real(x, alpha)
    return (u - L) / (u + L)


def map_to_x(basis: FrgBasis, t) -> mpfr:
    t = _x(t)
    if t >= 1:
        raise DomainError("t = 1 maps to x = infinity")
    if t < -1:
        raise DomainError(f"t must lie in [-1, 1), got {t}")
    _, alpha, L = basis.params()
    return pow_real(L * (1 + t) / (1 - t), 1 / alpha)


def map_derivatives(basis: FrgBasis, x):
    """``(t, dt/dx, d2t/dx2)`` at ``x > 0``."""
    x = _x(x)
    if not x > 0:
        raise DomainError("map derivatives need x > 0")
    _, alpha, L = basis.params()
    u = pow_real(x, alpha)
    du = alpha * u / x
    d2u = (alpha - 1) * du / x
    s = u + L
    t = (u - L) / s
    dt = 2 * L * du / (s * s)
    d2t = 2 * L * (d2u - 2 * du * du / s) / (s * s)
    return t, dt, d2t


def frg_table(basis: FrgBasis, x, kmax: int = 0, count: int | None = None):
    """``d^k/dx^k FRG_n(x)`` for all ``n < count`` (default ``N``), ``k <= kmax``."""
    count = basis.N if count is None else count
    x = _x(x)
    if kmax == 0:
        return gegenbauer_table(basis.a, count, map_to_t(basis, x))
    if x == 0 and basis.alpha < 1:
        raise DomainError("x-derivatives of FRG are singular at x = 0 when alpha < 1")
    t, dt, d2t = map_derivatives(basis, x)
    g = gegenbauer_table(basis.a, count, t, kmax=kmax)
    out = [g[0], [v * dt for v in g[1]]]
    if kmax >= 2:
        dt2 = dt * dt
        out.append([v2 * dt2 + v1 * d2t for v1, v2 in zip(g[1], g[2])])
    return out


def eval_frg(basis: FrgBasis, n: int, x, k: int = 0) -> mpfr:
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    return frg_table(basis, x, kmax=k, count=n + 1)[k][n]


def weight(basis: FrgBasis, x) -> mpfr:
    """Weight function of the FRG inner product.

    ``as_printed`` uses ``(1 - t)**(a - 1/2)`` for the first factor,
    ``squared`` uses ``(1 - t**2)**(a - 1/2)``; both are 1 at ``a = 1/2``.
    """
    x = _x(x)
    if not x > 0:
        raise DomainError("weight is defined for x > 0")
    a, _, _ = basis.params()
    t, dt, _ = map_derivatives(basis, x)
    base = 1 - t if basis.weight_convention == "as_printed" else 1 - t * t
    return pow_real(base, a - mpq(1, 2)) * dt


_node_lock = threading.Lock()


@lru_cache(maxsize=64)
def _nodes_cached(basis: FrgBasis, prec: Precision):
    roots = gegenbauer_roots(basis.a, basis.N, prec)
    with working_precision(prec):
        return tuple(map_to_x(basis, t) for t in roots)


def collocation_nodes(basis: FrgBasis, prec: Precision) -> list[mpfr]:
    """Images of the roots of ``G_N^a``, increasing and positive."""
    with _node_lock:
        return list(_nodes_cached(basis, prec))


def frg_norm(basis: FrgBasis, n: int) -> mpfr:
    return gegenbauer_norm(basis.a, n)


def inner_product(basis: FrgBasis, f, g, quad_points: int | None = None) -> mpfr:
    """Weighted inner product on [0, inf) by Gauss-Legendre quadrature in ``t``.

    Under the map, ``w(x) dx`` becomes the first weight factor times ``dt``,
    so the quadrature is exact for polynomial integrands in ``t`` at ``a = 1/2``.
    """
    m = quad_points or 4 * basis.N
    digits = max(30, int(gmpy2.get_context().precision * 0.30103) - 20)
    prec = Precision(digits)
    nodes = gegenbauer_roots(mpq(1, 2), m, prec)
    a, _, _ = basis.params()
    expo = a - mpq(1, 2)
    total = mpfr(0)
    for t in nodes:
        p, dp = (tab[m] for tab in gegenbauer_table(mpq(1, 2), m + 1, t, kmax=1))
        w = 2 / ((1 - t * t) * dp * dp)
        x = map_to_x(basis, t)
        base = 1 - t if basis.weight_convention == "as_printed" else 1 - t * t
        total += w * f(x) * g(x) * pow_real(base, expo)
    return total
