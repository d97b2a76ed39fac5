"""Extended-precision scalars.

All arithmetic in the package runs on :class:`gmpy2.mpfr` values.  The
working precision is carried by the gmpy2 context, which is thread local, so
solvers enter :func:`working_precision` once and everything below them
inherits it.  Exact rational inputs (``"1/2"``, ``"2.828"``) are kept as
:class:`gmpy2.mpq` until they are needed at a given precision.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import DomainError

BigReal = gmpy2.mpfr

LOG2_10 = math.log2(10)


@dataclass(frozen=True)
class Precision:
    """Working precision in significant decimal digits.

    ``guard_digits`` extra digits are carried internally; every externally
    visible accuracy statement refers to ``decimal_digits``.
    """

    decimal_digits: int
    guard_digits: int = 20

    def __post_init__(self):
        if self.decimal_digits < 30:
            raise ValueError(f"decimal_digits must be >= 30, got {self.decimal_digits}")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be nonnegative")

    @property
    def bits(self) -> int:
        return math.ceil((self.decimal_digits + self.guard_digits) * LOG2_10) + 4

    @property
    def working_digits(self) -> int:
        return self.decimal_digits + self.guard_digits

    def eps(self, shift: int = 0) -> mpfr:
        """Return ``10**(shift - D)`` at the current context precision."""
        return mpfr(10) ** (shift - self.decimal_digits)

    @classmethod
    def default_for(cls, n: int) -> "Precision":
        """Digits used when the caller does not choose: 80 up to N=100, 120 above."""
        return cls(80 if n <= 100 else 120)


@contextmanager
def working_precision(prec: Precision):
    """Run the enclosed block with ``prec.bits`` of mantissa."""
    with gmpy2.context(gmpy2.get_context(), precision=prec.bits):
        yield


def current_digits() -> int:
    """Decimal digits representable at the ambient gmpy2 precision."""
    return int(gmpy2.get_context().precision / LOG2_10)


def to_rational(value) -> mpq:
    """Exact rational from an int, Fraction, mpq or decimal/ratio string.

    Binary floats are accepted through their shortest repr so that ``0.5``
    and ``"0.5"`` agree; strings are never routed through float.
    """
    if isinstance(value, type(mpq())):
        return value
    if isinstance(value, (int, Fraction)):
        return mpq(value)
    if isinstance(value, float):
        return mpq(Fraction(repr(value)))
    if isinstance(value, str):
        try:
            return mpq(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def to_big(value) -> mpfr:
    """Convert to an mpfr rounded at the ambient precision."""
    if isinstance(value, type(mpfr())):
        return +value
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return mpfr(text)
        except ValueError:
            return mpfr(to_rational(text))
    if isinstance(value, float):
        return mpfr(to_rational(value))
    return mpfr(value)


def parse(text: str) -> mpfr:
    """Parse a decimal string such as ``-1.5880710226e-3`` at ambient precision."""
    return to_big(text)


def render(x, digits: int) -> str:
    """Decimal string of ``x`` with ``digits`` significant digits."""
    if x == 0:
        return "0"
    text = format(mpfr(x), f".{digits}g")
    return text[:-2] if text.endswith(".0") else text


def gamma(z, prec: Precision | None = None) -> mpfr:
    """Gamma function for positive real arguments.

    MPFR's gamma is correctly rounded; it is evaluated with the guard digits
    of ``prec`` (or at the ambient precision when ``prec`` is None).
    """
    z = to_big(z) if not isinstance(z, type(mpfr())) else z
    if not z > 0:
        raise DomainError(f"gamma requires z > 0, got {z}")
    if prec is None:
        return gmpy2.gamma(z)
    with working_precision(prec):
        return gmpy2.gamma(z)


def pow_real(x, p) -> mpfr:
    """``x**p`` for real ``x >= 0`` (any ``x`` when ``p`` is an integer)."""
    x = x if isinstance(x, type(mpfr())) else to_big(x)
    if not isinstance(p, int):
        p = p if isinstance(p, type(mpfr())) else to_big(p)
        if gmpy2.is_integer(p):
            p = int(p)
    if isinstance(p, int):
        if x == 0 and p < 0:
            raise DomainError("zero raised to a negative power")
        return x ** p
    if x < 0:
        raise DomainError(f"negative base {x} with non-integer exponent {p}")
    if x == 0:
        if p > 0:
            return mpfr(0)
        raise DomainError("zero raised to a nonpositive power")
    if p == 0.5:
        return gmpy2.sqrt(x)
    if p == 1.5:
        return x * gmpy2.sqrt(x)
    return x ** p


def sqrt(x) -> mpfr:
    if x < 0:
        raise DomainError(f"sqrt of negative value {x}")
    return gmpy2.sqrt(x)


def pi() -> mpfr:
    return gmpy2.const_pi()
