"""Working-precision handling.

Every routine runs in its own :class:`mpmath.MPContext` whose precision is
fixed at creation, so no global mpmath state is touched and evaluators are
safe to call from several threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DomainError

LN2 = math.log(2.0)


@dataclass(frozen=True)
class Precision:
    """Arithmetic width in significand bits (53 is IEEE double)."""

    significand_bits: int = 128

    def __post_init__(self):
        if int(self.significand_bits) != self.significand_bits or self.significand_bits < 53:
            raise DomainError(f"significand_bits must be an integer >= 53, got {self.significand_bits!r}")

    @property
    def bits(self) -> int:
        return self.significand_bits

    @property
    def epsilon(self) -> float:
        return 2.0 ** (-self.significand_bits)

    def widened(self, extra: int) -> Precision:
        return Precision(self.significand_bits + max(0, int(math.ceil(extra))))


DOUBLE = Precision(53)


def as_precision(prec) -> Precision:
    if prec is None:
        return Precision()
    if isinstance(prec, Precision):
        return prec
    return Precision(int(prec))


@lru_cache(maxsize=None)
def context(bits: int) -> mpmath.ctx_mp.MPContext:
    """Shared, read-only mpmath context at ``bits`` of precision."""
    ctx = mpmath.MPContext()
    ctx.prec = int(bits)
    return ctx


def to_mpf(ctx, x):
    """Convert ``x`` (int, float, Fraction, str, mpf) into ``ctx``."""
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    return ctx.mpf(x)


def exact(x) -> Fraction:
    """Exact rational value of a finite binary or decimal number."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float, str)):
        return Fraction(x)
    if isinstance(x, mpmath.mpf) or hasattr(x, "_mpf_"):
        sign, man, exp, _ = x._mpf_
        if not man and exp:
            raise DomainError(f"non-finite value {x!r}")
        v = Fraction(int(man)) * (Fraction(2) ** int(exp))
        return -v if sign else v
    return Fraction(float(x))


def fsum(ctx, terms):
    """Sum ``terms`` without intermediate rounding."""
    return ctx.fsum(terms)
