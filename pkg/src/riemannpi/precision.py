"""Arbitrary-precision value carrier and precision policy.

Everything analytic in this package flows through BigReal: an mpmath
float tagged with the decimal working precision it was produced at.
Arithmetic between BigReals runs at the larger of the two precisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from mpmath import mp, mpf

from .errors import DomainError, ResourceError

MIN_PRECISION = 16

Coercible = Union["BigReal", int, float, str, mpf]


def _to_mpf(x, dps: int) -> mpf:
    if isinstance(x, BigReal):
        return x.value
    with mp.workdps(dps):
        if isinstance(x, (int, str)):
            return mpf(x)
        return mpf(x)


@dataclass(frozen=True)
class BigReal:
    """An arbitrary-precision real plus the decimal precision it carries."""

    value: mpf
    precision: int = MIN_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "precision", max(int(self.precision), MIN_PRECISION))
        if not isinstance(self.value, mpf):
            with mp.workdps(self.precision):
                object.__setattr__(self, "value", mpf(self.value))

    @classmethod
    def from_any(cls, x: Coercible, precision: int) -> "BigReal":
        precision = max(int(precision), MIN_PRECISION)
        if isinstance(x, BigReal):
            return cls(x.value, max(x.precision, precision))
        return cls(_to_mpf(x, precision), precision)

    def _binop(self, other: Coercible, op) -> "BigReal":
        p = self.precision
        if isinstance(other, BigReal):
            p = max(p, other.precision)
        ov = _to_mpf(other, p)
        with mp.workdps(p):
            return BigReal(op(self.value, ov), p)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        return BigReal(-self.value, self.precision)

    def _cmp_value(self, other):
        return _to_mpf(other, self.precision)

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __eq__(self, other):
        try:
            return self.value == self._cmp_value(other)
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __float__(self):
        return float(self.value)

    def floor(self) -> int:
        with mp.workdps(self.precision):
            return int(mp.floor(self.value))

    def to_decimal(self, digits: int | None = None) -> str:
        d = digits if digits is not None else self.precision
        with mp.workdps(max(d, self.precision)):
            return mp.nstr(self.value, d, strip_zeros=False)

    @classmethod
    def from_decimal(cls, s: str, precision: int) -> "BigReal":
        return cls.from_any(s, precision)

    def __repr__(self):
        return f"BigReal({self.to_decimal(min(self.precision, 25))!r}, precision={self.precision})"


@dataclass(frozen=True)
class PrecisionPolicy:
    """Derives internal working precision from requested output digits.

    working digits for an argument of magnitude x:
        max(floor_digits, target + guard + ceil(log10 x))
    The log10(x) inflation absorbs the exp(ln x)-sized peak terms in the
    Ei and Gram series, whose partial sums transiently reach the size of
    the final value itself.
    """

    target_digits: int = 30
    guard_digits: int = 30
    floor_digits: int = 64
    hard_cap: int = 120_000

    def __post_init__(self):
        if self.target_digits < 1:
            raise DomainError("target_digits must be positive")

    def working_for(self, x: Coercible | None = None) -> int:
        infl = 0
        if x is not None:
            xf = x.value if isinstance(x, BigReal) else x
            with mp.workdps(30):
                ax = abs(mpf(xf))
                if ax > 1:
                    infl = int(mp.ceil(mp.log10(ax)))
        wd = max(self.floor_digits, self.target_digits + self.guard_digits + infl)
        if wd > self.hard_cap:
            raise ResourceError(
                f"required working precision {wd} digits exceeds hard cap {self.hard_cap}"
            )
        return wd

    def working_for_log(self, ln_x) -> int:
        """Working precision when the argument is known by its natural log."""
        with mp.workdps(30):
            lv = mpf(ln_x.value if isinstance(ln_x, BigReal) else ln_x)
            infl = int(mp.ceil(lv / mp.log(10))) if lv > 0 else 0
        wd = max(self.floor_digits, self.target_digits + self.guard_digits + infl)
        if wd > self.hard_cap:
            raise ResourceError(
                f"required working precision {wd} digits exceeds hard cap {self.hard_cap}"
            )
        return wd

    def with_target(self, target_digits: int) -> "PrecisionPolicy":
        return PrecisionPolicy(
            target_digits=target_digits,
            guard_digits=self.guard_digits,
            floor_digits=self.floor_digits,
            hard_cap=self.hard_cap,
        )


DEFAULT_POLICY = PrecisionPolicy()
