"""Precision-tracked arithmetic in Q_p and the branch-parameterized p-adic logarithm.

A :class:`PadicNumber` stands for ``unit * p**val + O(p**(val + rel_prec))`` with
``unit`` reduced into ``[1, p**rel_prec)`` and prime to ``p``.  Two kinds of zero
are kept apart:

* the *exact* zero (``val is None``), which behaves like the integer 0, and
* ``O(p**N)``, a value known only to be divisible by ``p**N``
  (``rel_prec == 0``, ``unit == 0``, ``val == N``).

Precision rules: sums keep the smaller absolute precision, products and
quotients keep the smaller relative precision.  Multiplying or dividing by a
Python ``int`` or :class:`~fractions.Fraction` is exact, so dividing by an
integer divisible by ``p`` lowers the absolute precision by the corresponding
number of digits and nothing else.

Literal syntax (parsing and rendering)::

    0                     exact zero
    O(5^3)                zero to absolute precision 3
    55 + O(5^3)           a value of nonnegative valuation
    2*5^-1 + O(5^4)       a value of negative valuation
    -7, 3/4               exact rationals, stored at the context's precision
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Union

from .errors import (
    NotAUnitError,
    PadicError,
    PadicZeroDivisionError,
    ParseError,
    PrecisionError,
)

DEFAULT_PREC = 20

RationalLike = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def vp(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("the valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_rational(x: Fraction, p: int) -> tuple[int, int, int]:
    """Write a nonzero rational as ``p**v * a / b`` with ``a, b`` prime to ``p``."""
    a, b = x.numerator, x.denominator
    va, vb = vp(a, p), vp(b, p)
    return va - vb, a // p**va, b // p**vb


def _is_rational(x: object) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True, eq=False)
class PadicNumber:
    p: int
    val: int | None
    unit: int = 0
    rel_prec: int = 0

    def __post_init__(self) -> None:
        if self.val is None:
            if self.unit or self.rel_prec:
                raise ValueError("exact zero carries no unit or precision")
            return
        if self.rel_prec < 0:
            raise ValueError("relative precision must be nonnegative")
        if not 0 <= self.unit < self.p**self.rel_prec:
            raise ValueError("unit must be reduced modulo p**rel_prec")
        if self.rel_prec > 0 and self.unit % self.p == 0:
            raise ValueError("unit must be prime to p")

    # -- construction ------------------------------------------------------

    @classmethod
    def exact_zero(cls, p: int) -> PadicNumber:
        return cls(p, None)

    @classmethod
    def big_o(cls, p: int, abs_prec: int) -> PadicNumber:
        return cls(p, abs_prec, 0, 0)

    @classmethod
    def from_rational(cls, x: RationalLike, p: int, prec: int = DEFAULT_PREC) -> PadicNumber:
        """Embed a rational with ``prec`` digits of relative precision; 0 is exact."""
        x = Fraction(x)
        if x == 0:
            return cls.exact_zero(p)
        v, _, _ = split_rational(x, p)
        return cls.approximate(x, p, v + prec)

    @classmethod
    def approximate(cls, x: RationalLike, p: int, abs_prec: int) -> PadicNumber:
        """The rational ``x`` known modulo ``p**abs_prec``."""
        x = Fraction(x)
        if x == 0:
            return cls.big_o(p, abs_prec)
        v, a, b = split_rational(x, p)
        if v >= abs_prec:
            return cls.big_o(p, abs_prec)
        rel = abs_prec - v
        mod = p**rel
        return cls(p, v, a * pow(b, -1, mod) % mod, rel)

    # -- inspection --------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return self.val is None

    def is_zero(self) -> bool:
        """True for the exact zero and for values indistinguishable from zero."""
        return self.val is None or self.rel_prec == 0

    @property
    def abs_prec(self) -> float | int:
        if self.val is None:
            return math.inf
        return self.val + self.rel_prec

    def valuation(self) -> float | int:
        """``inf`` for the exact zero; for ``O(p^N)`` this is the lower bound ``N``."""
        if self.val is None:
            return math.inf
        return self.val

    def lift(self) -> Fraction:
        """The canonical rational representative ``unit * p**val``."""
        if self.val is None:
            return Fraction(0)
        return self.unit * Fraction(self.p) ** self.val

    def with_abs_prec(self, abs_prec: int) -> PadicNumber:
        """Forget digits beyond ``abs_prec`` (never adds precision)."""
        if self.val is None or abs_prec >= self.abs_prec:
            return self
        return PadicNumber.approximate(self.lift(), self.p, abs_prec)

    def identical(self, other: PadicNumber) -> bool:
        """Representation equality, including the tracked precision."""
        return (self.p, self.val, self.unit, self.rel_prec) == (
            other.p, other.val, other.unit, other.rel_prec)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other: object) -> PadicNumber | None:
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise PadicError(f"cannot combine {self.p}-adic and {other.p}-adic numbers")
            return other
        if _is_rational(other):
            x = Fraction(other)
            if x == 0:
                return PadicNumber.exact_zero(self.p)
            v, _, _ = split_rational(x, self.p)
            if self.val is None:
                return PadicNumber.approximate(x, self.p, v + DEFAULT_PREC)
            # rationals are exact: never let them be the precision bottleneck
            return PadicNumber.approximate(x, self.p, max(self.abs_prec, v + 1))
        return None

    def _scale(self, x: Fraction) -> PadicNumber:
        if x == 0 or self.val is None:
            return PadicNumber.exact_zero(self.p)
        v, a, b = split_rational(x, self.p)
        if self.rel_prec == 0:
            return PadicNumber.big_o(self.p, self.val + v)
        mod = self.p**self.rel_prec
        return PadicNumber(self.p, self.val + v, self.unit * a * pow(b, -1, mod) % mod, self.rel_prec)

    def __add__(self, other: object) -> PadicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.val is None:
            return o
        if o.val is None:
            return self
        n = min(self.abs_prec, o.abs_prec)
        v = min(self.val, o.val)
        if n <= v:
            return PadicNumber.big_o(self.p, n)
        s = self.unit * self.p ** (self.val - v) + o.unit * self.p ** (o.val - v)
        return PadicNumber.approximate(s * Fraction(self.p) ** v, self.p, n)

    __radd__ = __add__

    def __neg__(self) -> PadicNumber:
        if self.val is None or self.rel_prec == 0:
            return self
        return PadicNumber(self.p, self.val, -self.unit % self.p**self.rel_prec, self.rel_prec)

    def __sub__(self, other: object) -> PadicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> PadicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> PadicNumber:
        if _is_rational(other):
            return self._scale(Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.val is None or o.val is None:
            return PadicNumber.exact_zero(self.p)
        rel = min(self.rel_prec, o.rel_prec)
        val = self.val + o.val
        if rel == 0:
            return PadicNumber.big_o(self.p, val)
        mod = self.p**rel
        return PadicNumber(self.p, val, self.unit * o.unit % mod, rel)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> PadicNumber:
        if _is_rational(other):
            if other == 0:
                raise PadicZeroDivisionError("division by zero")
            return self._scale(1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise PadicZeroDivisionError(f"division by {o}, which is indistinguishable from zero")
        if self.val is None:
            return self
        rel = min(self.rel_prec, o.rel_prec)
        val = self.val - o.val
        if rel == 0:
            return PadicNumber.big_o(self.p, val)
        mod = self.p**rel
        return PadicNumber(self.p, val, self.unit * pow(o.unit, -1, mod) % mod, rel)

    def __rtruediv__(self, other: object) -> PadicNumber:
        if not _is_rational(other):
            return NotImplemented
        if self.is_zero():
            raise PadicZeroDivisionError(f"division by {self}, which is indistinguishable from zero")
        x = Fraction(other)
        if x == 0:
            return PadicNumber.exact_zero(self.p)
        return PadicNumber.from_rational(x, self.p, self.rel_prec) / self

    def __pow__(self, n: int) -> PadicNumber:
        if n < 0:
            return 1 / self**-n
        if n == 0:
            return PadicNumber.from_rational(1, self.p, self.rel_prec or DEFAULT_PREC)
        if self.val is None:
            return self
        if self.rel_prec == 0:
            return PadicNumber.big_o(self.p, self.val * n)
        mod = self.p**self.rel_prec
        return PadicNumber(self.p, self.val * n, pow(self.unit, n, mod), self.rel_prec)

    def __eq__(self, other: object) -> bool:
        """Equality up to the smaller of the two precisions."""
        o = self._coerce(other) if isinstance(other, PadicNumber) or _is_rational(other) else None
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        p = self.p
        if self.val is None:
            return "0"
        big_o = f"O({p}^{self.abs_prec})"
        if self.rel_prec == 0:
            return big_o
        if self.val >= 0:
            return f"{self.unit * p**self.val} + {big_o}"
        return f"{self.unit}*{p}^{self.val} + {big_o}"

    def __repr__(self) -> str:
        return f"PadicNumber({str(self)!r})"


_BIG_O = re.compile(r"\s*(?:(?P<head>.*?)\s*\+\s*)?O\(\s*(?P<base>\d+)\s*\^\s*(?P<exp>[+-]?\d+)\s*\)\s*")
_TERM = re.compile(
    r"(?:(?P<num>[+-]?\d+)(?:/(?P<den>\d+))?(?:\*(?P<b1>\d+)\^(?P<e1>[+-]?\d+))?"
    r"|(?P<b2>\d+)\^(?P<e2>[+-]?\d+))"
)


def _parse_term(text: str, p: int) -> Fraction:
    m = _TERM.fullmatch(re.sub(r"\s+", "", text))
    if m is None:
        raise ParseError(f"cannot parse p-adic literal {text!r}")
    if m["b2"] is not None:
        base, exp, coef = m["b2"], m["e2"], Fraction(1)
    else:
        den = int(m["den"] or 1)
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        if m["den"] is not None and den % p == 0:
            raise ParseError(f"denominator of {text!r} must be prime to {p}")
        coef = Fraction(int(m["num"]), den)
        base, exp = m["b1"], m["e1"]
    if base is None:
        return coef
    if int(base) != p:
        raise ParseError(f"literal {text!r} is written in base {base}, expected {p}")
    return coef * Fraction(p) ** int(exp)


def parse_padic(text: str, p: int, prec: int = DEFAULT_PREC) -> PadicNumber:
    """Parse a literal; bare rationals get ``prec`` digits of relative precision."""
    if not isinstance(text, str):
        raise ParseError(f"expected a p-adic literal string, got {type(text).__name__}")
    m = _BIG_O.fullmatch(text)
    if m is None:
        value = _parse_term(text, p)
        return PadicNumber.from_rational(value, p, prec)
    if int(m["base"]) != p:
        raise ParseError(f"literal {text!r} has O({m['base']}^...), expected base {p}")
    head = m["head"]
    value = _parse_term(head, p) if head else Fraction(0)
    return PadicNumber.approximate(value, p, int(m["exp"]))


@dataclass(frozen=True)
class PadicContext:
    """The prime and the default number of digits for embedded rationals."""

    p: int
    default_prec: int = DEFAULT_PREC

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise PadicError(f"{self.p} is not prime")
        if self.p == 2:
            raise PadicError("p = 2 is not supported; the logarithm series needs p >= 3")
        if self.default_prec < 1:
            raise PadicError("default precision must be at least 1")

    def __call__(self, x: RationalLike | str | PadicNumber, prec: int | None = None) -> PadicNumber:
        prec = self.default_prec if prec is None else prec
        if isinstance(x, PadicNumber):
            if x.p != self.p:
                raise PadicError(f"expected a {self.p}-adic number, got a {x.p}-adic one")
            return x
        if isinstance(x, str):
            return parse_padic(x, self.p, prec)
        if _is_rational(x):
            return PadicNumber.from_rational(x, self.p, prec)
        raise TypeError(f"cannot build a p-adic number from {type(x).__name__}")

    def zero(self) -> PadicNumber:
        return PadicNumber.exact_zero(self.p)

    def big_o(self, abs_prec: int) -> PadicNumber:
        return PadicNumber.big_o(self.p, abs_prec)

    def branch(self, constant: RationalLike | str | PadicNumber) -> LogBranch:
        return LogBranch(self(constant))


@dataclass(frozen=True)
class LogBranch:
    """A branch of the logarithm, fixed by the value it assigns to ``p``."""

    branch_constant: PadicNumber

    @classmethod
    def iwasawa(cls, p: int) -> LogBranch:
        return cls(PadicNumber.exact_zero(p))

    @property
    def p(self) -> int:
        return self.branch_constant.p

    def __str__(self) -> str:
        return f"log(p) = {self.branch_constant}"


Op = Literal["add", "sub", "mul", "div"]


def field_arithmetic(a: PadicNumber, b: PadicNumber, op: Op) -> PadicNumber:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def valuation(z: PadicNumber) -> float | int:
    return z.valuation()


def teichmuller(z: PadicNumber, target_prec: int | None = None) -> PadicNumber:
    """The (p-1)-st root of unity congruent to the unit ``z`` modulo ``p``."""
    if z.is_zero() or z.val != 0:
        raise NotAUnitError(f"{z} is not a p-adic unit")
    n = z.abs_prec if target_prec is None else target_prec
    if n < 1:
        raise PadicError("target precision must be at least 1")
    p = z.p
    mod = p**n
    # u**(p**(n-1)) only depends on u mod p and is fixed by Frobenius mod p**n
    return PadicNumber(p, 0, pow(z.unit % p, p ** (n - 1), mod), n)


def _log_one_plus(x: int, p: int, n: int) -> int:
    """``log(1 + x) mod p**n`` for an integer ``x`` with ``p | x``, ``p`` odd."""
    a = vp(x, p)
    # term k has valuation >= k*a - log_p(k), increasing in k once p >= 3
    kmax = 1
    while not (kmax * a >= n and p ** (kmax * a - n) >= kmax):
        kmax += 1
    guard = max(vp(k, p) for k in range(1, kmax)) if kmax > 1 else 0
    work = p ** (n + guard)
    mod = p**n
    total = 0
    xk = 1
    for k in range(1, kmax):
        xk = xk * x % work
        j = vp(k, p)
        term = (xk // p**j) * pow(k // p**j, -1, mod)
        total += term if k % 2 else -term
    return total % mod


def plog(z: PadicNumber, branch: LogBranch) -> PadicNumber:
    """The logarithm on the branch ``log(p) = branch.branch_constant``.

    ``log z = v(z) * log(p) + log<z>`` where ``<z> = z / (p**v(z) * teichmuller(z))``
    is a principal unit and ``log<z>`` is the convergent series.  The series part is
    correct to the full absolute precision of ``<z>``.
    """
    if branch.p != z.p:
        raise PadicError("branch and argument live over different primes")
    if z.is_zero():
        raise PadicZeroDivisionError(f"log is undefined at {z}")
    p, n = z.p, z.rel_prec
    if p == 2:
        raise PadicError("p = 2 is not supported")
    mod = p**n
    omega = pow(z.unit % p, p ** (n - 1), mod)
    principal = z.unit * pow(omega, -1, mod) % mod
    x = (principal - 1) % mod
    if x == 0:
        series = PadicNumber.big_o(p, n)
    else:
        series = PadicNumber.approximate(_log_one_plus(x, p, n), p, n)
    return series + branch.branch_constant * z.val
