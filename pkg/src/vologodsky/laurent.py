"""Laurent polynomials on the standard annulus and their Newton polygons.

The local model of a node is ``xy = p``.  The annulus ``0 < v(x) < 1`` sits
between the component ``T_x`` (cut out by ``x``, reached as ``v(x) -> 1``) and
the component ``T_y`` (cut out by ``y = p/x``, reached as ``v(x) -> 0``).  The
annulus is oriented from ``T_y`` to ``T_x``, which makes ``Res dlog x = +1``.

Residues of ``dlog f`` are read off the Newton polygon by counting roots; no
p-adic root finding is done.  Coefficients must be exact rationals because the
polygon is not continuous in its coefficients.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import NamedTuple

from .errors import DivisorMeetsAnnulusError, ParseError, PrecisionError
from .padic import PadicNumber, RationalLike, is_prime, split_rational


class Component(enum.Enum):
    T_x = "T_x"
    T_y = "T_y"


def _exact_coefficient(value: object, p: int) -> Fraction:
    if isinstance(value, PadicNumber):
        raise PrecisionError("insufficient precision: Laurent coefficients must be exact rationals")
    if isinstance(value, str):
        if "O(" in value:
            raise PrecisionError(f"insufficient precision: coefficient {value!r} is not exact")
        try:
            return Fraction(value.replace(" ", ""))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot parse coefficient {value!r}") from None
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    raise ParseError(f"unsupported coefficient {value!r}")


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    """``sum a_i x^i`` over finitely many exponents, with exact rational coefficients."""

    p: int
    coeffs: Mapping[int, Fraction]

    def __init__(self, p: int, coeffs: Mapping[int, RationalLike | str]):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        clean = {}
        for i, a in sorted(coeffs.items(), key=lambda kv: int(kv[0])):
            a = _exact_coefficient(a, p)
            if a:
                clean[int(i)] = a
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    @classmethod
    def monomial(cls, p: int, exponent: int = 1, coefficient: RationalLike = 1) -> LaurentPolynomial:
        return cls(p, {exponent: coefficient})

    @classmethod
    def from_roots(cls, p: int, roots: list[RationalLike], shift: int = 0) -> LaurentPolynomial:
        """``x^shift * prod (x - a)``."""
        f = cls.monomial(p, shift)
        for a in roots:
            f = f * cls(p, {1: 1, 0: -Fraction(a)})
        return f

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def low(self) -> int:
        return min(self.coeffs)

    @property
    def high(self) -> int:
        return max(self.coeffs)

    def coefficient_valuations(self) -> dict[int, int]:
        return {i: split_rational(a, self.p)[0] for i, a in self.coeffs.items()}

    def __mul__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if other.p != self.p:
            raise ValueError("mismatched primes")
        out: dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, Fraction(0)) + a * b
        return LaurentPolynomial(self.p, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.p == other.p and dict(self.coeffs) == dict(other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __call__(self, z: PadicNumber) -> PadicNumber:
        total = PadicNumber.exact_zero(self.p)
        for i, a in self.coeffs.items():
            total = total + z**i * a
        return total

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({a})*x^{i}" for i, a in self.coeffs.items())

    def to_document(self) -> dict:
        return {"p": self.p, "coeffs": {str(i): str(a) for i, a in self.coeffs.items()}}

    @classmethod
    def from_document(cls, doc: Mapping) -> LaurentPolynomial:
        try:
            p = doc["p"]
            raw = doc["coeffs"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"Laurent polynomial document is missing field {exc}") from None
        if not isinstance(p, int) or not is_prime(p):
            raise ParseError(f"field 'p' must be a prime integer, got {p!r}")
        if not isinstance(raw, Mapping):
            raise ParseError("field 'coeffs' must be an object")
        coeffs = {}
        for k, v in raw.items():
            try:
                i = int(k)
            except ValueError:
                raise ParseError(f"coeffs: exponent {k!r} is not an integer") from None
            try:
                coeffs[i] = _exact_coefficient(v if isinstance(v, str) else v, p)
            except ParseError as exc:
                raise ParseError(f"coeffs.{k}: {exc}") from None
        return cls(p, coeffs)


class NewtonPolygon(NamedTuple):
    vertices: tuple[tuple[int, int], ...]
    segments: tuple[tuple[Fraction, int], ...]  # (slope, horizontal length)

    def to_document(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "segments": [{"slope": str(s), "length": n} for s, n in self.segments],
        }


def _require_nonzero(f: LaurentPolynomial) -> None:
    if f.is_zero():
        raise ValueError("the zero Laurent polynomial has no Newton polygon")


def newton_polygon(f: LaurentPolynomial) -> NewtonPolygon:
    """Lower convex hull of the points ``(i, v(a_i))``."""
    _require_nonzero(f)
    hull: list[tuple[int, int]] = []
    for pt in sorted(f.coefficient_valuations().items()):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = tuple(
        (Fraction(b[1] - a[1], b[0] - a[0]), b[0] - a[0]) for a, b in zip(hull, hull[1:])
    )
    return NewtonPolygon(tuple(hull), segments)


def root_valuation_counts(f: LaurentPolynomial) -> list[tuple[Fraction, int]]:
    """Valuations of the nonzero roots of ``f`` with multiplicities, left to right."""
    return [(-slope, length) for slope, length in newton_polygon(f).segments]


def annulus_residue_dlog(f: LaurentPolynomial) -> int:
    """Residue of ``df/f`` on the annulus ``0 < v(x) < 1``.

    Equals the order of ``f`` at ``x = 0`` plus the number of roots with
    valuation at least 1, i.e. the degree of the divisor of ``f`` inside.
    """
    counts = root_valuation_counts(f)
    if any(0 < v < 1 for v, _ in counts):
        raise DivisorMeetsAnnulusError(f"divisor meets annulus: {f} has a root with valuation in (0, 1)")
    return f.low + sum(n for v, n in counts if v >= 1)


def ord_component(f: LaurentPolynomial, side: Component | str) -> int:
    """Multiplicity of ``T_x`` or ``T_y`` in the divisor of ``f``."""
    _require_nonzero(f)
    side = Component(side)
    vals = f.coefficient_valuations()
    if side is Component.T_x:
        return min(v + i for i, v in vals.items())
    return min(vals.values())


class LemmaCheck(NamedTuple):
    residue: int
    boundary: int
    equal: bool

    def to_document(self) -> dict:
        return {"residue": self.residue, "boundary": self.boundary, "equal": self.equal}


def lemma_check(f: LaurentPolynomial) -> LemmaCheck:
    """Compare the annulus residue of ``dlog f`` with ``ord_{T_x} f - ord_{T_y} f``."""
    residue = annulus_residue_dlog(f)
    boundary = ord_component(f, Component.T_x) - ord_component(f, Component.T_y)
    return LemmaCheck(residue, boundary, residue == boundary)


def in_reduced_form(f: LaurentPolynomial) -> bool:
    """Integral in the local model and divisible by neither ``x`` nor ``y``.

    That is ``v(a_i) >= max(-i, 0)`` for all ``i``, with equality ``v(a_i) = 0``
    for some ``i >= 0`` and ``v(a_i) = -i`` for some ``i <= 0``.
    """
    if f.is_zero():
        return False
    vals = f.coefficient_valuations()
    if any(v < max(-i, 0) for i, v in vals.items()):
        return False
    return any(i >= 0 and v == 0 for i, v in vals.items()) and any(
        i <= 0 and v == -i for i, v in vals.items()
    )
