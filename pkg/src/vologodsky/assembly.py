"""Gluing local primitives into one global primitive.

A family of local primitives ``F_v`` (one per vertex of the dual graph) is
recorded by the constants ``c(e) = F_{head} - F_{tail}`` measured on each annulus.
Shifting ``F_v`` by ``-gamma(v)`` for the exact part ``d gamma`` of ``c`` leaves
harmonic differences; this fixes the family up to a single global constant,
pinned here by leaving the first vertex unshifted.

On an annulus the glued primitive is the tail primitive plus the harmonic value
times the normalized valuation ``t`` of the coordinate, ``0 <= t <= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, NamedTuple

from .errors import GraphError, PadicZeroDivisionError
from .graphs import Cochain, DualGraph, Edge, VertexFunction, decompose
from .laurent import LaurentPolynomial
from .padic import LogBranch, PadicNumber, plog


@dataclass(frozen=True, eq=False)
class PrimitiveFamily:
    graph: DualGraph
    raw_cochain: Cochain
    base_values: VertexFunction | None = None

    def __post_init__(self) -> None:
        if self.raw_cochain.graph != self.graph:
            raise GraphError("raw cochain does not live on the family's graph")
        if self.base_values is not None and self.base_values.graph != self.graph:
            raise GraphError("base values do not live on the family's graph")


class Normalization(NamedTuple):
    offsets: VertexFunction
    harmonic: Cochain


def normalize_primitives(fam: PrimitiveFamily) -> Normalization:
    """Offsets ``gamma`` such that ``F_v - gamma(v)`` have harmonic differences."""
    harmonic, gamma = decompose(fam.raw_cochain)
    return Normalization(gamma, harmonic)


def normalized_values(fam: PrimitiveFamily, norm: Normalization | None = None) -> VertexFunction:
    if fam.base_values is None:
        raise ValueError("family carries no base values")
    norm = normalize_primitives(fam) if norm is None else norm
    return fam.base_values - norm.offsets


def annulus_values(
    fam: PrimitiveFamily, norm: Normalization, e: Edge, tail_value: PadicNumber
) -> tuple[PadicNumber, PadicNumber]:
    """Normalized tail and head primitives at a point of the annulus ``e``.

    ``tail_value`` is the raw tail primitive ``F_{e.tail}`` at that point.
    """
    head_value = tail_value + fam.raw_cochain[e]
    return tail_value - norm.offsets[e.tail], head_value - norm.offsets[e.head]


def annulus_interpolate(base: PadicNumber, harmonic_value: PadicNumber, t: Fraction | int) -> PadicNumber:
    """``base + harmonic_value * t`` for a point whose coordinate has valuation ``t``."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"annulus parameter t = {t} lies outside [0, 1]")
    return base + harmonic_value * t


def integrate_rational_form(
    kind: Literal["exact", "dlog"],
    f: LaurentPolynomial,
    at: PadicNumber,
    branch: LogBranch | None = None,
) -> PadicNumber:
    """Primitive of ``df`` (``f`` itself) or of ``df/f`` (``log f``), evaluated at ``at``."""
    value = f(at)
    if kind == "exact":
        return value
    if kind == "dlog":
        if branch is None:
            raise ValueError("a branch of the logarithm is required for dlog forms")
        if value.is_zero():
            raise PadicZeroDivisionError(f"f vanishes at {at}; log f is undefined there")
        return plog(value, branch)
    raise ValueError(f"unknown form kind {kind!r}")
