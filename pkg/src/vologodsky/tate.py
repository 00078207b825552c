"""The abelian integral of ``dz/z`` on a Tate curve ``K^x / q^Z``.

The special fibre of ``E_q`` is an ``n``-gon, ``n = v(q)``.  Vertex ``v`` is the
component whose smooth locus is ``{v(z) = v}``; the annulus ``v < v(z) < v + 1``
joins ``v`` to ``v + 1`` (indices mod ``n``).  Taking ``F_v = log`` on every
wide open makes all edge differences vanish except across the wrap-around edge
``(n-1, 0)``, where the identification ``z ~ z/q`` contributes ``-log(q)``.
Normalizing that cochain turns ``log`` into ``log_q``, the branch killing ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PadicError, ReductionTypeError
from .graphs import Cochain, DualGraph, VertexFunction, decompose
from .padic import LogBranch, PadicNumber, plog


@dataclass(frozen=True, eq=False)
class TateCurve:
    q: PadicNumber

    def __post_init__(self) -> None:
        if self.q.is_zero():
            raise PadicError("the Tate parameter q must be nonzero")
        if self.q.val < 3:
            raise ReductionTypeError(
                f"reduction type out of scope: v(q) = {self.q.val}, need at least 3")

    @property
    def p(self) -> int:
        return self.q.p

    @property
    def n(self) -> int:
        return self.q.val


@dataclass(frozen=True, eq=False)
class TatePoint:
    """A representative ``z`` of a point of ``K^x / q^Z``."""

    z: PadicNumber

    def __post_init__(self) -> None:
        if self.z.is_zero():
            raise PadicError("a point of the Tate curve needs a nonzero representative")


def _check_branch(E: TateCurve, branch: LogBranch) -> None:
    if branch.p != E.p:
        raise PadicError("branch and curve live over different primes")


def tate_dual_graph(E: TateCurve) -> DualGraph:
    n = E.n
    return DualGraph([str(v) for v in range(n)], [(f"e{v}", str(v), str((v + 1) % n)) for v in range(n)])


def tate_cochain(E: TateCurve, branch: LogBranch) -> Cochain:
    """Differences ``F_{v+1} - F_v`` of the primitives ``F_v = log`` on each annulus."""
    _check_branch(E, branch)
    g = tate_dual_graph(E)
    values = {e.id: PadicNumber.exact_zero(E.p) for e in g.edges}
    values[f"e{E.n - 1}"] = -plog(E.q, branch)
    return Cochain(g, values, E.p)


def reduce_point(E: TateCurve, P: TatePoint) -> tuple[PadicNumber, int]:
    """Representative with valuation in ``0..n-1`` and the power of ``q`` divided out."""
    k = P.z.val // E.n
    return P.z / E.q**k, k


@dataclass(frozen=True, eq=False)
class TateIntegral:
    value: PadicNumber
    cochain: Cochain
    harmonic: Cochain
    gamma: VertexFunction
    vertex: str
    representative: PadicNumber

    def to_document(self) -> dict:
        return {
            "value": str(self.value),
            "cochain": {k: str(v) for k, v in self.cochain.values.items()},
            "harmonic": {k: str(v) for k, v in self.harmonic.values.items()},
            "gamma": {k: str(v) for k, v in self.gamma.values.items()},
            "vertex": self.vertex,
            "representative": str(self.representative),
        }


def tate_integrate(E: TateCurve, P: TatePoint, branch: LogBranch, *, cochain: Cochain | None = None) -> TateIntegral:
    """Full gluing pipeline; ``cochain`` overrides the computed ``c_omega``."""
    _check_branch(E, branch)
    c = tate_cochain(E, branch) if cochain is None else cochain
    harmonic, gamma = decompose(c)
    z, _ = reduce_point(E, P)
    vertex = str(z.val)
    value = plog(z, branch) - gamma[vertex]
    return TateIntegral(value, c, harmonic, gamma, vertex, z)


def vologodsky_log(E: TateCurve, P: TatePoint, branch: LogBranch, *, cochain: Cochain | None = None) -> PadicNumber:
    return tate_integrate(E, P, branch, cochain=cochain).value


def logq_closed_form(E: TateCurve, P: TatePoint, branch: LogBranch) -> PadicNumber:
    """``log(z) - v(z) log(q) / n``, with no graph machinery involved."""
    _check_branch(E, branch)
    return plog(P.z, branch) - plog(E.q, branch) * P.z.val / E.n
