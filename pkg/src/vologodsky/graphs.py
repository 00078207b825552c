"""Dual graphs, edge cochains and the harmonic + exact decomposition.

Conventions:

* an oriented edge ``e`` runs from its tail ``e.tail`` to its head ``e.head``;
  ``-e`` is the same edge traversed backwards;
* a cochain is antisymmetric, ``c(-e) = -c(e)``, and stores one value per edge
  under its canonical orientation;
* ``(d gamma)(e) = gamma(e.head) - gamma(e.tail)``;
* a cochain is harmonic when, at every vertex, the values on the oriented edges
  leaving that vertex sum to zero (no edge weights).

On a connected graph every cochain splits uniquely as harmonic + exact.  The
exact part is found by solving the integer Laplacian system with the first
vertex pinned to 0; the reduced Laplacian is inverted by fraction-free
Gauss-Jordan elimination over the integers, so the only p-adic divisions are by
the integer determinant, whose valuation is known exactly.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import NamedTuple

from .errors import DisconnectedGraphError, GraphError, ParseError
from .padic import PadicContext, PadicNumber


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    reversed: bool = False

    def __neg__(self) -> Edge:
        return Edge(self.id, self.head, self.tail, not self.reversed)

    @property
    def sign(self) -> int:
        return -1 if self.reversed else 1

    def __str__(self) -> str:
        return f"{'-' if self.reversed else ''}{self.id}({self.tail}->{self.head})"


@dataclass(frozen=True)
class DualGraph:
    """A finite oriented multigraph without self-loops.

    ``edges`` holds the canonical orientation of every edge; parallel edges are
    distinguished by their ids.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _by_id: Mapping[str, Edge] = field(init=False, repr=False, compare=False)

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge | tuple[str, str, str]]):
        vertices = tuple(str(v) for v in vertices)
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex names")
        vset = set(vertices)
        canon = []
        by_id: dict[str, Edge] = {}
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*map(str, e))
            if e.reversed:
                e = -e
            if e.id in by_id:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if e.tail not in vset or e.head not in vset:
                raise GraphError(f"edge {e.id!r} has an endpoint outside the vertex set")
            if e.tail == e.head:
                raise GraphError(f"edge {e.id!r} is a self-loop")
            by_id[e.id] = e
            canon.append(e)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "_by_id", MappingProxyType(by_id))

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._by_id[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge {edge_id!r}") from None

    def oriented_edges(self) -> Iterator[Edge]:
        for e in self.edges:
            yield e
            yield -e

    def outgoing(self, v: str) -> list[Edge]:
        return [e for e in self.oriented_edges() if e.tail == v]

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        return len(self._spanning_tree()[0]) == len(self.vertices)

    def _spanning_tree(self) -> tuple[dict[str, Edge | None], set[str]]:
        """BFS tree from the first vertex: parent edge (pointing to the child) per vertex."""
        root = self.vertices[0]
        parent: dict[str, Edge | None] = {root: None}
        used: set[str] = set()
        adj: dict[str, list[Edge]] = defaultdict(list)
        for e in self.oriented_edges():
            adj[e.tail].append(e)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e in adj[v]:
                if e.head not in parent:
                    parent[e.head] = e
                    used.add(e.id)
                    queue.append(e.head)
        return parent, used

    def _tree_path(self, parent: Mapping[str, Edge | None], v: str) -> list[Edge]:
        path = []
        while parent[v] is not None:
            e = parent[v]
            path.append(e)
            v = e.tail
        return path[::-1]

    def cycle_basis(self) -> list[list[Edge]]:
        """One closed walk per edge outside a BFS spanning tree."""
        if not self.is_connected():
            raise DisconnectedGraphError("cycle basis requested for a disconnected graph")
        parent, used = self._spanning_tree()
        cycles = []
        for e in self.edges:
            if e.id in used:
                continue
            to_tail = self._tree_path(parent, e.tail)
            to_head = self._tree_path(parent, e.head)
            walk = to_tail + [e] + [-f for f in reversed(to_head)]
            cycles.append(_drop_backtracks(walk))
        return cycles

    def laplacian(self) -> list[list[int]]:
        """Integer Laplacian ``D - A`` in vertex order; parallel edges add up."""
        index = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        lap = [[0] * n for _ in range(n)]
        for e in self.edges:
            i, j = index[e.tail], index[e.head]
            lap[i][i] += 1
            lap[j][j] += 1
            lap[i][j] -= 1
            lap[j][i] -= 1
        return lap

    def to_document(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
        }

    @classmethod
    def from_document(cls, doc: Mapping) -> DualGraph:
        try:
            vertices = doc["vertices"]
            edges = [(e["id"], e["tail"], e["head"]) for e in doc["edges"]]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"graph document is missing field {exc}") from None
        return cls(vertices, edges)


def _drop_backtracks(walk: list[Edge]) -> list[Edge]:
    out: list[Edge] = []
    for e in walk:
        if out and out[-1] == -e:
            out.pop()
        else:
            out.append(e)
    while len(out) > 1 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


class _Values:
    """Shared plumbing for cochains and vertex functions."""

    graph: DualGraph
    values: Mapping[str, PadicNumber]
    p: int

    def _set(self, graph: DualGraph, values: Mapping[str, PadicNumber], p: int | None) -> None:
        primes = {v.p for v in values.values()}
        if p is not None:
            primes.add(p)
        if len(primes) != 1:
            raise GraphError("values must share a single prime" if primes else "prime is required when there are no values")
        self.graph = graph
        self.values = MappingProxyType(dict(values))
        self.p = primes.pop()

    def _combine(self, other, op):
        if other.graph != self.graph:
            raise GraphError("operands live on different graphs")
        return type(self)(self.graph, {k: op(v, other.values[k]) for k, v in self.values.items()}, self.p)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return type(self)(self.graph, {k: -v for k, v in self.values.items()}, self.p)

    def scale(self, x):
        return type(self)(self.graph, {k: v * x for k, v in self.values.items()}, self.p)

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return other.graph == self.graph and all(v == other.values[k] for k, v in self.values.items())

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())


class Cochain(_Values):
    """An antisymmetric function on oriented edges."""

    def __init__(self, graph: DualGraph, values: Mapping[str, PadicNumber], p: int | None = None):
        ids = {e.id for e in graph.edges}
        if set(values) != ids:
            missing, extra = ids - set(values), set(values) - ids
            raise GraphError(f"cochain values do not match edges (missing {sorted(missing)}, extra {sorted(extra)})")
        self._set(graph, {e.id: values[e.id] for e in graph.edges}, p)

    @classmethod
    def zero(cls, graph: DualGraph, p: int) -> Cochain:
        return cls(graph, {e.id: PadicNumber.exact_zero(p) for e in graph.edges}, p)

    def __getitem__(self, e: Edge | str) -> PadicNumber:
        if isinstance(e, str):
            return self.values[e]
        value = self.values[e.id]
        return -value if e.reversed else value

    def __repr__(self) -> str:
        return f"Cochain({ {k: str(v) for k, v in self.values.items()} })"


class VertexFunction(_Values):
    def __init__(self, graph: DualGraph, values: Mapping[str, PadicNumber], p: int | None = None):
        if set(values) != set(graph.vertices):
            raise GraphError("vertex function must be defined on every vertex")
        self._set(graph, {v: values[v] for v in graph.vertices}, p)

    @classmethod
    def zero(cls, graph: DualGraph, p: int) -> VertexFunction:
        return cls(graph, {v: PadicNumber.exact_zero(p) for v in graph.vertices}, p)

    def __getitem__(self, v: str) -> PadicNumber:
        return self.values[v]

    def __repr__(self) -> str:
        return f"VertexFunction({ {k: str(v) for k, v in self.values.items()} })"


def coboundary(gamma: VertexFunction) -> Cochain:
    return Cochain(gamma.graph, {e.id: gamma[e.head] - gamma[e.tail] for e in gamma.graph.edges}, gamma.p)


def divergence(c: Cochain) -> VertexFunction:
    """Sum of ``c`` over the oriented edges leaving each vertex."""
    g = c.graph
    out = {v: PadicNumber.exact_zero(c.p) for v in g.vertices}
    for e in g.edges:
        out[e.tail] = out[e.tail] + c[e]
        out[e.head] = out[e.head] - c[e]
    return VertexFunction(g, out, c.p)


def is_harmonic(c: Cochain) -> bool:
    """Zero divergence everywhere (to the tracked precision)."""
    return divergence(c).is_zero()


def adjugate_and_determinant(matrix: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """Fraction-free Gauss-Jordan on ``[M | I]``.

    Every division is exact over the integers; the left block ends as
    ``det(M) * I`` and the right block as ``adj(M)``.
    """
    n = len(matrix)
    rows = [list(map(int, matrix[i])) + [int(i == j) for j in range(n)] for i in range(n)]
    prev = 1
    sign = 1
    for k in range(n):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return [[0] * n for _ in range(n)], 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        piv = rows[k][k]
        for i in range(n):
            if i == k:
                continue
            a = rows[i][k]
            rows[i] = [(piv * rows[i][j] - a * rows[k][j]) // prev for j in range(2 * n)]
        prev = piv
    det = sign * prev
    # after the sweep every diagonal entry equals the last pivot
    adj = [[sign * x for x in row[n:]] for row in rows]
    return adj, det


class Decomposition(NamedTuple):
    harmonic: Cochain
    gamma: VertexFunction


def decompose(c: Cochain) -> Decomposition:
    """Split ``c = harmonic + d(gamma)`` with ``gamma`` vanishing at the first vertex."""
    g = c.graph
    if not g.is_connected():
        raise DisconnectedGraphError("decomposition requires a connected graph")
    p = c.p
    div = divergence(c)
    # div(d gamma) = -L gamma, and the harmonic part has zero divergence
    rest = g.vertices[1:]
    lap = g.laplacian()
    reduced = [row[1:] for row in lap[1:]]
    gamma = {g.vertices[0]: PadicNumber.exact_zero(p)}
    if rest:
        adj, det = adjugate_and_determinant(reduced)
        rhs = [-div[v] for v in rest]
        for i, v in enumerate(rest):
            acc = PadicNumber.exact_zero(p)
            for j, b in enumerate(rhs):
                if adj[i][j]:
                    acc = acc + b * Fraction(adj[i][j], det)
            gamma[v] = acc
    gamma_fn = VertexFunction(g, gamma, p)
    return Decomposition(c - coboundary(gamma_fn), gamma_fn)


def cycle_sum(c: Cochain, cycle: Sequence[Edge]) -> PadicNumber:
    """Sum of ``c`` along a closed walk."""
    if not cycle:
        raise GraphError("empty walk")
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        if a.head != b.tail:
            raise GraphError(f"walk is not closed: {a} is followed by {b}")
    total = PadicNumber.exact_zero(c.p)
    for e in cycle:
        total = total + c[e]
    return total


def is_exact(c: Cochain) -> bool:
    return all(cycle_sum(c, cyc).is_zero() for cyc in c.graph.cycle_basis())


def subdivide(g: DualGraph, m: int) -> tuple[DualGraph, dict[str, list[Edge]]]:
    """Replace every edge by a consistently oriented path of ``m`` edges.

    Fresh vertices are named ``<edge>~k`` and sub-edges ``<edge>.k``; original
    vertices keep their order at the front of the vertex list.
    """
    if m < 1:
        raise GraphError("subdivision factor must be a positive integer")
    if m == 1:
        return g, {e.id: [e] for e in g.edges}
    vertices = list(g.vertices)
    edges: list[Edge] = []
    edge_map: dict[str, list[Edge]] = {}
    for e in g.edges:
        path = [e.tail] + [f"{e.id}~{k}" for k in range(1, m)] + [e.head]
        vertices.extend(path[1:-1])
        subs = [Edge(f"{e.id}.{k + 1}", path[k], path[k + 1]) for k in range(m)]
        edges.extend(subs)
        edge_map[e.id] = subs
    return DualGraph(vertices, edges), edge_map


def lift_cochain(
    c: Cochain,
    subdivided: DualGraph,
    edge_map: Mapping[str, Sequence[Edge]],
    distribution: Mapping[str, Sequence[PadicNumber]],
) -> Cochain:
    """Spread each ``c(e)`` over the sub-path of ``e`` as prescribed by ``distribution``."""
    values: dict[str, PadicNumber] = {}
    for e in c.graph.edges:
        subs = edge_map[e.id]
        parts = list(distribution[e.id])
        if len(parts) != len(subs):
            raise GraphError(f"edge {e.id!r} needs {len(subs)} values, got {len(parts)}")
        total = PadicNumber.exact_zero(c.p)
        for x in parts:
            total = total + x
        if total != c[e]:
            raise GraphError(f"distribution for {e.id!r} sums to {total}, expected {c[e]}")
        for sub, x in zip(subs, parts):
            values[sub.id] = x
    return Cochain(subdivided, values, c.p)


def even_distribution(c: Cochain, m: int) -> dict[str, list[PadicNumber]]:
    return {eid: [v / m] * m for eid, v in c.values.items()}


# -- documents -------------------------------------------------------------


def _dump(doc: object) -> str:
    return json.dumps(doc, indent=2)


def cochain_to_document(c: Cochain, *, inline_graph: bool = True) -> dict:
    doc: dict = {}
    if inline_graph:
        doc["graph"] = c.graph.to_document()
    doc["values"] = {k: str(v) for k, v in c.values.items()}
    return doc


def cochain_from_document(doc: Mapping, ctx: PadicContext, base_dir: Path | None = None) -> Cochain:
    graph_doc = doc.get("graph") if isinstance(doc, Mapping) else None
    if graph_doc is None:
        raise ParseError("cochain document is missing field 'graph'")
    if isinstance(graph_doc, str):
        path = Path(graph_doc)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            graph_doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read graph document {str(path)!r}: {exc}") from None
    graph = DualGraph.from_document(graph_doc)
    raw = doc.get("values")
    if not isinstance(raw, Mapping):
        raise ParseError("cochain document is missing field 'values'")
    values = {}
    for k, v in raw.items():
        try:
            values[k] = ctx(str(v) if not isinstance(v, str) else v)
        except ParseError as exc:
            raise ParseError(f"values.{k}: {exc}") from None
    return Cochain(graph, values, ctx.p)


def vertex_function_to_document(f: VertexFunction) -> dict:
    return {k: str(v) for k, v in f.values.items()}


def decomposition_to_document(d: Decomposition) -> dict:
    return {
        "harmonic": {k: str(v) for k, v in d.harmonic.values.items()},
        "gamma": vertex_function_to_document(d.gamma),
    }
