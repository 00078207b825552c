import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from vologodsky import (
    Cochain,
    DisconnectedGraphError,
    DualGraph,
    GraphError,
    PadicContext,
    VertexFunction,
    coboundary,
    cycle_sum,
    decompose,
    divergence,
    is_harmonic,
    lift_cochain,
    subdivide,
)
from vologodsky.acceptance import cycle_graph, random_connected_graph
from vologodsky.graphs import (
    adjugate_and_determinant,
    cochain_from_document,
    cochain_to_document,
    decomposition_to_document,
    even_distribution,
    is_exact,
)

C = PadicContext(5, 10)
THETA = DualGraph(["A", "B"], [("a", "A", "B"), ("b", "A", "B"), ("c", "A", "B")])


def cochain(g, values):
    return Cochain(g, {k: C(v) for k, v in values.items()}, 5)


def sympy_decomposition(g, values):
    """Least-structure oracle: solve for every h(e) and gamma(v) at once."""
    hs = {e.id: sympy.Symbol(f"h_{e.id}") for e in g.edges}
    gs = {v: sympy.Symbol(f"g_{v}") for v in g.vertices}
    eqs = [hs[e.id] + gs[e.head] - gs[e.tail] - values[e.id] for e in g.edges]
    for v in g.vertices:
        eqs.append(sum((hs[e.id] for e in g.edges if e.tail == v), 0)
                   - sum((hs[e.id] for e in g.edges if e.head == v), 0))
    eqs.append(gs[g.vertices[0]])
    sol = sympy.solve(eqs, list(hs.values()) + list(gs.values()), dict=True)
    assert len(sol) == 1
    to_frac = lambda x: Fraction(int(x.p), int(x.q))
    return ({k: to_frac(sol[0][s]) for k, s in hs.items()}, {k: to_frac(sol[0][s]) for k, s in gs.items()})


@st.composite
def graphs(draw, max_vertices=8, max_edges=16):
    return random_connected_graph(random.Random(draw(st.integers(0, 2**32))), max_vertices, max_edges)


# -- graph structure -----------------------------------------------------------


def test_edge_reversal():
    e = THETA.edge("a")
    assert (-e).tail == e.head and (-e).head == e.tail
    assert -(-e) == e


def test_graph_validation():
    with pytest.raises(GraphError):
        DualGraph(["A"], [("x", "A", "A")])
    with pytest.raises(GraphError):
        DualGraph(["A", "B"], [("x", "A", "B"), ("x", "B", "A")])
    with pytest.raises(GraphError):
        DualGraph(["A", "B"], [("x", "A", "C")])
    assert not DualGraph(["A", "B"], []).is_connected()


def test_laplacian_counts_parallel_edges():
    assert THETA.laplacian() == [[3, -3], [-3, 3]]


def test_cochain_antisymmetry():
    c = cochain(THETA, {"a": 1, "b": 2, "c": 3})
    for e in THETA.oriented_edges():
        assert c[-e] == -c[e]


# -- coboundary / divergence ---------------------------------------------------


def test_coboundary_examples():
    g = cycle_graph(4)
    const = VertexFunction(g, {v: C(7) for v in g.vertices})
    assert coboundary(const).is_zero()

    L, n = C(17), 4
    d = coboundary(VertexFunction(g, {str(v): L * v / n for v in range(n)}))
    assert all(d[f"e{v}"] == L / n for v in range(n - 1))
    assert d[f"e{n - 1}"] == -L * (n - 1) / n

    d = coboundary(VertexFunction(THETA, {"A": C.zero(), "B": C(4)}))
    assert all(d[k] == 4 for k in "abc")


def test_divergence_examples():
    g = cycle_graph(5)
    assert divergence(Cochain.zero(g, 5)).is_zero()
    assert divergence(cochain(g, {e.id: 3 for e in g.edges})).is_zero()
    div = divergence(cochain(THETA, {"a": 1, "b": 2, "c": 3}))
    assert div["A"] == 6 and div["B"] == -6


def test_is_harmonic_examples():
    g = cycle_graph(6)
    assert is_harmonic(cochain(g, {e.id: 11 for e in g.edges}))
    assert is_harmonic(Cochain.zero(g, 5))
    path = DualGraph(["a", "b", "c"], [("x", "a", "b"), ("y", "b", "c")])
    gamma = VertexFunction(path, {"a": C.zero(), "b": C(1), "c": C(5)})
    assert not is_harmonic(coboundary(gamma))


# -- decomposition -------------------------------------------------------------


def test_adjugate_matches_sympy():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 6)
        m = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        adj, det = adjugate_and_determinant(m)
        assert det == sympy.Matrix(m).det()
        if det:
            assert sympy.Matrix(adj) == sympy.Matrix(m).adjugate()


def test_theta_decomposition():
    h, gamma = decompose(cochain(THETA, {"a": 1, "b": 2, "c": 3}))
    assert [h[k] for k in "abc"] == [-1, 0, 1]
    assert gamma["A"].is_exact_zero() and gamma["B"] == 2
    assert all(coboundary(gamma)[k] == 2 for k in "abc")


@pytest.mark.parametrize("n", [3, 4, 5, 7, 10])
def test_ngon_decomposition(n):
    L = C(123)
    g = cycle_graph(n)
    c = Cochain(g, {e.id: (-L if e.id == f"e{n - 1}" else C.zero()) for e in g.edges})
    h, gamma = decompose(c)
    assert all(h[e] == -L / n for e in g.edges)
    assert all(gamma[str(v)] == L * v / n for v in range(n))
    assert cycle_sum(c, g.cycle_basis()[0]) == -L
    assert cycle_sum(h, g.cycle_basis()[0]) == -L


def test_zero_decomposition():
    h, gamma = decompose(Cochain.zero(THETA, 5))
    assert all(x.is_exact_zero() for x in h.values.values())
    assert all(x.is_exact_zero() for x in gamma.values.values())


def test_disconnected_graph_rejected():
    g = DualGraph(["a", "b", "c"], [("x", "a", "b")])
    with pytest.raises(DisconnectedGraphError):
        decompose(Cochain.zero(g, 5))


@given(graphs(), st.data())
@settings(max_examples=40, deadline=None)
def test_decomposition_properties(g, data):
    raw = {e.id: data.draw(st.integers(-30, 30)) for e in g.edges}
    c = cochain(g, raw)
    h, gamma = decompose(c)
    assert h + coboundary(gamma) == c
    assert is_harmonic(h)
    assert is_exact(c - h)
    assert gamma[g.vertices[0]].is_exact_zero()
    # idempotence
    h2, gamma2 = decompose(h)
    assert h2 == h and gamma2.is_zero()
    h3, gamma3 = decompose(coboundary(gamma))
    assert h3.is_zero() and gamma3 == gamma


@given(graphs(max_vertices=6, max_edges=10), st.data())
@settings(max_examples=15, deadline=None)
def test_decomposition_matches_sympy(g, data):
    raw = {e.id: data.draw(st.integers(-9, 9)) for e in g.edges}
    h, gamma = decompose(cochain(g, raw))
    h_ref, gamma_ref = sympy_decomposition(g, raw)
    assert all(h[k] == v for k, v in h_ref.items())
    assert all(gamma[k] == v for k, v in gamma_ref.items())


def test_cycle_sum_requires_closed_walk():
    g = cycle_graph(3)
    c = cochain(g, {"e0": 1, "e1": 2, "e2": 3})
    with pytest.raises(GraphError):
        cycle_sum(c, [g.edge("e0"), g.edge("e2")])
    assert cycle_sum(c, [g.edge("e0"), g.edge("e1"), g.edge("e2")]) == 6
    assert cycle_sum(c, [-g.edge("e2"), -g.edge("e1"), -g.edge("e0")]) == -6


@given(graphs())
def test_cycle_basis_walks_are_closed(g):
    for walk in g.cycle_basis():
        assert all(a.head == b.tail for a, b in zip(walk, walk[1:] + walk[:1]))
    assert len(g.cycle_basis()) == len(g.edges) - len(g.vertices) + 1


# -- subdivision -----------------------------------------------------------------


def test_subdivide_examples():
    g2, _ = subdivide(cycle_graph(4), 2)
    assert len(g2.vertices) == 8 and len(g2.edges) == 8
    assert all(len(g2.outgoing(v)) == 2 for v in g2.vertices)

    single = DualGraph(["A", "B"], [("e", "A", "B")])
    g3, emap = subdivide(single, 3)
    path = emap["e"]
    assert [x.tail for x in path] + [path[-1].head] == ["A", "e~1", "e~2", "B"]

    same, emap = subdivide(single, 1)
    assert same == single and emap == {"e": [single.edge("e")]}
    with pytest.raises(GraphError):
        subdivide(single, 0)


def test_lift_rejects_bad_distribution():
    c = cochain(THETA, {"a": 1, "b": 2, "c": 3})
    sub, emap = subdivide(THETA, 2)
    dist = even_distribution(c, 2)
    dist["a"] = [C(1), C(1)]
    with pytest.raises(GraphError):
        lift_cochain(c, sub, emap, dist)
    dist["a"] = [C(1)]
    with pytest.raises(GraphError):
        lift_cochain(c, sub, emap, dist)


def test_lift_preserves_cycle_sums():
    c = cochain(THETA, {"a": 1, "b": 2, "c": 3})
    sub, emap = subdivide(THETA, 3)
    for dist in (
        {k: [c[k], C.zero(), C.zero()] for k in "abc"},
        even_distribution(c, 3),
    ):
        lifted = lift_cochain(c, sub, emap, dist)
        for k in "abc":
            total = C.zero()
            for s in emap[k]:
                total = total + lifted[s]
            assert total == c[k]
        assert len(sub.cycle_basis()) == len(THETA.cycle_basis())


@given(graphs(max_vertices=6, max_edges=10), st.sampled_from([2, 3, 5]), st.data())
@settings(max_examples=25, deadline=None)
def test_harmonic_part_is_constant_along_subdivided_edges(g, m, data):
    c = cochain(g, {e.id: data.draw(st.integers(-30, 30)) for e in g.edges})
    h = decompose(c).harmonic
    sub, emap = subdivide(g, m)
    dist = {}
    for e in g.edges:
        parts = [C(data.draw(st.integers(-30, 30))) for _ in range(m - 1)]
        rest = c[e]
        for x in parts:
            rest = rest - x
        dist[e.id] = parts + [rest]
    h_sub, gamma_sub = decompose(lift_cochain(c, sub, emap, dist))
    for e in g.edges:
        values = [h_sub[s] for s in emap[e.id]]
        assert all(v == values[0] for v in values)
        # each of the m sub-annuli carries 1/m of the original harmonic value
        assert values[0] * m == h[e]
    gamma = decompose(c).gamma
    assert all(gamma_sub[v] == gamma[v] for v in g.vertices)


# -- documents -------------------------------------------------------------------


def test_cochain_document_round_trip(tmp_path):
    c = cochain(THETA, {"a": 1, "b": Fraction(2, 3), "c": -3})
    doc = json.loads(json.dumps(cochain_to_document(c)))
    assert cochain_from_document(doc, C) == c

    (tmp_path / "g.json").write_text(json.dumps(THETA.to_document()))
    doc = {"graph": "g.json", "values": {"a": "1", "b": "2", "c": "3"}}
    assert cochain_from_document(doc, C, tmp_path).graph == THETA


def test_decomposition_document_is_deterministic():
    c = cochain(THETA, {"a": 1, "b": 2, "c": 3})
    first = json.dumps(decomposition_to_document(decompose(c)))
    second = json.dumps(decomposition_to_document(decompose(c)))
    assert first == second
    assert list(json.loads(first)) == ["harmonic", "gamma"]
    assert json.loads(first)["harmonic"]["a"] == str(C(-1))
