"""Acceptance suite: one check function per exit criterion.

Each check returns a :class:`CriterionResult`; :func:`run_acceptance` runs them
all with a fixed seed so reports are reproducible.  The oracles used here are
deliberately independent of the code paths they check: a dense rational solve
of the full edge/vertex system for the decomposition, and exact rational
partial sums for the logarithm.
"""

from __future__ import annotations

import random
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .assembly import PrimitiveFamily, annulus_interpolate, annulus_values, normalize_primitives
from .errors import DisconnectedGraphError, PadicError, ReductionTypeError
from .graphs import Cochain, DualGraph, coboundary, cycle_sum, decompose, divergence, lift_cochain, subdivide
from .laurent import LaurentPolynomial, annulus_residue_dlog, in_reduced_form, lemma_check, root_valuation_counts
from .padic import LogBranch, PadicContext, PadicNumber, plog, teichmuller
from .tate import TateCurve, TatePoint, logq_closed_form, tate_cochain, vologodsky_log

FAULTS = ("corrupt-branch",)


@dataclass
class CriterionResult:
    number: int
    name: str
    budget: float
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)

    @property
    def passed(self) -> bool:
        return not self.failures and self.elapsed < self.budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.number}. {self.name}: {self.checks - len(self.failures)}/{self.checks} checks"
        if self.failures:
            text += f"; first failure: {self.failures[0]}"
        elif self.elapsed >= self.budget:
            text += f"; exceeded runtime budget of {self.budget:g}s"
        return text


def _timed(number: int, name: str, budget: float):
    def wrap(body: Callable[..., None]) -> Callable[..., CriterionResult]:
        def run(*args, **kwargs) -> CriterionResult:
            res = CriterionResult(number, name, budget)
            start = time.perf_counter()
            body(res, *args, **kwargs)
            res.elapsed = time.perf_counter() - start
            return res

        run.__name__ = body.__name__
        run.__doc__ = body.__doc__
        return run

    return wrap


# -- oracles ---------------------------------------------------------------


def _rational_solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Unique solution of a consistent, possibly overdetermined, rational system."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if len(pivots) != ncols:
        raise ValueError("system is not uniquely solvable")
    if any(row[-1] != 0 for row in aug[r:]):
        raise ValueError("system is inconsistent")
    sol = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        sol[col] = aug[i][-1]
    return sol


def brute_force_decomposition(
    g: DualGraph, values: dict[str, Fraction]
) -> tuple[dict[str, Fraction], dict[str, Fraction]]:
    """Solve ``h + d gamma = c``, ``div h = 0``, ``gamma(v0) = 0`` as one dense system."""
    E, V = list(g.edges), list(g.vertices)
    ne = len(E)
    col_v = {v: ne + i for i, v in enumerate(V)}
    rows, rhs = [], []
    for k, e in enumerate(E):
        row = [Fraction(0)] * (ne + len(V))
        row[k] = Fraction(1)
        row[col_v[e.head]] += 1
        row[col_v[e.tail]] -= 1
        rows.append(row)
        rhs.append(Fraction(values[e.id]))
    for v in V:
        row = [Fraction(0)] * (ne + len(V))
        for k, e in enumerate(E):
            if e.tail == v:
                row[k] += 1
            if e.head == v:
                row[k] -= 1
        rows.append(row)
        rhs.append(Fraction(0))
    pin = [Fraction(0)] * (ne + len(V))
    pin[col_v[V[0]]] = Fraction(1)
    rows.append(pin)
    rhs.append(Fraction(0))
    sol = _rational_solve(rows, rhs)
    return ({e.id: sol[k] for k, e in enumerate(E)}, {v: sol[col_v[v]] for v in V})


def _mod_pn(x: Fraction, p: int, n: int) -> int:
    """Residue of a p-integral rational modulo ``p**n``."""
    num, den = x.numerator, x.denominator
    j = 0
    while den % p == 0:
        den //= p
        j += 1
    if num % p**j:
        raise ValueError("value is not p-integral")
    return (num // p**j) * pow(den, -1, p**n) % p**n


def series_log_oracle(u: int, p: int, n: int, terms: int | None = None) -> int:
    """``log`` of the unit ``u`` modulo ``p**n`` from exact rational partial sums."""
    mod = p**n
    w = u % mod
    while True:  # Frobenius iteration converges to the Teichmuller lift
        nxt = pow(w, p, mod)
        if nxt == w:
            break
        w = nxt
    x = u * pow(w, -1, mod) % mod - 1
    terms = terms or 3 * n + 10
    total = Fraction(0)
    for k in range(1, terms + 1):
        total += Fraction((-1) ** (k + 1) * x**k, k)
    return _mod_pn(total, p, n)


# -- random instances ------------------------------------------------------


def random_connected_graph(rng: random.Random, max_vertices: int = 8, max_edges: int = 16) -> DualGraph:
    n = rng.randint(2, max_vertices)
    names = [f"v{i}" for i in range(n)]
    rng.shuffle(names)
    edges = []
    for i in range(1, n):
        j = rng.randrange(i)
        a, b = (names[i], names[j]) if rng.random() < 0.5 else (names[j], names[i])
        edges.append((a, b))
    for _ in range(rng.randint(0, max_edges - len(edges))):
        a, b = rng.sample(names, 2)
        edges.append((a, b))
    rng.shuffle(edges)
    return DualGraph(names, [(f"e{k}", a, b) for k, (a, b) in enumerate(edges)])


def cycle_graph(n: int) -> DualGraph:
    return DualGraph([str(v) for v in range(n)], [(f"e{v}", str(v), str((v + 1) % n)) for v in range(n)])


def _random_distribution(rng: random.Random, ctx: PadicContext, total: PadicNumber, m: int) -> list[PadicNumber]:
    parts = [ctx(rng.randint(-50, 50)) for _ in range(m - 1)]
    rest = total
    for x in parts:
        rest = rest - x
    parts.append(rest)
    rng.shuffle(parts)
    return parts


def random_admissible_laurent(rng: random.Random, p: int) -> LaurentPolynomial:
    """Exponents in [-5, 5], no root with valuation in (0, 1)."""
    if rng.random() < 0.5:
        d = rng.randint(0, 4)
        roots = [rng.choice([1, -1, 2, 3, 7]) * Fraction(p) ** rng.choice([-1, 0, 1, 2]) for _ in range(d)]
        shift = rng.randint(-5, 5 - d)
        return LaurentPolynomial.from_roots(p, roots, shift)
    while True:
        support = rng.sample(range(-5, 6), rng.randint(1, 5))
        f = LaurentPolynomial(p, {
            i: rng.choice([1, -1]) * rng.choice([u for u in range(1, 3 * p) if u % p]) * p ** rng.randint(0, 4)
            for i in support
        })
        if not any(0 < v < 1 for v, _ in root_valuation_counts(f)):
            return f


def random_reduced_laurent(rng: random.Random, p: int) -> LaurentPolynomial:
    """Integral in ``xy = p``, divisible by neither ``x`` nor ``y``, with ``a_0`` a unit."""
    coeffs = {0: rng.choice([u for u in range(1, 3 * p) if u % p])}
    for i in rng.sample([i for i in range(-5, 6) if i], rng.randint(1, 6)):
        coeffs[i] = rng.choice([1, -1, 2]) * p ** (max(-i, 0) + rng.choice([0, 0, 1, 2]))
    return LaurentPolynomial(p, coeffs)


# -- criteria --------------------------------------------------------------


@_timed(1, "Tate pipeline equals log_q and is branch independent", 1.0)
def check_tate_pipeline(res: CriterionResult, fault: str | None = None) -> None:
    ctx = PadicContext(5, 10)
    branches = [ctx.branch(b) for b in (0, 1, 17)]
    for q in (125, 250):
        E = TateCurve(ctx(q))

        def F(z: PadicNumber, branch: LogBranch) -> PadicNumber:
            cochain = None
            if fault == "corrupt-branch":
                cochain = tate_cochain(E, LogBranch(branch.branch_constant + 1))
            return vologodsky_log(E, TatePoint(z), branch, cochain=cochain)

        points = [ctx(6), ctx(30), ctx(6) * E.q]
        for z in points:
            results = []
            for b in branches:
                value = F(z, b)
                results.append(value)
                res.check(value == logq_closed_form(E, TatePoint(z), b),
                          f"q={q}, z={z}, {b}: pipeline differs from closed form")
            res.check(all(r == results[0] and r.abs_prec == results[0].abs_prec for r in results),
                      f"q={q}, z={z}: value depends on the branch")
        for b in branches:
            res.check(F(E.q, b).is_zero(), f"q={q}, {b}: F(q) != 0")
            for z in points:
                for w in points:
                    res.check(F(z * w, b) == F(z, b) + F(w, b), f"q={q}, {b}: F(zw) != F(z) + F(w)")


@_timed(2, "harmonic + exact decomposition", 5.0)
def check_decomposition(res: CriterionResult, seed: int = 0, graphs_count: int = 200) -> None:
    ctx = PadicContext(5, 10)
    for n in range(3, 8):
        g = cycle_graph(n)
        L = plog(ctx(250), LogBranch.iwasawa(5))
        c = Cochain(g, {e.id: (-L if e.id == f"e{n - 1}" else ctx.zero()) for e in g.edges})
        h, gamma = decompose(c)
        res.check(all(h[e] == -L / n for e in g.edges), f"{n}-gon: harmonic part is not -L/n")
        res.check(all(gamma[str(v)] == L * v / n for v in range(n)), f"{n}-gon: gamma(v) != L v / n")
    rng = random.Random(seed)
    for k in range(graphs_count):
        g = random_connected_graph(rng)
        raw = {e.id: Fraction(rng.randint(-20, 20)) for e in g.edges}
        c = Cochain(g, {eid: ctx(v) for eid, v in raw.items()}, 5)
        h, gamma = decompose(c)
        res.check(h + coboundary(gamma) == c, f"graph {k}: reconstruction failed")
        res.check(divergence(h).is_zero(), f"graph {k}: harmonic part has nonzero divergence")
        exact = c - h
        res.check(all(cycle_sum(exact, cyc).is_zero() for cyc in g.cycle_basis()),
                  f"graph {k}: exact part has a nonzero cycle sum")
        h_ref, gamma_ref = brute_force_decomposition(g, raw)
        res.check(all(h[eid] == h_ref[eid] for eid in raw) and all(gamma[v] == gamma_ref[v] for v in g.vertices),
                  f"graph {k}: disagrees with the rational oracle")


@_timed(3, "subdivision invariance of the harmonic part", 5.0)
def check_subdivision(res: CriterionResult, seed: int = 0, graphs_count: int = 20) -> None:
    ctx = PadicContext(5, 10)
    rng = random.Random(seed + 3)
    L = plog(ctx(250), LogBranch.iwasawa(5))
    cases = [Cochain(cycle_graph(4), {"e0": ctx.zero(), "e1": ctx.zero(), "e2": ctx.zero(), "e3": -L}, 5)]
    for _ in range(graphs_count):
        g = random_connected_graph(rng)
        cases.append(Cochain(g, {e.id: ctx(rng.randint(-20, 20)) for e in g.edges}, 5))
    for k, c in enumerate(cases):
        h = decompose(c).harmonic
        for m in (2, 3, 5):
            sub, edge_map = subdivide(c.graph, m)
            dist = {e.id: _random_distribution(rng, ctx, c[e], m) for e in c.graph.edges}
            h_sub = decompose(lift_cochain(c, sub, edge_map, dist)).harmonic
            for e in c.graph.edges:
                path = [h_sub[s] for s in edge_map[e.id]]
                res.check(all(x == path[0] for x in path), f"case {k}, m={m}, {e.id}: not constant along sub-path")
                total = PadicNumber.exact_zero(5)
                for x in path:
                    total = total + x
                res.check(total == h[e], f"case {k}, m={m}, {e.id}: sub-path total != original harmonic value")


@_timed(4, "residue of dlog f is the coboundary of the component orders", 5.0)
def check_residue_lemma(res: CriterionResult, seed: int = 0, count: int = 200, reduced: int = 50) -> None:
    p = 5
    rng = random.Random(seed + 4)
    for k in range(count):
        f = random_admissible_laurent(rng, p)
        r = lemma_check(f)
        res.check(r.equal and r.residue == r.boundary, f"instance {k}: {f} gives {r}")
    for k in range(reduced):
        f = random_reduced_laurent(rng, p)
        res.check(in_reduced_form(f), f"reduced instance {k}: generator produced {f}")
        vals = f.coefficient_valuations()
        res.check(vals.get(0) == 0, f"reduced instance {k}: v(a_0) != 0")
        res.check(annulus_residue_dlog(f) == 0 and lemma_check(f) == (0, 0, True),
                  f"reduced instance {k}: residue of {f} is not 0")


@_timed(5, "p-adic logarithm and Teichmuller lifts", 2.0)
def check_log_and_teichmuller(res: CriterionResult, seed: int = 0) -> None:
    p, n = 5, 10
    ctx = PadicContext(p, n)
    iwasawa = LogBranch.iwasawa(p)
    rng = random.Random(seed + 5)

    def unit() -> int:
        while True:
            u = rng.randrange(1, p**n)
            if u % p:
                return u

    for _ in range(100):
        u = unit()
        got = plog(ctx(u), iwasawa)
        want = series_log_oracle(u, p, n)
        res.check(got == PadicNumber.approximate(want, p, n) and got.abs_prec >= n,
                  f"log({u}) = {got}, oracle gives {want}")
    for _ in range(100):
        branch = ctx.branch(rng.randint(0, 30))
        a = ctx(unit() * Fraction(p) ** rng.randint(-3, 3))
        b = ctx(unit() * Fraction(p) ** rng.randint(-3, 3))
        res.check(plog(a * b, branch) == plog(a, branch) + plog(b, branch), f"log({a}*{b}) is not additive")
    res.check(teichmuller(PadicContext(5, 3)(2), 3).identical(PadicNumber(5, 0, 57, 3)), "teichmuller(2) != 57 mod 125")
    for _ in range(50):
        t = teichmuller(ctx(unit()), n)
        res.check(t**p == t, f"teichmuller lift {t} is not fixed by Frobenius")


@_timed(6, "annulus interpolation matches normalized primitives", 2.0)
def check_interpolation(res: CriterionResult, seed: int = 0, families: int = 50) -> None:
    ctx = PadicContext(5, 10)
    rng = random.Random(seed + 6)
    for k in range(families):
        g = random_connected_graph(rng, max_vertices=6, max_edges=9)
        raw = Cochain(g, {e.id: ctx(rng.randint(-30, 30)) for e in g.edges}, 5)
        fam = PrimitiveFamily(g, raw)
        norm = normalize_primitives(fam)
        samples = {e.id: ctx(rng.randint(-99, 99)) for e in g.edges}
        for e in g.edges:
            tail, head = annulus_values(fam, norm, e, samples[e.id])
            res.check(annulus_interpolate(tail, norm.harmonic[e], 1) == head,
                      f"family {k}, {e.id}: t = 1 does not reach the head primitive")
        m = rng.choice([2, 3, 5])
        sub, edge_map = subdivide(g, m)
        dist = {e.id: _random_distribution(rng, ctx, raw[e], m) for e in g.edges}
        sub_norm = normalize_primitives(PrimitiveFamily(sub, lift_cochain(raw, sub, edge_map, dist)))
        for e in g.edges:
            tail, _ = annulus_values(fam, norm, e, samples[e.id])
            raw_value = samples[e.id]
            for j, s in enumerate(edge_map[e.id][:-1], start=1):
                raw_value = raw_value + dist[e.id][j - 1]
                sub_value = raw_value - sub_norm.offsets[s.head]
                res.check(annulus_interpolate(tail, norm.harmonic[e], Fraction(j, m)) == sub_value,
                          f"family {k}, {e.id}: t = {j}/{m} disagrees with the subdivided family")


@_timed(7, "scope limits are enforced, not glossed over", 1.0)
def check_scope(res: CriterionResult) -> None:
    ctx = PadicContext(5, 10)
    for q in (5, 25):
        try:
            TateCurve(ctx(q))
        except ReductionTypeError:
            res.check(True, "")
        else:
            res.check(False, f"Tate curve with v(q) < 3 accepted (q = {q})")
    try:
        PadicContext(2)
    except PadicError:
        res.check(True, "")
    else:
        res.check(False, "p = 2 accepted")
    g = DualGraph(["a", "b", "c", "d"], [("e0", "a", "b"), ("e1", "c", "d")])
    try:
        decompose(Cochain.zero(g, 5))
    except DisconnectedGraphError:
        res.check(True, "")
    else:
        res.check(False, "disconnected graph decomposed")


CHECKS: Sequence[Callable[..., CriterionResult]] = (
    check_tate_pipeline,
    check_decomposition,
    check_subdivision,
    check_residue_lemma,
    check_log_and_teichmuller,
    check_interpolation,
    check_scope,
)


def run_acceptance(seed: int = 0, fault: str | None = None) -> list[CriterionResult]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    results = []
    for check in CHECKS:
        if check is check_tate_pipeline:
            results.append(check(fault=fault))
        elif check is check_scope:
            results.append(check())
        else:
            results.append(check(seed=seed))
    return results


def format_report(results: Sequence[CriterionResult]) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines)
