"""Command-line front end.

Machine output (one JSON document or one p-adic literal) goes to stdout, and
diagnostics go to stderr.  Exit status is 0 on success, 1 on a domain error
(a violated precondition) and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

from .acceptance import FAULTS, format_report, run_acceptance
from .assembly import PrimitiveFamily, annulus_interpolate, normalize_primitives
from .errors import PadicError, ParseError, VologodskyError
from .graphs import (
    DualGraph,
    cochain_from_document,
    decompose,
    decomposition_to_document,
    subdivide,
    vertex_function_to_document,
)
from .laurent import LaurentPolynomial, annulus_residue_dlog, lemma_check, newton_polygon
from .padic import DEFAULT_PREC, LogBranch, PadicContext, PadicNumber, plog, teichmuller
from .tate import TateCurve, TatePoint, tate_integrate


def _emit(doc: object) -> None:
    if isinstance(doc, str):
        sys.stdout.write(doc + "\n")
    else:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _context(args: argparse.Namespace) -> PadicContext:
    if args.prime is None:
        raise ParseError("--prime is required for this subcommand")
    try:
        return PadicContext(args.prime, args.prec)
    except PadicError as exc:
        raise ParseError(f"--prime/--prec: {exc}") from None


def _literal(ctx: PadicContext, text: str, flag: str) -> PadicNumber:
    try:
        return ctx(text)
    except ParseError as exc:
        raise ParseError(f"{flag}: {exc}") from None


def _branch(ctx: PadicContext, args: argparse.Namespace) -> LogBranch:
    if args.branch is None:
        raise ParseError("--branch is required wherever a logarithm is taken (use 0 for the Iwasawa branch)")
    return LogBranch(_literal(ctx, args.branch, "--branch"))


def _read_document(source: str) -> tuple[object, Path | None]:
    try:
        if source == "-":
            return json.load(sys.stdin), None
        path = Path(source)
        return json.loads(path.read_text()), path.parent
    except OSError as exc:
        raise ParseError(f"cannot read {source!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source!r} is not valid JSON: {exc}") from None


def _laurent(source: str) -> LaurentPolynomial:
    doc, _ = _read_document(source)
    return LaurentPolynomial.from_document(doc)


# -- subcommands -----------------------------------------------------------


def cmd_log(args: argparse.Namespace) -> None:
    ctx = _context(args)
    _emit(str(plog(_literal(ctx, args.z, "--z"), _branch(ctx, args))))


def cmd_teichmuller(args: argparse.Namespace) -> None:
    ctx = _context(args)
    _emit(str(teichmuller(_literal(ctx, args.z, "--z"), args.prec)))


def cmd_decompose(args: argparse.Namespace) -> None:
    ctx = _context(args)
    doc, base = _read_document(args.document)
    _emit(decomposition_to_document(decompose(cochain_from_document(doc, ctx, base))))


def cmd_normalize(args: argparse.Namespace) -> None:
    ctx = _context(args)
    doc, base = _read_document(args.document)
    c = cochain_from_document(doc, ctx, base)
    offsets, harmonic = normalize_primitives(PrimitiveFamily(c.graph, c))
    _emit({
        "offsets": vertex_function_to_document(offsets),
        "harmonic": {k: str(v) for k, v in harmonic.values.items()},
    })


def cmd_subdivide(args: argparse.Namespace) -> None:
    doc, _ = _read_document(args.document)
    graph, edge_map = subdivide(DualGraph.from_document(doc), args.m)
    _emit({"graph": graph.to_document(), "edge_map": {k: [e.id for e in v] for k, v in edge_map.items()}})


def cmd_interpolate(args: argparse.Namespace) -> None:
    ctx = _context(args)
    try:
        t = Fraction(args.t)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"--t: cannot parse {args.t!r} as a rational") from None
    base = _literal(ctx, args.base, "--base")
    harmonic = _literal(ctx, args.harmonic, "--harmonic")
    _emit(str(annulus_interpolate(base, harmonic, t)))


def cmd_newton(args: argparse.Namespace) -> None:
    _emit(newton_polygon(_laurent(args.document)).to_document())


def cmd_residue(args: argparse.Namespace) -> None:
    _emit({"residue": annulus_residue_dlog(_laurent(args.document))})


def cmd_lemma_check(args: argparse.Namespace) -> None:
    _emit(lemma_check(_laurent(args.document)).to_document())


def cmd_tate_integrate(args: argparse.Namespace) -> None:
    ctx = _context(args)
    branch = _branch(ctx, args)
    E = TateCurve(_literal(ctx, args.q, "--q"))
    result = tate_integrate(E, TatePoint(_literal(ctx, args.z, "--z")), branch)
    _emit(result.to_document() if args.explain else str(result.value))


def cmd_selftest(args: argparse.Namespace) -> int:
    results = run_acceptance(seed=args.seed, fault=args.inject_fault)
    for r in results:
        print(f"criterion {r.number}: {r.elapsed:.3f}s (budget {r.budget:g}s)", file=sys.stderr)
    _emit(format_report(results))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, help="the prime p")
    common.add_argument("--prec", type=int, default=DEFAULT_PREC, help="digits of precision for literals")
    common.add_argument("--branch", help="log(p) for the branch of the logarithm; 0 is the Iwasawa branch")

    parser = argparse.ArgumentParser(prog="vologodsky", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    add("log", cmd_log, "p-adic logarithm on a chosen branch").add_argument("--z", required=True)
    add("teichmuller", cmd_teichmuller, "Teichmuller lift of a unit").add_argument("--z", required=True)
    add("decompose", cmd_decompose, "harmonic + exact decomposition of a cochain").add_argument("document")
    add("normalize", cmd_normalize, "offsets making local primitives glue harmonically").add_argument("document")
    sp = add("subdivide", cmd_subdivide, "subdivide every edge of a graph")
    sp.add_argument("document")
    sp.add_argument("--m", type=int, required=True)
    sp = add("interpolate", cmd_interpolate, "glued primitive at valuation t on an annulus")
    sp.add_argument("--base", required=True)
    sp.add_argument("--harmonic", required=True)
    sp.add_argument("--t", required=True)
    add("newton", cmd_newton, "Newton polygon of a Laurent polynomial").add_argument("document")
    add("residue", cmd_residue, "residue of dlog f on the standard annulus").add_argument("document")
    add("lemma-check", cmd_lemma_check, "compare the residue with the component orders").add_argument("document")
    sp = add("tate-integrate", cmd_tate_integrate, "abelian integral of dz/z on a Tate curve")
    sp.add_argument("--q", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--explain", action="store_true", help="emit the cochain, harmonic part and gamma")
    sp = add("selftest", cmd_selftest, "run the acceptance suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--inject-fault", choices=FAULTS, help="negative control: deliberately break a check")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        status = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (VologodskyError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
