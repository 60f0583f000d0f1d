"""Command-line front end.

Every subcommand reads JSON inputs, runs one library computation, and
writes a single JSON document to stdout (or --out).  Diagnostics go to
stderr.  Exit codes: 0 success, 1 mathematical violation, 2 usage or
parse error.  Output is deterministic: keys are sorted and rationals are
serialized as "a/b" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .cohomology import CohClass, coh_basis, is_class
from .constructions import blow_up, complete_graph, cycle_2valent, product
from .gkm_core import (
    GkmPair,
    GraphFormatError,
    ValidationReport,
    validate_axial,
    validate_connection,
)
from .localization import LevelCut, full_sweep, jk_pushforward
from .localization import integrate as integrate_class
from .morse_betti import (
    betti,
    betti_equality_report,
    betti_invariance_check,
    find_acyclic_xi,
    morse_inequalities,
    orient,
    positively_oriented_function,
)
from .polyalg import Covector, Polynomial, Vector, residue


class UsageError(Exception):
    """Unparseable or structurally invalid input; exits with status 2."""


def _parse_fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError) as err:
        raise UsageError(f"bad rational list {text!r}: {err}") from err


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise UsageError(f"{path} is not valid JSON: {err}") from err


def _load_pair(path: str) -> GkmPair:
    try:
        return GkmPair.from_json(_load_json(path))
    except GraphFormatError as err:
        raise UsageError(f"{path}: {err}") from err


def _load_class(path: str, pair: GkmPair) -> CohClass:
    try:
        cls = CohClass.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as err:
        raise UsageError(f"{path} is not a class file: {err}") from err
    ok, bad_edge = is_class(pair, cls.values)
    if not ok:
        raise ArithmeticError(f"input is not a class, compatibility fails on edge {bad_edge}")
    return cls


def _load_poly(path: str) -> Polynomial:
    try:
        return Polynomial.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as err:
        raise UsageError(f"{path} is not a polynomial file: {err}") from err


def _jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (Vector, Covector)):
        return [str(c) for c in obj]
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(doc, out: str | None) -> None:
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _xi_from(args, pair: GkmPair) -> Vector:
    if args.xi is None:
        return find_acyclic_xi(pair)
    xi = Vector(_parse_fractions(args.xi))
    if xi.n != pair.n:
        raise UsageError(f"--xi has {xi.n} coordinates, the pair needs {pair.n}")
    return xi


def cmd_validate(args):
    gpair = _load_pair(args.graph)
    report = validate_axial(gpair)
    violations = list(report.violations)
    if gpair.connection is not None:
        violations.extend(validate_connection(gpair, gpair.connection).violations)
    merged = ValidationReport(tuple(violations), report.valence)
    return merged.to_json(), merged.ok


def cmd_cohdim(args):
    gpair = _load_pair(args.graph)
    dims = {}
    for k in range(args.max_degree + 1):
        dim, classes = coh_basis(gpair, k)
        dims[str(k)] = dim
        if args.basis:
            outdir = Path(args.basis)
            outdir.mkdir(parents=True, exist_ok=True)
            for i, cls in enumerate(classes):
                path = outdir / f"deg{k}_{i}.json"
                path.write_text(
                    json.dumps(_jsonable(cls), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8",
                )
    return dims, True


def cmd_integrate(args):
    gpair = _load_pair(args.graph)
    cls = _load_class(args.cls, gpair)
    value = integrate_class(gpair, cls)
    return {"integral": value}, True


def cmd_residue(args):
    f = _load_poly(args.poly)
    alphas = [Covector(_parse_fractions(a)) for a in args.alpha or []]
    xi = Vector(_parse_fractions(args.xi))
    if xi.n != f.n or any(a.n != f.n for a in alphas):
        raise UsageError("xi, the covectors, and the polynomial must share one dimension")
    value = residue(f, alphas, xi, method=args.method)
    return {"residue": value}, True


def cmd_jk(args):
    gpair = _load_pair(args.graph)
    cls = _load_class(args.cls, gpair)
    xi = _xi_from(args, gpair)
    if args.sweep:
        doc = dict(full_sweep(gpair, xi, cls))
        doc["xi"] = xi
        return doc, True
    if args.c is None:
        raise UsageError("need either --c LEVEL or --sweep")
    phi = positively_oriented_function(gpair, xi)
    cut = LevelCut(xi, phi, Fraction(args.c))
    result = jk_pushforward(gpair, cut, cls)
    return {
        "c": cut.c,
        "degree": result.degree,
        "perVertexResidues": result.per_vertex_residues,
        "phi": phi,
        "polynomial": result.polynomial,
        "xi": xi,
    }, True


def cmd_betti(args):
    gpair = _load_pair(args.graph)
    doc = dict(betti_invariance_check(gpair, args.samples))
    if args.xi is not None:
        xi = Vector(_parse_fractions(args.xi))
        doc["sigma"] = orient(gpair, xi).sigma
        doc["bettiAtXi"] = betti(gpair, xi)
    return doc, doc["invariant"]


def cmd_morse(args):
    gpair = _load_pair(args.graph)
    xi = _xi_from(args, gpair)
    doc = dict(morse_inequalities(gpair, xi, args.max_degree))
    doc["xi"] = xi
    if args.l is not None:
        doc["equalityReport"] = betti_equality_report(gpair, args.l, args.max_degree)
    return doc, doc["ok"]


def cmd_blowup(args):
    gpair = _load_pair(args.graph)
    if args.vertex not in gpair.vertices:
        raise UsageError(f"vertex {args.vertex!r} is not in the graph")
    sharp, down = blow_up(gpair, args.vertex)
    return {"blowDown": down, "graph": sharp}, True


def cmd_product(args):
    a = _load_pair(args.graph)
    b = _load_pair(args.graph2)
    combined, report = product(a, b)
    return {"graph": combined, "report": report}, report.ok


def cmd_complete(args):
    alphas = [Covector(_parse_fractions(part)) for part in args.alphas.split(";")]
    gpair = complete_graph(alphas)
    return {"graph": gpair}, True


def cmd_cycle(args):
    a1 = Covector(_parse_fractions(args.a1))
    a2 = Covector(_parse_fractions(args.a2))
    gpair = cycle_2valent(args.count, a1, a2)
    return {"graph": gpair}, True


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON document to this path instead of stdout")

    parser = argparse.ArgumentParser(
        prog="gkmcalc",
        description="Exact computations on graphs with axial covectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    x = sub.add_parser("validate", parents=[common], help="check the axioms of a graph file")
    x.add_argument("graph")
    x.set_defaults(func=cmd_validate)

    x = sub.add_parser("cohdim", parents=[common], help="class-space dimensions by degree")
    x.add_argument("graph")
    x.add_argument("--max-degree", type=int, default=4)
    x.add_argument("--basis", help="directory for the basis class files")
    x.set_defaults(func=cmd_cohdim)

    x = sub.add_parser("integrate", parents=[common], help="push a class forward to a point")
    x.add_argument("graph")
    x.add_argument("--class", dest="cls", required=True, help="class JSON file")
    x.set_defaults(func=cmd_integrate)

    x = sub.add_parser("residue", parents=[common], help="residue of f over a product of covectors")
    x.add_argument("--poly", required=True, help="polynomial JSON file")
    x.add_argument("--alpha", action="append", help="denominator covector, repeatable, e.g. 1,0")
    x.add_argument("--xi", required=True, help="direction, e.g. 1,2")
    x.add_argument("--method", choices=("series", "formula"), default="series")
    x.set_defaults(func=cmd_residue)

    x = sub.add_parser("jk", parents=[common], help="level-cut pushforward, one level or a sweep")
    x.add_argument("graph")
    x.add_argument("--class", dest="cls", required=True, help="class JSON file")
    x.add_argument("--xi", help="direction; defaults to the first acyclic chamber")
    x.add_argument("--c", help="regular level, e.g. --c=-1/2")
    x.add_argument("--sweep", action="store_true", help="sweep every level and telescope")
    x.set_defaults(func=cmd_jk)

    x = sub.add_parser("betti", parents=[common], help="Betti histogram and chamber invariance")
    x.add_argument("graph")
    x.add_argument("--xi", help="also report sigma in this one chamber")
    x.add_argument("--samples", type=int, default=500)
    x.set_defaults(func=cmd_betti)

    x = sub.add_parser("morse", parents=[common], help="dimension bounds degree by degree")
    x.add_argument("graph")
    x.add_argument("--xi", help="direction; defaults to the first acyclic chamber")
    x.add_argument("--max-degree", type=int, default=6)
    x.add_argument("--l", type=int, help="also run the l-independence equality report")
    x.set_defaults(func=cmd_morse)

    x = sub.add_parser("blowup", parents=[common], help="blow up one vertex")
    x.add_argument("graph")
    x.add_argument("--vertex", required=True)
    x.set_defaults(func=cmd_blowup)

    x = sub.add_parser("product", parents=[common], help="product of two graph files")
    x.add_argument("graph")
    x.add_argument("graph2")
    x.set_defaults(func=cmd_product)

    x = sub.add_parser("complete", parents=[common], help="complete graph on given covectors")
    x.add_argument("--alphas", required=True, help="semicolon-separated covectors, e.g. 0,0;1,0;0,1")
    x.set_defaults(func=cmd_complete)

    x = sub.add_parser("cycle", parents=[common], help="2-valent cycle with the period-4 pattern")
    x.add_argument("--count", type=int, required=True, help="number of vertices, divisible by 4")
    x.add_argument("--a1", required=True, help="first covector, e.g. 1,0")
    x.add_argument("--a2", required=True, help="second covector, e.g. 0,1")
    x.set_defaults(func=cmd_cycle)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        doc, ok = args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except GraphFormatError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as err:
        print(f"violation: {err}", file=sys.stderr)
        return 1
    _emit(doc, args.out)
    return 0 if ok else 1
