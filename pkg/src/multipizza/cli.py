"""Command line: pizza | multipizza | equiv | verify | render.

Exit codes: 0 success (equiv: EQUIVALENT), 1 equiv NOT_EQUIVALENT or verify
exceedances, 2 input or usage error, 3 coefficient field failure, 4 internal
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .abstract import combinatorial_equiv
from .domain import DomainSpec, layout
from .errors import (CoefficientFieldFailure, InputError, MultipizzaError, NonGermError,
                     PolynomialSyntaxError, ZeroPolynomial)
from .multipizza import Multipizza, abstract_multipizza, build_multipizza
from .oracle import SamplePlan, verify_pizza
from .pizza import Pizza, compute_pizza
from .puiseux.newton import set_exponent_cap
from .puiseux.polynomial import Polynomial, parse_polynomial
from .render import render_svg
from .zones import minimal_cuts, zones_at

log = logging.getLogger("multipizza")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_FIELD, EXIT_INTERNAL = 0, 1, 2, 3, 4


@dataclass
class MultigermFile:
    functions: List[Polynomial]
    texts: List[str]
    domain: DomainSpec = field(default_factory=DomainSpec.quadrant)
    allow_reversal: bool = True
    permute_columns: bool = False
    truncation_budget: Optional[Fraction] = None


def _syntax_message(where: str, text: str, err: PolynomialSyntaxError) -> str:
    pointer = " " * (err.position or 0) + "^"
    return f"{where}: {err}\n  {text}\n  {pointer}"


def load_multigerm(path: str) -> MultigermFile:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("functions"), list) or not data["functions"]:
        raise InputError(f"{path}: expected an object with a non-empty 'functions' list")
    fs, texts = [], []
    for k, text in enumerate(data["functions"]):
        where = f"{path}: functions[{k}]"
        if not isinstance(text, str):
            raise InputError(f"{where}: expected a polynomial string")
        try:
            fs.append(parse_polynomial(text))
        except PolynomialSyntaxError as exc:
            raise InputError(_syntax_message(where, text, exc)) from exc
        except NonGermError as exc:
            raise InputError(f"{where}: NonGermError: {exc}") from exc
        texts.append(text)
    try:
        domain = DomainSpec.from_json(data.get("domain", "quadrant"))
    except (MultipizzaError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: invalid domain: {exc}") from exc
    opts = data.get("options", {}) or {}
    if not isinstance(opts, dict):
        raise InputError(f"{path}: 'options' must be an object")
    unknown = set(opts) - {"allow_reversal", "permute_columns", "truncation_budget"}
    if unknown:
        raise InputError(f"{path}: unknown options {sorted(unknown)}")
    budget = opts.get("truncation_budget")
    if budget is not None:
        try:
            budget = Fraction(str(budget))
        except ValueError as exc:
            raise InputError(f"{path}: truncation_budget must be a number") from exc
        if budget <= 0:
            raise InputError(f"{path}: truncation_budget must be positive")
    return MultigermFile(fs, texts, domain, bool(opts.get("allow_reversal", True)),
                         bool(opts.get("permute_columns", False)), budget)


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _apply_options(mf: MultigermFile) -> None:
    if mf.truncation_budget is not None:
        set_exponent_cap(mf.truncation_budget)


def load_decomposition(path: str):
    """A Pizza or Multipizza JSON file, told apart by the shape of its slices."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if data["slices"] and "columns" in data["slices"][0]:
            return Multipizza.from_json(data)
        return Pizza.from_json(data)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a pizza file ({exc})") from exc


# -- commands ----------------------------------------------------------------

def cmd_pizza(args) -> int:
    mf = load_multigerm(args.input)
    _apply_options(mf)
    if not 1 <= args.function <= len(mf.functions):
        raise InputError(f"--function must be between 1 and {len(mf.functions)}")
    f = mf.functions[args.function - 1]
    if args.debug_zones:
        L = layout(mf.domain, [f])
        for k, Z in enumerate(zones_at(L, minimal_cuts(L, [f]), [f])):
            print(f"zone {k}: {Z.describe()}", file=sys.stderr)
    P = compute_pizza(f, mf.domain)
    _emit(canonical_json(P.to_json()), args.out)
    return EXIT_OK


def cmd_multipizza(args) -> int:
    mf = load_multigerm(args.input)
    _apply_options(mf)
    M = build_multipizza(mf.functions, mf.domain, minimize=not args.no_minimize)
    data = M.to_json()
    data["abstract"] = abstract_multipizza(M).to_json()
    _emit(canonical_json(data), args.out)
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = load_multigerm(args.file_a), load_multigerm(args.file_b)
    if a.domain != b.domain:
        raise InputError("the two files describe different domains")
    if len(a.functions) != len(b.functions):
        raise InputError("the two files have different numbers of functions")
    _apply_options(a)
    allow_reversal = a.allow_reversal and not args.oriented
    permute = a.permute_columns or args.permute_columns
    A = abstract_multipizza(build_multipizza(a.functions, a.domain))
    B = abstract_multipizza(build_multipizza(b.functions, b.domain))
    cert = combinatorial_equiv(A, B, allow_reversal=allow_reversal, permute_columns=permute)
    if cert.alignment is not None and not cert.replay(A, B):
        raise MultipizzaError("certificate does not replay")
    data = cert.to_json()
    data["A"], data["B"] = A.to_json(), B.to_json()
    data["options"] = {"allow_reversal": allow_reversal, "permute_columns": permute}
    sys.stdout.write(canonical_json(data))
    return EXIT_OK if cert.equivalent else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.samples < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if args.tolerance <= 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return EXIT_INPUT
    mf = load_multigerm(args.input)
    _apply_options(mf)
    if args.pizza:
        P = load_decomposition(args.pizza)
        if len(P.slices[0].columns) != len(mf.functions):
            raise InputError("the pizza file and the multigerm file disagree on the number of functions")
    else:
        P = build_multipizza(mf.functions, mf.domain)
    started = time.perf_counter()
    report = verify_pizza(P, mf.functions, SamplePlan(tolerance=args.tolerance), args.samples)
    log.info("verify: %d checks in %.2fs", len(report.checks), time.perf_counter() - started)
    sys.stdout.write(canonical_json(report.to_json()))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_render(args) -> int:
    mf = load_multigerm(args.input)
    _apply_options(mf)
    M = build_multipizza(mf.functions, mf.domain)
    _emit(render_svg(M), args.svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multipizza",
                                description="Pizzas and multipizzas of real plane function germs.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pizza", help="minimal pizza of one function")
    sp.add_argument("input")
    sp.add_argument("--function", type=int, default=1, metavar="INDEX", help="1-based index (default 1)")
    sp.add_argument("--out")
    sp.add_argument("--debug-zones", action="store_true", help="print the perfect zones to stderr")
    sp.set_defaults(run=cmd_pizza)

    sp = sub.add_parser("multipizza", help="minimal multipizza of all functions")
    sp.add_argument("input")
    sp.add_argument("--out")
    sp.add_argument("--no-minimize", action="store_true")
    sp.set_defaults(run=cmd_multipizza)

    sp = sub.add_parser("equiv", help="decide multi-K-Lipschitz equivalence")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp.add_argument("--oriented", action="store_true", help="do not allow reversing the orientation")
    sp.add_argument("--permute-columns", action="store_true")
    sp.set_defaults(run=cmd_equiv)

    sp = sub.add_parser("verify", help="numerical cross-check of the multipizza")
    sp.add_argument("input")
    sp.add_argument("--samples", type=int, default=5)
    sp.add_argument("--tolerance", type=float, default=0.05)
    sp.add_argument("--pizza", help="check this pizza or multipizza JSON instead of a fresh one")
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("render", help="schematic SVG fan of the multipizza")
    sp.add_argument("input")
    sp.add_argument("--svg", required=True)
    sp.set_defaults(run=cmd_render)
    return p


def _configure_logging() -> None:
    level = os.environ.get("MULTIPIZZA_LOG", "").strip().upper()
    if level:
        logging.basicConfig(level=getattr(logging, level, logging.DEBUG), stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (InputError, ZeroPolynomial) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CoefficientFieldFailure as exc:
        print(f"coefficient field failure: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except MultipizzaError as exc:
        print(f"internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
