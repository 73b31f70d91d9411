"""Command-line front end: ``ltlfrag classify | check | gadget | selftest``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .clones import classify_clone
from .fastcheck.dispatch import dispatch, route
from .fastcheck.table import Classification, classify_problem
from .formula import (
    FormulaError,
    declared_functions,
    format_declarations,
    fragment_of,
    parse_declarations,
    parse_formula,
    print_formula,
)
from .gadgets import SAT_FAMILIES, Cnf, GadgetError, exp_family, gadget_gap, parse_edge_list
from .kripke import Kripke, KripkeError, Lasso, validate
from .semantics import Sat, UnsatUpTo, Verdict, check_bounded

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


@dataclass(frozen=True)
class RunReport:
    verdict: Verdict
    engine: str
    classification: Classification
    millis: float

    @property
    def witness(self) -> Lasso | None:
        return self.verdict.witness if isinstance(self.verdict, Sat) else None

    def to_dict(self) -> dict:
        match self.verdict:
            case Sat():
                status, bound = "sat", None
            case UnsatUpTo(bound=b):
                status, bound = "unsat-up-to", b
            case _:
                status, bound = "unsat", None
        w = self.witness
        return {
            "verdict": status,
            "bound": bound,
            "engine": self.engine,
            "classification": {
                "label": self.classification.label.value,
                "source": self.classification.source,
                "text": str(self.classification),
            },
            "witness": None if w is None else {"prefix": list(w.prefix), "cycle": list(w.cycle)},
            "millis": round(self.millis, 3),
        }


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_formula(path: str, decls: str | None):
    declarations = parse_declarations(_read(decls)) if decls else []
    return parse_formula(_read(path).strip(), declarations)


def _load_structure(path: str) -> Kripke:
    try:
        k = Kripke.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON ({exc})") from None
    errors = validate(k)
    if errors:
        raise CliError(f"{path}: " + "; ".join(errors))
    return k


# --------------------------------------------------------------------------


def cmd_classify(args) -> int:
    phi = _load_formula(args.formula, args.decls)
    sig = fragment_of(phi)
    cls = classify_problem(sig.temporal, sig.base)
    print(f"{cls}, clone {classify_clone(sig.base).value}")
    return 0


def run_check(phi, k: Kripke, engine: str = "auto", max_prefix: int | None = None,
              max_cycle: int | None = None) -> RunReport:
    sig = fragment_of(phi)
    cls = classify_problem(sig.temporal, sig.base)
    t0 = time.perf_counter()
    match engine:
        case "auto":
            routed = dispatch(phi, k, k.initial, max_prefix, max_cycle)
            verdict, used = routed.verdict, routed.engine
        case "fast":
            name = route(phi)
            if name is None:
                raise CliError(f"no fast engine for this fragment: {cls}")
            routed = dispatch(phi, k, k.initial)
            verdict, used = routed.verdict, name
        case "oracle":
            if max_prefix is None or max_cycle is None:
                raise CliError("--engine oracle needs --max-prefix and --max-cycle")
            verdict, used = check_bounded(phi, k, k.initial, max_prefix, max_cycle), "oracle"
        case _:
            raise CliError(f"unknown engine {engine!r}")
    return RunReport(verdict, used, cls, (time.perf_counter() - t0) * 1000)


def cmd_check(args) -> int:
    phi = _load_formula(args.formula, args.decls)
    k = _load_structure(args.structure)
    report = run_check(phi, k, args.engine, args.max_prefix, args.max_cycle)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        match report.verdict:
            case Sat():
                head = "Sat"
            case UnsatUpTo(bound=b):
                head = f"UnsatUpTo {b}"
            case _:
                head = "Unsat"
        print(f"{head}  engine={report.engine}  class={report.classification}"
              f"  {report.millis:.1f} ms")
        if args.witness and report.witness is not None:
            print(report.witness)
    return EXIT_SAT if report.verdict.is_sat else EXIT_UNSAT


GADGET_FAMILIES = tuple(SAT_FAMILIES) + ("gap-f", "gap-x", "gap-g", "exp")


def build_gadget(family: str, source: str):
    """``source`` is a file path or, for ``exp``, the index itself."""
    if family in SAT_FAMILIES:
        return SAT_FAMILIES[family](Cnf.from_dimacs(_read(source)))
    if family.startswith("gap-"):
        edges, a, b, vertices = parse_edge_list(_read(source))
        return gadget_gap(edges, a, b, family[-1].upper(), vertices)
    if family == "exp":
        text = source if not Path(source).is_file() else _read(source)
        try:
            i = int(text.strip())
        except ValueError:
            raise CliError(f"exp expects an integer index, got {text.strip()!r}") from None
        return exp_family(i)
    raise CliError(f"unknown family {family!r}")


def cmd_gadget(args) -> int:
    g = build_gadget(args.family, args.input)
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    Path(f"{prefix}.ltl").write_text(print_formula(g.formula) + "\n", encoding="utf-8")
    Path(f"{prefix}.json").write_text(g.structure.with_initial(g.start).dumps(), encoding="utf-8")
    written = [f"{prefix}.ltl", f"{prefix}.json"]
    extra = declared_functions(g.formula)
    if extra:
        Path(f"{prefix}.decl").write_text(format_declarations(extra), encoding="utf-8")
        written.append(f"{prefix}.decl")
    print(f"{g.family}: {len(g.structure.states)} states, {g.classification}")
    for w in written:
        print(f"wrote {w}")
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all(args.size, args.seed)
    failed = [r for r in results if not r.ok]
    for r in failed:
        for msg in r.failures[:3]:
            print(f"  {r.name}: {msg}")
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return 0 if not failed else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ltlfrag", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="complexity of the formula's fragment")
    c.add_argument("formula", help="formula file")
    c.add_argument("--decls", help="declarations file (name/arity = bits per line)")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("check", help="is there a path from the initial state satisfying the formula")
    c.add_argument("formula", help="formula file")
    c.add_argument("structure", help="structure file (JSON)")
    c.add_argument("--decls", help="declarations file")
    c.add_argument("--engine", choices=("auto", "fast", "oracle"), default="auto")
    c.add_argument("--max-prefix", type=int)
    c.add_argument("--max-cycle", type=int)
    c.add_argument("--witness", action="store_true", help="print the witness lasso")
    c.add_argument("--json", action="store_true", help="print a JSON report")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("gadget", help="write a reduction instance")
    c.add_argument("family", choices=GADGET_FAMILIES)
    c.add_argument("input", help="DIMACS file, edge-list file, or index for exp")
    c.add_argument("out_prefix")
    c.set_defaults(func=cmd_gadget)

    c = sub.add_parser("selftest", help="run the cross-check suites")
    c.add_argument("--size", choices=("small", "full"), default="small")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "max_prefix", None) is not None and args.max_prefix < 0:
        print("error: --max-prefix must be >= 0", file=sys.stderr)
        return EXIT_ERROR
    if getattr(args, "max_cycle", None) is not None and args.max_cycle < 1:
        print("error: --max-cycle must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (CliError, FormulaError, KripkeError, GadgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
