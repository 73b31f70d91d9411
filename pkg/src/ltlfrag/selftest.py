"""Cross-check suites shared by ``ltlfrag selftest`` and the acceptance tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable

from .clones import CloneId, classify_clone, is_read_once, represent_connective
from .fastcheck.engines import ENGINES, _fx_terms, _gx_terms, _x_terms, normal_form, run_automaton
from .fastcheck.table import TABLE, Label
from .formula import (
    AND,
    CONST0,
    CONST1,
    NOT,
    OR,
    XOR,
    Apply,
    BoolFun,
    Formula,
    Temporal,
    Var,
    eval_bool,
    size,
)
from .formula import F as F_
from .formula import S as S_
from .gadgets import SAT_FAMILIES, Cnf, exp_family
from .kripke import Kripke, check_lasso
from .randgen import BASES, MAJ, NAND, random_formula, random_kripke, random_truth_table
from .semantics import check_bounded, eval_lasso, minimal_witness


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" {self.detail}" if self.detail else ""
        return (f"{status} {self.name}: {self.total - len(self.failures)}/{self.total}"
                f" in {self.seconds:.1f}s{extra}")


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def run(*args, **kwargs) -> SuiteResult:
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# --------------------------------------------------------------------------
# Engines against the oracle

ENGINE_FRAGMENTS = {
    "fgx_n": ("FGX", "N"),
    "fx_v": ("FX", "V"),
    "gx_e": ("GX", "E"),
    "fg_v": ("FG", "V"),
    "x_l": ("X", "L"),
    "s_only": ("S", "BF"),
    "sf_v": ("SF", "V"),
}


def engine_bounds(name: str, phi: Formula, k: Kripke) -> tuple[int, int]:
    """Oracle bounds under which the oracle is complete for the engine's fragment."""
    w = len(k.states)
    match name:
        case "fx_v":
            return w + max([t[1] for t in _fx_terms(phi)] + [0]), w
        case "gx_e":
            return w + max([t[1] for t in _gx_terms(phi)] + [0]), w
        case "fg_v":
            return (size(phi) + 1) * (w + 1), w
        case "x_l":
            return max([i for i, _ in _x_terms(phi)[1]] + [0]) + w, w
        case "fgx_n":
            return normal_form(phi).m + 2 * w, w
        case "s_only":
            return w, w
        case "sf_v":
            return 2 * w, w
    raise KeyError(name)


@_timed
def suite_engine(name: str, n: int = 1000, seed: int = 0, max_states: int = 6, depth: int = 4,
                 engine=None) -> SuiteResult:
    res = SuiteResult(f"engine {name}")
    ops, clone = ENGINE_FRAGMENTS[name]
    run = engine or ENGINES[name]
    rng = random.Random(seed)
    for _ in range(n):
        k = random_kripke(rng, max_states=max_states)
        phi = random_formula(rng, ops, BASES[clone], depth)
        res.total += 1
        try:
            verdict = run(phi, k, k.initial)
        except Exception as exc:  # noqa: BLE001
            res.fail(f"{phi} on {k.to_dict()}: engine raised {type(exc).__name__}: {exc}")
            continue
        if verdict.is_sat:
            try:
                check_lasso(k, verdict.witness, k.initial)
                good = eval_lasso(phi, k, verdict.witness)
            except Exception as exc:  # noqa: BLE001
                good = False
                res.fail(f"{phi}: bad witness ({exc})")
                continue
            if not good:
                res.fail(f"{phi}: witness {verdict.witness} does not satisfy the formula")
                continue
        p, c = engine_bounds(name, phi, k)
        oracle = check_bounded(phi, k, k.initial, p, c)
        if oracle.is_sat != verdict.is_sat:
            res.fail(f"{phi} on {k.to_dict()}: engine {verdict}, oracle {oracle}")
    return res


# --------------------------------------------------------------------------
# Gadgets against brute-force SAT


def _canonical(clauses: Iterable[frozenset[int]], n: int) -> tuple:
    forms = []
    for flips in product((1, -1), repeat=n):
        flipped = sorted(tuple(sorted(flips[abs(l) - 1] * l for l in c)) for c in clauses)
        forms.append(tuple(flipped))
    return min(forms)


def exhaustive_cnfs(max_vars: int = 3, max_clauses: int = 3, max_width: int = 3) -> list[Cnf]:
    """Every CNF up to literal-sign symmetry, each variable used, no tautological clause."""
    out = []
    for n in range(1, max_vars + 1):
        clauses = []
        for width in range(1, min(max_width, n) + 1):
            for vs in combinations(range(1, n + 1), width):
                for signs in product((1, -1), repeat=width):
                    clauses.append(frozenset(s * v for s, v in zip(signs, vs)))
        seen = set()
        for m in range(1, max_clauses + 1):
            for chosen in combinations(clauses, m):
                if {abs(l) for c in chosen for l in c} != set(range(1, n + 1)):
                    continue
                key = _canonical(chosen, n)
                if key in seen:
                    continue
                seen.add(key)
                out.append(Cnf(n, key))
    return out


def random_cnfs(n: int, seed: int = 0, max_vars: int = 4, max_clauses: int = 4) -> list[Cnf]:
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        nv = rng.randint(1, max_vars)
        clauses = []
        for _ in range(rng.randint(1, max_clauses)):
            vs = rng.sample(range(1, nv + 1), rng.randint(1, min(3, nv)))
            clauses.append(tuple(rng.choice((1, -1)) * v for v in vs))
        out.append(Cnf(nv, tuple(clauses)))
    return out


@_timed
def suite_gadgets(cnfs: list[Cnf], families: Iterable[str] = tuple(SAT_FAMILIES)) -> SuiteResult:
    res = SuiteResult("gadgets vs SAT")
    for cnf in cnfs:
        truth = cnf.brute_force_sat()
        for fam in families:
            g = SAT_FAMILIES[fam](cnf)
            w = len(g.structure.states)
            res.total += 1
            verdict = check_bounded(g.formula, g.structure, g.start, w + 2, w)
            if verdict.is_sat != truth:
                res.fail(f"{fam} on {cnf.clauses}: SAT={truth}, oracle {verdict}")
    res.detail = f"({len(cnfs)} CNFs)"
    return res


# --------------------------------------------------------------------------
# Clone classification against an explicit closure


def _binary_closure(base: Iterable[BoolFun]) -> frozenset[tuple[int, ...]]:
    """Binary functions generated from projections, constants and ``base``."""
    rows = list(product((0, 1), repeat=2))
    funs = {(0, 0, 0, 0), (1, 1, 1, 1), tuple(r[0] for r in rows), tuple(r[1] for r in rows)}
    base = [f for f in base if f.arity > 0]
    fresh = set(funs)
    # semi-naive: only argument tuples touching a newly found function
    while fresh and len(funs) < 16:
        found = set()
        for f in base:
            for args in product(sorted(funs), repeat=f.arity):
                if not any(a in fresh for a in args):
                    continue
                out = []
                for i in range(4):
                    idx = 0
                    for a in args:
                        idx = (idx << 1) | a[i]
                    out.append(f.table[idx])
                found.add(tuple(out))
        fresh = found - funs
        funs |= fresh
    return frozenset(funs)


_REFERENCE_BASES = {
    CloneId.I: [],
    CloneId.N: [NOT],
    CloneId.E: [AND],
    CloneId.V: [OR],
    CloneId.M: [AND, OR],
    CloneId.L: [XOR],
    CloneId.BF: [AND, NOT],
}
_REFERENCE = {_binary_closure(b): c for c, b in _REFERENCE_BASES.items()}


def closure_clone(base: Iterable[BoolFun]) -> CloneId:
    return _REFERENCE[_binary_closure(base)]


@_timed
def suite_clones(n: int = 500, seed: int = 0) -> SuiteResult:
    res = SuiteResult("clone classifier")
    for clone, base in _REFERENCE_BASES.items():
        res.total += 1
        got = classify_clone(base + [CONST0, CONST1])
        if got != clone:
            res.fail(f"reference base of {clone.value} classified as {got.value}")
    rng = random.Random(seed)
    for _ in range(n):
        base = [random_truth_table(rng, rng.randint(1, 3), f"f{i}") for i in range(rng.randint(1, 3))]
        res.total += 1
        got, want = classify_clone(base), closure_clone(base)
        if got != want:
            res.fail(f"{base}: classifier {got.value}, closure {want.value}")
    goals = {"not": NOT, "and": AND, "or": OR}
    for base, target in (([NAND], "not"), ([MAJ], "and"), ([MAJ], "or")):
        res.total += 1
        phi = represent_connective(base, target)
        goal = goals[target]
        names = [f"x{i + 1}" for i in range(goal.arity)]
        table = tuple(int(eval_bool(phi, dict(zip(names, r))))
                      for r in product((0, 1), repeat=goal.arity))
        if table != goal.table or not is_read_once(phi):
            res.fail(f"{target} over {[f.name for f in base]}: {phi}")
    return res


# --------------------------------------------------------------------------
# Exponentially long witnesses


@_timed
def suite_exp(max_i: int = 3, cap: int = 200) -> SuiteResult:
    res = SuiteResult("exponential witnesses")
    lengths = []
    for i in range(1, max_i + 1):
        g = exp_family(i)
        w = minimal_witness(g.formula, g.structure, g.start, cap=cap)
        lengths.append(None if w is None else len(w))
    res.detail = f"lengths {lengths}"
    res.total = max_i
    if None in lengths:
        res.fail(f"no witness found within {cap}")
        return res
    for a, b in zip(lengths, lengths[1:]):
        if not b > a:
            res.fail(f"not strictly increasing: {lengths}")
    if max_i >= 3 and lengths[2] < 2 * lengths[1]:
        res.fail(f"does not double from i=2 to i=3: {lengths}")
    return res


# --------------------------------------------------------------------------
# Since at the start of a path


@_timed
def suite_since(n: int = 500, seed: int = 0) -> SuiteResult:
    res = SuiteResult("since triviality")
    rng = random.Random(seed)
    for _ in range(n):
        k = random_kripke(rng)
        alpha = random_formula(rng, "FGX", BASES["BF"], 2)
        beta = random_formula(rng, "FGX", BASES["BF"], 2)
        p, c = 2 * len(k.states), len(k.states)
        pairs = ((S_(alpha, beta), beta), (F_(S_(alpha, beta)), F_(beta)))
        for lhs, rhs in pairs:
            res.total += 1
            a = check_bounded(lhs, k, k.initial, p, c).is_sat
            b = check_bounded(rhs, k, k.initial, p, c).is_sat
            if a != b:
                res.fail(f"{lhs} vs {rhs} on {k.to_dict()}")
    return res


# --------------------------------------------------------------------------
# The F/G/negation automaton against semantic signatures

PROBES = (
    Kripke(["a", "b"], [("a", "b"), ("b", "b")], {"a": ["y"]}),
    Kripke(["a", "b"], [("a", "b"), ("b", "b")], {"b": ["y"]}),
    Kripke(["a", "b"], [("a", "b"), ("b", "a")], {"a": ["y"]}),
    Kripke(["a", "b", "c"], [("a", "a"), ("a", "b"), ("b", "c"), ("c", "c"), ("c", "b")],
           {"a": ["y"], "c": ["y"]}),
)


def _chain(ops: str) -> Formula:
    phi: Formula = Var("y")
    for op in reversed(ops):
        phi = Apply(NOT, (phi,)) if op == "!" else Temporal(op, phi)
    return phi


def signature(phi: Formula) -> tuple[bool, ...]:
    """Existential verdicts of ``phi`` and its negation from every probe state."""
    out = []
    for k in PROBES:
        w = len(k.states)
        for s in k.states:
            for f in (phi, Apply(NOT, (phi,))):
                out.append(check_bounded(f, k, s, 2 * w, w).is_sat)
    return tuple(out)


@_timed
def suite_automaton(n: int = 500, seed: int = 0, max_len: int = 7) -> SuiteResult:
    res = SuiteResult("normal-form automaton")
    rng = random.Random(seed)
    strings = {"".join(rng.choice("FG!") for _ in range(rng.randint(0, max_len))) for _ in range(n)}
    strings |= {"", "!"}
    by_class: dict[tuple[str, bool], tuple[bool, ...]] = {}
    sig_cache: dict[str, tuple[bool, ...]] = {}
    for ops in sorted(strings):
        res.total += 1
        cls = run_automaton(ops)
        canon = ("!" if cls[1] else "") + cls[0]
        sig = signature(_chain(ops))
        want = sig_cache.setdefault(canon, signature(_class_formula(*cls)))
        if sig != want:
            res.fail(f"{ops or 'y'} classified as {canon or 'y'} but differs semantically")
        by_class.setdefault(cls, sig)
    sigs = {_class_key(c): signature(_class_formula(*c)) for c in _ALL_CLASSES}
    res.total += 1
    if len(set(sigs.values())) != len(_ALL_CLASSES):
        res.fail("probe family does not separate the ten classes")
    res.detail = f"({len(strings)} strings, {len(by_class)} classes seen)"
    return res


_ALL_CLASSES = [(p, neg) for p in ("", "F", "G", "FG", "GF") for neg in (False, True)]


def _class_key(cls: tuple[str, bool]) -> str:
    return ("!" if cls[1] else "") + cls[0]


def _class_formula(prefix: str, negated: bool) -> Formula:
    """``P ~y``: the negation sits on the variable."""
    leaf: Formula = Apply(NOT, (Var("y"),)) if negated else Var("y")
    for op in reversed(prefix):
        leaf = Temporal(op, leaf)
    return leaf


# --------------------------------------------------------------------------
# Table structure


@_timed
def suite_table() -> SuiteResult:
    res = SuiteResult("table")
    cells = [c for row in TABLE.values() for c in row.values()]
    res.total = 3
    if len(TABLE) != 16:
        res.fail(f"{len(TABLE)} rows")
    if sum(c.label != Label.Open for c in cells) != 106:
        res.fail("populated cell count is not 106")
    blanks = [r for r, row in TABLE.items() if row[CloneId.L].label == Label.Open]
    if blanks != ["G", "F", "FG", "FX", "GX", "FGX"]:
        res.fail(f"open cells in rows {blanks}")
    return res


SIZES = {
    "small": dict(engine=150, cnf_random=40, exhaustive=(2, 3), clones=150, since=150, automaton=150, exp=3),
    "full": dict(engine=1000, cnf_random=200, exhaustive=(3, 3), clones=500, since=500, automaton=500, exp=3),
}


def run_all(size: str = "small", seed: int = 0, report: Callable[[str], None] = print) -> list[SuiteResult]:
    cfg = SIZES[size]
    results = [suite_table()]
    report(results[-1].line())
    for name in ENGINE_FRAGMENTS:
        results.append(suite_engine(name, cfg["engine"], seed))
        report(results[-1].line())
    nv, nc = cfg["exhaustive"]
    cnfs = exhaustive_cnfs(nv, nc) + random_cnfs(cfg["cnf_random"], seed)
    for suite in (lambda: suite_gadgets(cnfs), lambda: suite_clones(cfg["clones"], seed),
                  lambda: suite_exp(cfg["exp"]), lambda: suite_since(cfg["since"], seed),
                  lambda: suite_automaton(cfg["automaton"], seed)):
        results.append(suite())
        report(results[-1].line())
    return results
