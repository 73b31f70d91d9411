"""Reduction gadgets: 3SAT and graph accessibility instances as model-checking problems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .clones import eliminate_constants, rebase
from .fastcheck.table import Classification, classify_problem
from .formula import (
    NOT,
    TRUE,
    Apply,
    BoolFun,
    Formula,
    Var,
    disjunction,
    fragment_of,
)
from .formula import F as F_
from .formula import G as G_
from .formula import S as S_
from .formula import U as U_
from .formula import X as X_
from .kripke import Kripke


class GadgetError(ValueError):
    pass


@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 1:
            raise GadgetError("a CNF needs at least one variable")
        if not clauses:
            raise GadgetError("a CNF needs at least one clause")
        for c in clauses:
            if not c:
                raise GadgetError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise GadgetError(f"literal {lit} out of range 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)

    def brute_force_sat(self) -> bool:
        n = self.num_vars
        return any(self.satisfied_by([(bits >> i) & 1 == 1 for i in range(n)]) for bits in range(1 << n))

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> "Cnf":
        header = None
        literals: list[int] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("c") or line.startswith("%"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise GadgetError(f"bad DIMACS header: {line!r}")
                header = (int(parts[2]), int(parts[3]))
                continue
            try:
                literals += [int(t) for t in line.split()]
            except ValueError:
                raise GadgetError(f"bad DIMACS line: {line!r}") from None
        if header is None:
            raise GadgetError("missing DIMACS header 'p cnf <vars> <clauses>'")
        clauses, cur = [], []
        for lit in literals:
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
        if cur:
            clauses.append(tuple(cur))
        if len(clauses) != header[1]:
            raise GadgetError(f"header announces {header[1]} clauses, found {len(clauses)}")
        return cls(header[0], tuple(clauses))


@dataclass(frozen=True)
class GadgetInstance:
    formula: Formula
    structure: Kripke
    start: str
    family: str

    @property
    def classification(self) -> Classification:
        sig = fragment_of(self.formula)
        return classify_problem(sig.temporal, sig.base)


def _lit(v: int, positive: bool) -> str:
    return f"x{v}" if positive else f"nx{v}"


def _literal_layer(cnf: Cnf, v: int) -> tuple[str, str]:
    return _lit(v, True), _lit(v, False)


def _clause_marks(cnf: Cnf, v: int, positive: bool) -> set[str]:
    sign = 1 if positive else -1
    return {f"b{j}" for j, c in enumerate(cnf.clauses, 1) if sign * v in c}


# --------------------------------------------------------------------------
# Until


def _k_structure(cnf: Cnf) -> Kripke:
    """The chain q1..qm, then one literal per variable, then the sink s."""
    m, n = cnf.num_clauses, cnf.num_vars
    qs = [f"q{i}" for i in range(1, m + 1)]
    lits = [l for v in range(1, n + 1) for l in _literal_layer(cnf, v)]
    states = qs + lits + ["s"]
    every_a = {f"a{j}" for j in range(1, m + 1)}
    labels = {q: {f"a{j}" for j in range(1, i + 1)} for i, q in enumerate(qs, 1)}
    for v in range(1, n + 1):
        for pos in (True, False):
            labels[_lit(v, pos)] = every_a | _clause_marks(cnf, v, pos)
    edges = [(qs[i], qs[i + 1]) for i in range(m - 1)]
    edges += [(qs[-1], l) for l in _literal_layer(cnf, 1)]
    for v in range(1, n):
        edges += [(u, w) for u in _literal_layer(cnf, v) for w in _literal_layer(cnf, v + 1)]
    edges += [(l, "s") for l in _literal_layer(cnf, n)]
    edges.append(("s", "s"))
    return Kripke(states, edges, labels, "q1")


def gadget_u(cnf: Cnf) -> GadgetInstance:
    phi: Formula = TRUE
    for i in range(1, cnf.num_clauses + 1):
        phi = U_(phi, U_(Var(f"a{i}"), Var(f"b{i}")))
    return GadgetInstance(phi, _k_structure(cnf), "q1", "u")


# --------------------------------------------------------------------------
# Always and next


def gadget_gx_v(cnf: Cnf) -> GadgetInstance:
    m, n = cnf.num_clauses, cnf.num_vars
    qs = [f"q{i}" for i in range(1, m + 1)]
    chain = lambda l: [f"{l}_{j}" for j in range(m)]  # noqa: E731
    states = list(qs)
    labels: dict[str, set[str]] = {q: set() for q in qs}
    edges = [(qs[i], qs[i + 1]) for i in range(m - 1)]
    for v in range(1, n + 1):
        for pos in (True, False):
            c = chain(_lit(v, pos))
            states += c
            for s in c:
                labels[s] = {"c"}
            labels[c[0]] |= _clause_marks(cnf, v, pos)
            edges += list(zip(c, c[1:]))
            if v < n:
                edges += [(c[-1], chain(l)[0]) for l in _literal_layer(cnf, v + 1)]
            else:
                edges.append((c[-1], "z"))
    edges += [(qs[-1], chain(l)[0]) for l in _literal_layer(cnf, 1)]
    states.append("z")
    labels["z"] = {"c"}
    edges.append(("z", "z"))

    psi: Formula = Var("c")
    for i in range(m, 0, -1):
        phi_i = disjunction(X_(Var(f"b{i}"), k * m - (i - 1)) for k in range(1, n + 1))
        psi = G_(disjunction([phi_i, G_(psi)]))
    return GadgetInstance(psi, Kripke(states, edges, labels, "q1"), "q1", "gxv")


# --------------------------------------------------------------------------
# Since


def _h_structure(cnf: Cnf) -> Kripke:
    """Reverse the until gadget's edges, drop the loop at s, and end in the sink t."""
    k = _k_structure(cnf)
    edges = [(v, u) for u, v in k.edges if (u, v) != ("s", "s")]
    edges += [("q1", "t"), ("t", "t")]
    labels = {s: set(k.labels[s]) for s in k.states}
    for v in range(1, cnf.num_vars + 1):
        for l in _literal_layer(cnf, v):
            labels[l].add("d")
    labels["s"] = {"d"}
    labels["t"] = {"e"}
    return Kripke(("s",) + tuple(x for x in k.states if x != "s") + ("t",), edges, labels, "s")


def _phi_since(cnf: Cnf) -> Formula:
    """Holds at q1 iff the literals on the path satisfy every clause.

    The chain runs from clause 1 outwards, mirroring the until gadget; anchoring
    it on the clause side keeps the d-labelled literals from satisfying it early.
    """
    phi: Formula = Var("d")
    for i in range(1, cnf.num_clauses + 1):
        phi = S_(phi, S_(Var(f"a{i}"), Var(f"b{i}")))
    return phi


def _always_part(cnf: Cnf) -> Formula:
    # true on the d-prefix, then demands the chain at every q state
    return S_(Var("e"), S_(_phi_since(cnf), Var("d")))


def gadget_gs(cnf: Cnf) -> GadgetInstance:
    return GadgetInstance(G_(_always_part(cnf)), _h_structure(cnf), "s", "gs")


def gadget_xs(cnf: Cnf) -> GadgetInstance:
    # n + m steps from s reach q1
    steps = cnf.num_vars + cnf.num_clauses
    return GadgetInstance(X_(_phi_since(cnf), steps), _h_structure(cnf), "s", "xs")


def gadget_sf_neg(cnf: Cnf) -> GadgetInstance:
    phi = Apply(NOT, (F_(Apply(NOT, (_always_part(cnf),))),))
    return GadgetInstance(phi, _h_structure(cnf), "s", "sfneg")


# --------------------------------------------------------------------------
# Graph accessibility


def parse_edge_list(text: str) -> tuple[list[tuple[str, str]], str, str, list[str]]:
    """Header line ``a b``, then one ``u v`` edge per line. Returns (edges, a, b, vertices)."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise GadgetError("empty edge list")
    for r in rows:
        if len(r) != 2:
            raise GadgetError(f"expected two names per line, got {' '.join(r)!r}")
    (a, b), body = rows[0], rows[1:]
    edges = [(u, v) for u, v in body]
    vertices = list(dict.fromkeys([a, b] + [x for e in edges for x in e]))
    return edges, a, b, vertices


def gadget_gap(edges: Iterable[tuple[str, str]], a: str, b: str, flavor: str,
               vertices: Iterable[str] | None = None) -> GadgetInstance:
    edges = [(str(u), str(v)) for u, v in edges]
    vs = list(dict.fromkeys(list(vertices or []) + [x for e in edges for x in e]))
    if a not in vs or b not in vs:
        raise GadgetError(f"endpoints {a!r}, {b!r} must be vertices")
    match flavor:
        case "F" | "X":
            closure = set(edges) | {(v, v) for v in vs}
            k = Kripke(vs, closure, {b: {"y"}}, a)
            phi = F_(Var("y")) if flavor == "F" else X_(Var("y"), len(vs))
            return GadgetInstance(phi, k, a, f"gap-{flavor.lower()}")
        case "G":
            return _gap_layered(edges, vs, a, b)
    raise GadgetError(f"unknown flavor {flavor!r}")


def _gap_layered(edges, vs, a, b) -> GadgetInstance:
    n = len(vs)
    node = lambda v, i: f"{v}^{i}"  # noqa: E731
    states = [node(v, i) for i in range(1, n + 1) for v in vs]
    layered = [(node(u, i), node(v, i + 1)) for i in range(1, n) for u, v in edges]
    layered += [(node(b, i), node(a, 1)) for i in range(1, n + 1)]
    has_succ = {u for u, _ in layered}
    labels = {s: {"y"} for s in states}
    for s in list(states):
        if s not in has_succ:
            dead = f"{s}~"
            states.append(dead)
            layered += [(s, dead), (dead, dead)]
    start = node(a, 1)
    return GadgetInstance(G_(Var("y")), Kripke(states, layered, labels, start), start, "gap-g")


# --------------------------------------------------------------------------
# Exponentially long witnesses


def _exp_block(i: int):
    """States, edges, labels, entry and exit of G_i."""
    x1, x2, x3 = (f"x{i}_{j}" for j in (1, 2, 3))
    if i == 1:
        labels = {x1: {"b1"}, x2: {"a1"}, x3: {"a1", "c1"}}
        return [x1, x2, x3], [(x1, x2), (x2, x3), (x3, x1)], labels, x1, x3
    states, edges, labels, entry, exit_ = _exp_block(i - 1)
    every_a = {f"a{j}" for j in range(1, i + 1)}
    for s in states:
        labels[s] = labels[s] | {f"b{i}"}
    labels |= {x1: set(every_a), x2: {f"a{i}"}, x3: every_a | {f"c{i}"}}
    edges = edges + [(x1, entry), (exit_, x2), (x2, x3), (x3, x1)]
    return [x1, x2, x3] + states, edges, labels, x1, x3


def exp_formula(i: int) -> Formula:
    phi = U_(U_(Var("a1"), Var("b1")), Var("c1"))
    for j in range(2, i + 1):
        phi = U_(U_(U_(Var(f"a{j}"), phi), Var(f"b{j}")), Var(f"c{j}"))
    return phi


def exp_family(i: int, cap: int = 5) -> GadgetInstance:
    if i < 1:
        raise GadgetError("index must be at least 1")
    if i > cap:
        raise GadgetError(f"index {i} exceeds the cap {cap}")
    states, edges, labels, entry, exit_ = _exp_block(i)
    states = states + ["sink"]
    edges = edges + [(exit_, "sink"), ("sink", "sink")]
    return GadgetInstance(exp_formula(i), Kripke(states, edges, labels, entry), entry, "exp")


# --------------------------------------------------------------------------


def rebase_gadget(g: GadgetInstance, base: Iterable[BoolFun], max_depth: int = 4) -> GadgetInstance:
    phi = rebase(g.formula, base, max_depth)
    phi, k, start = eliminate_constants(phi, g.structure, g.start)
    return GadgetInstance(phi, k, start, g.family)


SAT_FAMILIES = {
    "u": gadget_u,
    "gxv": gadget_gx_v,
    "gs": gadget_gs,
    "xs": gadget_xs,
    "sfneg": gadget_sf_neg,
}
