"""Random Kripke structures, formulas and CNFs for cross-checking."""

from __future__ import annotations

import random
from typing import Sequence

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
    Temporal2,
    Var,
)
from .kripke import Kripke

VARS = ("x", "y", "z")

OR3 = BoolFun.from_callable("or3", 3, lambda a, b, c: a | b | c)
AND3 = BoolFun.from_callable("and3", 3, lambda a, b, c: a & b & c)
XOR3 = BoolFun.from_callable("xor3", 3, lambda a, b, c: a ^ b ^ c)
XNOR = BoolFun.from_callable("xnor", 2, lambda a, b: 1 - (a ^ b))
PROJ_NOT_2 = BoolFun.from_callable("nsnd", 2, lambda a, b: 1 - b)
PROJ_1 = BoolFun.from_callable("fst", 2, lambda a, b: a)
OR_SKIP = BoolFun.from_callable("or13", 3, lambda a, b, c: a | c)
MAJ = BoolFun.from_bits("maj", 3, "00010111")
NAND = BoolFun.from_bits("nand", 2, "1110")
IMPL = BoolFun.from_callable("impl", 2, lambda a, b: (1 - a) | b)

# Bases that generate (at most) the named clone.
BASES: dict[str, tuple[BoolFun, ...]] = {
    "I": (CONST0, CONST1, PROJ_1),
    "N": (NOT, CONST0, CONST1, PROJ_NOT_2),
    "E": (AND, AND3, CONST0, CONST1),
    "V": (OR, OR3, OR_SKIP, CONST0, CONST1),
    "L": (XOR, XOR3, XNOR, NOT, CONST0, CONST1),
    "M": (AND, OR, MAJ, CONST0, CONST1),
    "BF": (AND, OR, NOT, XOR, NAND, IMPL, CONST0, CONST1),
}


def random_kripke(rng: random.Random, n_states: int | None = None, max_states: int = 6,
                  variables: Sequence[str] = VARS, max_out: int = 3) -> Kripke:
    n = n_states or rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    edges = set()
    for s in states:
        for t in rng.sample(states, rng.randint(1, min(max_out, n))):
            edges.add((s, t))
    labels = {s: [v for v in variables if rng.random() < 0.5] for s in states}
    return Kripke(states, edges, labels, states[0])


def random_formula(rng: random.Random, temporal: str, base: Sequence[BoolFun], depth: int,
                   variables: Sequence[str] = VARS) -> Formula:
    """A random formula with operators from ``temporal`` and ``base``, nesting at most ``depth``."""
    if depth <= 0 or rng.random() < 0.2:
        consts = [f for f in base if f.arity == 0]
        if consts and rng.random() < 0.1:
            return Apply(rng.choice(consts), ())
        return Var(rng.choice(variables))
    fns = [f for f in base if f.arity > 0]
    choices = list(temporal) + (["fn"] * 2 if fns else [])
    if not choices:
        return Var(rng.choice(variables))
    pick = rng.choice(choices)
    sub = lambda: random_formula(rng, temporal, base, depth - 1, variables)  # noqa: E731
    match pick:
        case "X" | "F" | "G":
            return Temporal(pick, sub())
        case "U" | "S":
            return Temporal2(pick, sub(), sub())
        case _:
            fn = rng.choice(fns)
            return Apply(fn, tuple(sub() for _ in range(fn.arity)))


def random_truth_table(rng: random.Random, arity: int, name: str = "f") -> BoolFun:
    bits = "".join(rng.choice("01") for _ in range(1 << arity))
    return BoolFun.from_bits(name, arity, bits)
