"""Formula syntax: Boolean functions, the temporal AST, parsing and printing.

Formulas are immutable trees built from four node kinds::

    Var("x")                         a propositional variable
    Apply(fn, (child, ...))          a Boolean function given by its truth table
    Temporal("F", child)             unary X, F, G
    Temporal2("U", left, right)      binary U (until) and S (since)

Connectives are never special-cased: ``&``, ``|``, ``^``, ``!`` and the
constants are just pre-declared :class:`BoolFun` values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping

UNARY_TEMPORAL = ("X", "F", "G")
BINARY_TEMPORAL = ("U", "S")
TEMPORAL_OPS = UNARY_TEMPORAL + BINARY_TEMPORAL
KEYWORDS = frozenset(TEMPORAL_OPS)


class FormulaError(ValueError):
    """Base class for errors raised while building or reading formulas."""


class ParseError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class ArityError(FormulaError):
    pass


class UndeclaredFunctionError(FormulaError):
    pass


@dataclass(frozen=True)
class BoolFun:
    """A Boolean function of fixed arity.

    ``table[i]`` is the value on the input whose big-endian binary expansion is
    ``i``: the first argument is the most significant bit.
    """

    name: str
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 0:
            raise ArityError(f"{self.name}: negative arity")
        table = tuple(int(b) for b in self.table)
        if len(table) != 1 << self.arity:
            raise ArityError(
                f"{self.name}/{self.arity}: table has {len(table)} entries, "
                f"expected {1 << self.arity}"
            )
        if any(b not in (0, 1) for b in table):
            raise FormulaError(f"{self.name}: table entries must be 0 or 1")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_bits(cls, name: str, arity: int, bits: str) -> "BoolFun":
        return cls(name, arity, tuple(int(c) for c in bits))

    @classmethod
    def from_callable(cls, name: str, arity: int, fn) -> "BoolFun":
        return cls(name, arity, tuple(int(bool(fn(*args))) for args in product((0, 1), repeat=arity)))

    @property
    def bits(self) -> str:
        return "".join(map(str, self.table))

    def __call__(self, *args) -> int:
        if len(args) != self.arity:
            raise ArityError(f"{self.name} expects {self.arity} arguments, got {len(args)}")
        index = 0
        for a in args:
            index = (index << 1) | (1 if a else 0)
        return self.table[index]

    def __repr__(self) -> str:
        return f"BoolFun({self.name}/{self.arity}={self.bits})"


AND = BoolFun.from_bits("and", 2, "0001")
OR = BoolFun.from_bits("or", 2, "0111")
XOR = BoolFun.from_bits("xor", 2, "0110")
NOT = BoolFun.from_bits("not", 1, "10")
CONST0 = BoolFun.from_bits("const0", 0, "0")
CONST1 = BoolFun.from_bits("const1", 0, "1")
BUILTINS: dict[str, BoolFun] = {f.name: f for f in (AND, OR, XOR, NOT, CONST0, CONST1)}

_INFIX = {"and": "&", "xor": "^", "or": "|"}
_INFIX_PREC = {"&": 3, "^": 2, "|": 1}
_TEMPORAL2_PREC = 0


class Formula:
    """Common base of the AST node classes."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        raise NotImplementedError

    def __str__(self) -> str:
        return print_formula(self)

    # Convenience constructors, used heavily by the gadget generators.
    def __and__(self, other: "Formula") -> "Formula":
        return Apply(AND, (self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Apply(OR, (self, other))

    def __xor__(self, other: "Formula") -> "Formula":
        return Apply(XOR, (self, other))

    def __invert__(self) -> "Formula":
        return Apply(NOT, (self,))


@dataclass(frozen=True, slots=True)
class Var(Formula):
    name: str

    def children(self):
        return ()


@dataclass(frozen=True, slots=True)
class Apply(Formula):
    fn: BoolFun
    args: tuple[Formula, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.fn.arity:
            raise ArityError(
                f"{self.fn.name} expects {self.fn.arity} arguments, got {len(self.args)}"
            )

    def children(self):
        return self.args


@dataclass(frozen=True, slots=True)
class Temporal(Formula):
    op: str
    child: Formula

    def __post_init__(self):
        if self.op not in UNARY_TEMPORAL:
            raise FormulaError(f"unknown unary temporal operator {self.op!r}")

    def children(self):
        return (self.child,)


@dataclass(frozen=True, slots=True)
class Temporal2(Formula):
    op: str
    left: Formula
    right: Formula

    def __post_init__(self):
        if self.op not in BINARY_TEMPORAL:
            raise FormulaError(f"unknown binary temporal operator {self.op!r}")

    def children(self):
        return (self.left, self.right)


TRUE = Apply(CONST1, ())
FALSE = Apply(CONST0, ())


def const(value: bool) -> Apply:
    return TRUE if value else FALSE


def X(phi: Formula, times: int = 1) -> Formula:
    for _ in range(times):
        phi = Temporal("X", phi)
    return phi


def F(phi: Formula) -> Formula:
    return Temporal("F", phi)


def G(phi: Formula) -> Formula:
    return Temporal("G", phi)


def U(left: Formula, right: Formula) -> Formula:
    return Temporal2("U", left, right)


def S(left: Formula, right: Formula) -> Formula:
    return Temporal2("S", left, right)


def disjunction(terms: Iterable[Formula]) -> Formula:
    """Left-nested ``|`` over ``terms``; the empty disjunction is 0."""
    result = None
    for t in terms:
        result = t if result is None else Apply(OR, (result, t))
    return FALSE if result is None else result


def conjunction(terms: Iterable[Formula]) -> Formula:
    result = None
    for t in terms:
        result = t if result is None else Apply(AND, (result, t))
    return TRUE if result is None else result


def is_constant(phi: Formula) -> bool:
    return isinstance(phi, Apply) and phi.fn.arity == 0


# --------------------------------------------------------------------------
# Structural queries


@dataclass(frozen=True)
class FragmentSig:
    temporal: frozenset[str]
    base: frozenset[BoolFun]

    def __le__(self, other: "FragmentSig") -> bool:
        return self.temporal <= other.temporal and self.base <= other.base


def subformulas(phi: Formula) -> list[Formula]:
    """Distinct subformulas in post-order (children before parents)."""
    seen: set[Formula] = set()
    order: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen.add(node)
            order.append(node)
        else:
            stack.append((node, True))
            for c in reversed(node.children()):
                if c not in seen:
                    stack.append((c, False))
    return order


def walk(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal including repeated occurrences."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def variables(phi: Formula) -> frozenset[str]:
    return frozenset(n.name for n in walk(phi) if isinstance(n, Var))


def fragment_of(phi: Formula) -> FragmentSig:
    temporal = set()
    base = set()
    for node in walk(phi):
        if isinstance(node, (Temporal, Temporal2)):
            temporal.add(node.op)
        elif isinstance(node, Apply):
            base.add(node.fn)
    return FragmentSig(frozenset(temporal), frozenset(base))


def temporal_depth(phi: Formula) -> int:
    depth: dict[Formula, int] = {}
    for node in subformulas(phi):
        inner = max((depth[c] for c in node.children()), default=0)
        depth[node] = inner + (1 if isinstance(node, (Temporal, Temporal2)) else 0)
    return depth[phi]


def size(phi: Formula) -> int:
    return sum(1 for _ in walk(phi))


def substitute(phi: Formula, mapping: Mapping[Formula, Formula]) -> Formula:
    """Replace every occurrence of a key subformula, outermost first."""
    memo: dict[Formula, Formula] = {}

    def go(node: Formula) -> Formula:
        if node in mapping:
            return mapping[node]
        if node in memo:
            return memo[node]
        match node:
            case Var():
                out = node
            case Apply(fn, args):
                out = Apply(fn, tuple(go(a) for a in args))
            case Temporal(op, child):
                out = Temporal(op, go(child))
            case Temporal2(op, left, right):
                out = Temporal2(op, go(left), go(right))
        memo[node] = out
        return out

    return go(phi)


def rename_vars(phi: Formula, renaming: Mapping[str, str]) -> Formula:
    return substitute(phi, {Var(k): Var(v) for k, v in renaming.items()})


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


# --------------------------------------------------------------------------
# Printing

def print_formula(phi: Formula) -> str:
    return _print(phi)


def _prec(node: Formula) -> int:
    if isinstance(node, Temporal2):
        return _TEMPORAL2_PREC
    if isinstance(node, Apply) and node.fn.name in _INFIX and BUILTINS[node.fn.name] == node.fn:
        return _INFIX_PREC[_INFIX[node.fn.name]]
    return 10


def _print(node: Formula) -> str:
    match node:
        case Var(name):
            return name
        case Temporal(op, child):
            inner = _print(child)
            if _prec(child) < 10:
                inner = f"({inner})"
            return f"{op} {inner}"
        case Temporal2(op, left, right):
            # right-associative: parenthesize a left operand of the same level
            ls, rs = _print(left), _print(right)
            if _prec(left) <= _TEMPORAL2_PREC:
                ls = f"({ls})"
            if _prec(right) < _TEMPORAL2_PREC:
                rs = f"({rs})"
            return f"{ls} {op} {rs}"
        case Apply(fn, args):
            if fn == CONST0:
                return "0"
            if fn == CONST1:
                return "1"
            if fn == NOT:
                inner = _print(args[0])
                if _prec(args[0]) < 10:
                    inner = f"({inner})"
                return f"!{inner}"
            p = _prec(node)
            if p < 10:
                # left-associative infix
                symbol = _INFIX[fn.name]
                ls, rs = _print(args[0]), _print(args[1])
                if _prec(args[0]) < p:
                    ls = f"({ls})"
                if _prec(args[1]) <= p:
                    rs = f"({rs})"
                return f"{ls} {symbol} {rs}"
            return f"{fn.name}({', '.join(_print(a) for a in args)})"
    raise TypeError(f"not a formula: {node!r}")


# --------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>[01])(?![A-Za-z0-9_])"
    r"|(?P<sym>[()&|^!,~∧∨⊕¬]))"
)
_SYMBOL_ALIASES = {"∧": "&", "∨": "|", "⊕": "^", "¬": "!", "~": "!"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "sym":
            value = _SYMBOL_ALIASES.get(value, value)
        elif kind == "ident" and value in KEYWORDS:
            kind = "kw"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, functions: Mapping[str, BoolFun]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.functions = functions

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value or kind == "eof":
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def parse(self) -> Formula:
        phi = self.temporal2()
        kind, v, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected token {v!r}", pos)
        return phi

    def temporal2(self) -> Formula:
        left = self.infix(1)
        kind, v, _ = self.peek()
        if kind == "kw" and v in BINARY_TEMPORAL:
            self.take()
            right = self.temporal2()
            return Temporal2(v, left, right)
        return left

    def infix(self, level: int) -> Formula:
        if level > 3:
            return self.unary()
        left = self.infix(level + 1)
        symbol = {1: "|", 2: "^", 3: "&"}[level]
        fn = {1: OR, 2: XOR, 3: AND}[level]
        while self.peek()[0] == "sym" and self.peek()[1] == symbol:
            self.take()
            right = self.infix(level + 1)
            left = Apply(fn, (left, right))
        return left

    def unary(self) -> Formula:
        kind, v, pos = self.peek()
        if kind == "sym" and v == "!":
            self.take()
            return Apply(NOT, (self.unary(),))
        if kind == "kw" and v in UNARY_TEMPORAL:
            self.take()
            return Temporal(v, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, v, pos = self.take()
        if kind == "num":
            return TRUE if v == "1" else FALSE
        if kind == "sym" and v == "(":
            phi = self.temporal2()
            self.expect(")")
            return phi
        if kind == "ident":
            if self.peek()[0] == "sym" and self.peek()[1] == "(":
                return self.application(v, pos)
            return Var(v)
        raise ParseError(f"unexpected token {v or 'end of input'!r}", pos)

    def application(self, name: str, pos: int) -> Formula:
        fn = self.functions.get(name)
        if fn is None:
            raise UndeclaredFunctionError(f"undeclared function {name!r} (at offset {pos})")
        self.expect("(")
        args = []
        if not (self.peek()[0] == "sym" and self.peek()[1] == ")"):
            args.append(self.temporal2())
            while self.peek()[0] == "sym" and self.peek()[1] == ",":
                self.take()
                args.append(self.temporal2())
        self.expect(")")
        if len(args) != fn.arity:
            raise ArityError(
                f"{name} expects {fn.arity} arguments, got {len(args)} (at offset {pos})"
            )
        return Apply(fn, tuple(args))


def function_table(declarations: Iterable[BoolFun] = ()) -> dict[str, BoolFun]:
    table = dict(BUILTINS)
    for fn in declarations:
        if fn.name in KEYWORDS:
            raise FormulaError(f"{fn.name!r} is a reserved operator name")
        if fn.name in BUILTINS and BUILTINS[fn.name] != fn:
            raise FormulaError(f"cannot redeclare built-in {fn.name!r}")
        table[fn.name] = fn
    return table


def parse_formula(text: str, declarations: Iterable[BoolFun] = ()) -> Formula:
    """Parse ``text`` into a :class:`Formula`.

    ``!``, ``X``, ``F`` and ``G`` bind tightest, then ``&``, ``^``, ``|``;
    ``U`` and ``S`` bind loosest and associate to the right.
    """
    return _Parser(text, function_table(declarations)).parse()


# --------------------------------------------------------------------------
# Declarations file: one ``name/arity = bits`` line per function

_DECL_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)\s*=\s*([01]+)\s*$")


def parse_declarations(text: str) -> list[BoolFun]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        m = _DECL_RE.match(stripped)
        if not m:
            raise FormulaError(f"line {lineno}: expected 'name/arity = bits', got {line!r}")
        name, arity, bits = m.group(1), int(m.group(2)), m.group(3)
        out.append(BoolFun.from_bits(name, arity, bits))
    function_table(out)
    return out


def format_declarations(functions: Iterable[BoolFun]) -> str:
    return "".join(f"{f.name}/{f.arity} = {f.bits}\n" for f in functions)


def declared_functions(phi: Formula) -> list[BoolFun]:
    """Non-built-in functions used in ``phi``, for writing a declarations file."""
    seen = {}
    for node in walk(phi):
        if isinstance(node, Apply) and BUILTINS.get(node.fn.name) != node.fn:
            seen.setdefault(node.fn.name, node.fn)
    return list(seen.values())


def eval_bool(phi: Formula, assignment: Mapping[str, bool] | frozenset | set) -> bool:
    """Evaluate a temporal-free formula; ``assignment`` is a dict or a set of true variables."""
    if isinstance(assignment, (set, frozenset)):
        truth = lambda name: name in assignment  # noqa: E731
    else:
        truth = lambda name: bool(assignment.get(name, False))  # noqa: E731

    def go(node: Formula) -> bool:
        match node:
            case Var(name):
                return truth(name)
            case Apply(fn, args):
                return bool(fn(*(go(a) for a in args)))
        raise FormulaError(f"temporal operator in propositional context: {node}")

    return go(phi)
