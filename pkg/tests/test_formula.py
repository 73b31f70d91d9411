import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlfrag.formula import (
    AND,
    FALSE,
    NOT,
    OR,
    TRUE,
    XOR,
    Apply,
    ArityError,
    BoolFun,
    F,
    FormulaError,
    G,
    ParseError,
    S,
    Temporal,
    Temporal2,
    U,
    UndeclaredFunctionError,
    Var,
    X,
    declared_functions,
    eval_bool,
    format_declarations,
    fragment_of,
    parse_declarations,
    parse_formula,
    print_formula,
    size,
    subformulas,
    substitute,
    temporal_depth,
    variables,
)

MAJ = BoolFun.from_bits("maj", 3, "00010111")
IMP = BoolFun.from_bits("imp", 2, "1101")


def formulas(fns=(AND, OR, XOR, NOT, MAJ, IMP)):
    leaves = st.sampled_from([Var("x"), Var("y"), Var("z"), TRUE, FALSE])

    def extend(children):
        unary = st.builds(Temporal, st.sampled_from("XFG"), children)
        binary = st.builds(Temporal2, st.sampled_from("US"), children, children)
        apps = st.one_of(*[
            st.tuples(*[children] * f.arity).map(lambda args, f=f: Apply(f, args)) for f in fns
        ])
        return st.one_of(unary, binary, apps)

    return st.recursive(leaves, extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_print_parse_round_trip(phi):
    text = print_formula(phi)
    assert parse_formula(text, [MAJ, IMP]) == phi


def test_precedence_and_associativity():
    assert parse_formula("x U y U z") == U(Var("x"), U(Var("y"), Var("z")))
    assert parse_formula("x | y & z") == Apply(OR, (Var("x"), Apply(AND, (Var("y"), Var("z")))))
    assert parse_formula("F x & y") == Apply(AND, (F(Var("x")), Var("y")))
    assert parse_formula("!G x") == Apply(NOT, (G(Var("x")),))
    assert parse_formula("x ∧ ¬y ∨ z") == parse_formula("(x & !y) | z")


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_formula("x U")
    with pytest.raises(ParseError):
        parse_formula("(x")
    with pytest.raises(UndeclaredFunctionError):
        parse_formula("maj(x, y, z)")
    with pytest.raises(ArityError):
        parse_formula("maj(x, y)", [MAJ])
    with pytest.raises(ParseError):
        parse_formula("x $ y")


def test_boolfun_validation():
    with pytest.raises(ArityError):
        BoolFun.from_bits("f", 2, "011")
    assert MAJ(1, 1, 0) == 1 and MAJ(1, 0, 0) == 0
    assert BoolFun.from_callable("g", 2, lambda a, b: a and not b).bits == "0010"


def test_declarations_round_trip():
    text = format_declarations([MAJ, IMP])
    assert parse_declarations(text) == [MAJ, IMP]
    with pytest.raises(FormulaError):
        parse_declarations("maj/3 = 0101")
    with pytest.raises(FormulaError):
        parse_declarations("U/2 = 0110")
    phi = parse_formula("maj(x, y, imp(x, z)) & x", [MAJ, IMP])
    assert declared_functions(phi) == [MAJ, IMP]


def test_fragment_and_measures():
    phi = parse_formula("G(x | X y) U (x S !z)")
    sig = fragment_of(phi)
    assert sig.temporal == {"G", "X", "U", "S"}
    assert sig.base == {OR, NOT}
    assert variables(phi) == {"x", "y", "z"}
    assert temporal_depth(phi) == 3
    assert size(phi) == 10
    order = subformulas(phi)
    assert order[-1] == phi
    for i, node in enumerate(order):
        assert all(order.index(c) < i for c in node.children())


def test_x_power_and_substitute():
    assert X(Var("y"), 3) == Temporal("X", Temporal("X", Temporal("X", Var("y"))))
    phi = S(Var("a"), F(Var("b")))
    assert substitute(phi, {Var("b"): TRUE}) == S(Var("a"), F(TRUE))


def test_eval_bool():
    phi = parse_formula("x & !y | (x ^ y ^ z)")
    assert eval_bool(phi, {"x"})
    assert eval_bool(phi, {"x": True, "y": True, "z": True})
    assert not eval_bool(phi, {"y": True, "x": False, "z": True})
    with pytest.raises(FormulaError):
        eval_bool(F(Var("x")), {"x"})
