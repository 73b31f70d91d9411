import pytest

import ltlfrag.fastcheck.engines as engines
from ltlfrag.clones import CloneId
from ltlfrag.fastcheck import (
    ENGINES,
    FragmentError,
    Label,
    classify_cell,
    classify_problem,
    dispatch,
    normal_form,
    route,
    row_of,
    run_automaton,
    strip_since,
)
from ltlfrag.formula import AND, NOT, OR, XOR, Var, parse_formula
from ltlfrag.kripke import Kripke, check_lasso
from ltlfrag.randgen import MAJ
from ltlfrag.selftest import suite_engine
from ltlfrag.semantics import Sat, Unsat, UnsatUpTo, eval_lasso


def test_row_of():
    assert row_of("GF") == "FG"
    assert row_of("XSF") == "SFX"
    assert row_of("") == "S"
    assert row_of("US") == "U"
    assert row_of("UX") == "U"
    with pytest.raises(ValueError):
        row_of("Q")


def test_cells():
    assert str(classify_problem("G", [OR])) == "NL-complete (13)"
    assert str(classify_problem("U", [])) == "NP-hard (7)"
    assert str(classify_problem("G", [XOR])) == "Open"
    assert classify_problem("SF", [NOT]).label == Label.NPHard
    assert str(classify_cell("FGX", CloneId.M)) == "PSPACE-hard (1)"
    assert str(classify_cell("S", CloneId.BF)) == "in L (15)"
    assert str(classify_problem("X", [AND, NOT])) == "NP-hard (S)"


def test_automaton():
    assert run_automaton("FF") == ("F", False)
    assert run_automaton("GFG") == ("FG", False)
    assert run_automaton("FGF") == ("GF", False)
    assert run_automaton("!F!") == ("G", False)
    assert run_automaton("!G") == ("F", True)
    assert run_automaton("") == ("", False)
    with pytest.raises(ValueError):
        run_automaton("Y")


def test_normal_form():
    nf = normal_form(parse_formula("X F !X G F y"))
    assert (nf.m, nf.prefix, nf.negated, nf.leaf) == (2, "FG", True, "y")
    assert str(nf) == "XXFG!y"


def chain_xy():
    # a -> b -> c(loop), x at c, y at a and b
    return Kripke(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "c")],
                  {"a": ["y"], "b": ["y"], "c": ["x"]})


@pytest.mark.parametrize("text, engine, sat", [
    ("F x", "fx_v", True),
    ("X X x | X y", "fx_v", True),
    ("G y", "gx_e", False),
    ("X X G x", "gx_e", True),
    ("G F x", "fg_v", True),
    ("F G y", "fg_v", False),
    ("x ^ X X x", "x_l", True),
    ("X y ^ X X X x", "x_l", False),
    ("y S x", "s_only", False),
    ("F (y S x)", "sf_v", True),
    ("F G !y", "fgx_n", True),
    ("G !x", "fgx_n", False),
])
def test_engine_examples(text, engine, sat):
    phi = parse_formula(text)
    k = chain_xy()
    r = dispatch(phi, k, "a")
    assert r.engine == engine
    assert r.verdict.is_sat == sat
    if sat:
        check_lasso(k, r.verdict.witness, "a")
        assert eval_lasso(phi, k, r.verdict.witness)
    else:
        assert r.verdict == Unsat()


def test_route_and_fallback():
    assert route(parse_formula("x & !y")) == "eval_prop"
    assert route(parse_formula("x U y")) is None
    assert route(parse_formula("G (x & X y)")) == "gx_e"
    k = chain_xy()
    r = dispatch(parse_formula("y U x"), k, "a")
    assert r.engine.startswith("oracle") and "NP-hard (7)" in r.engine
    assert r.verdict.is_sat
    r = dispatch(parse_formula("G (x | y) & F !y"), k, "a", 2, 1)
    assert r.engine.startswith("oracle")
    assert r.verdict.is_sat
    r = dispatch(parse_formula("x & y"), k, "a")
    assert r.engine == "eval_prop" and r.verdict == Unsat()


def test_constant_elimination_before_engines():
    k = chain_xy()
    assert dispatch(parse_formula("F (x & 1)"), k, "a").verdict.is_sat
    assert dispatch(parse_formula("X 1"), k, "a").verdict.is_sat
    assert not dispatch(parse_formula("G 0"), k, "a").verdict.is_sat


def test_engines_reject_foreign_fragments():
    k = chain_xy()
    with pytest.raises(FragmentError):
        ENGINES["fx_v"](parse_formula("G x"), k, "a")
    with pytest.raises(FragmentError):
        ENGINES["gx_e"](parse_formula("G (x | y)"), k, "a")
    with pytest.raises(FragmentError):
        ENGINES["x_l"](parse_formula("X x & y"), k, "a")


def test_strip_since():
    phi = parse_formula("F (x S (y S z)) | z")
    assert strip_since(phi) == parse_formula("F z | z")


def test_maj_base_routes_to_oracle():
    from ltlfrag.formula import Apply, F
    phi = Apply(MAJ, (F(Var("x")), Var("y"), Var("y")))
    assert route(phi) is None
    assert isinstance(dispatch(phi, chain_xy(), "a").verdict, (Sat, UnsatUpTo))


def test_union_reading_of_g_region_is_caught(monkeypatch):
    def union(k, leaves):
        leaves = list(leaves)
        if not leaves:
            return frozenset(k.states)
        return frozenset(s for s in k.states if any(y in k.labels[s] for y in leaves))

    assert suite_engine("gx_e", 400, seed=0).ok
    monkeypatch.setattr(engines, "g_region", union)
    assert not suite_engine("gx_e", 400, seed=0).ok


def test_dispatch_never_breaks_engine_preconditions():
    import random

    from ltlfrag.clones import classify_clone
    from ltlfrag.formula import fragment_of
    from ltlfrag.randgen import BASES, random_formula, random_kripke
    from ltlfrag.selftest import ENGINE_FRAGMENTS

    rng = random.Random(7)
    routed = 0
    for i in range(10_000):
        ops = "".join(c for c in "XFGUS" if rng.random() < 0.4)
        base = BASES[rng.choice(list(BASES))]
        phi = random_formula(rng, ops, base, 3)
        name = route(phi)
        if name in ENGINE_FRAGMENTS:
            routed += 1
            allowed, top = ENGINE_FRAGMENTS[name]
            sig = fragment_of(phi)
            assert sig.temporal <= set(allowed), (name, phi)
            assert classify_clone(sig.base) <= CloneId[top], (name, phi)
        if i % 20 == 0:
            dispatch(phi, random_kripke(rng, max_states=3), "s0", 3, 2)
    assert routed > 2000
