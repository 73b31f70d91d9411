import random

import pytest

from ltlfrag.gadgets import Cnf, gadget_gap, gadget_u
from ltlfrag.kripke import (
    InvalidLassoError,
    Kripke,
    KripkeError,
    Lasso,
    check_lasso,
    close_walk,
    cycle_through,
    exact_walk,
    on_cycle_within,
    reach,
    reach_exact,
    shortest_walk,
    validate,
)
from ltlfrag.randgen import random_kripke

PSI0 = Cnf(4, ((1, -2, -4), (-1, 3, -4), (-2, 4)))


def chain():
    return Kripke(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "c")], {"c": ["x"]})


def test_validate():
    assert validate(Kripke(["s"], [("s", "s")])) == []
    errs = validate(Kripke(["a", "b"], [("a", "b")]))
    assert any("not total" in e for e in errs)
    errs = validate(Kripke(["a"], [("a", "a"), ("a", "q")], initial="z"))
    assert any("initial" in e for e in errs) and any("unknown state" in e for e in errs)
    assert validate(gadget_u(PSI0).structure) == []


def test_reach_exact():
    k = chain()
    assert reach_exact(k, "a", 0) == {"a"}
    assert reach_exact(k, "a", 2) == {"c"}
    fig = gadget_u(PSI0).structure
    assert reach_exact(fig, "q1", 3) == {"x1", "nx1"}
    with pytest.raises(ValueError):
        reach_exact(k, "a", -1)


def test_reach_and_cycles():
    k = Kripke(["s"], [("s", "s")])
    assert on_cycle_within(k, {"s"}) == {"s"}
    two = Kripke(["u", "v"], [("u", "v"), ("v", "u")])
    assert on_cycle_within(two, {"u"}) == frozenset()
    assert reach(chain(), "a") == {"a", "b", "c"}
    assert reach(chain(), "a", within={"a", "b"}) == {"a", "b"}


def test_layered_gap_graph_has_back_cycle():
    g = gadget_gap([("a", "m"), ("m", "b")], "a", "b", "G")
    k = g.structure
    assert g.start in on_cycle_within(k, k.states)
    # independent check: DFS for a closed walk through the start
    stack, seen = [v for v in k.succ[g.start]], set()
    found = False
    while stack:
        u = stack.pop()
        if u == g.start:
            found = True
            break
        if u not in seen:
            seen.add(u)
            stack.extend(k.succ[u])
    assert found


def test_reach_is_union_of_exact_layers():
    rng = random.Random(3)
    for _ in range(200):
        k = random_kripke(rng, max_states=8)
        s = k.initial
        layers = set()
        for d in range(len(k.states)):
            ex = reach_exact(k, s, d)
            assert ex <= reach(k, s)
            layers |= ex
        assert layers == reach(k, s)


def test_walk_helpers():
    k = chain()
    assert shortest_walk(k, "a", {"c"}) == ["a", "b", "c"]
    assert shortest_walk(k, "c", {"c"}, min_steps=2) == ["c", "c", "c"]
    assert shortest_walk(k, "c", {"a"}) is None
    assert cycle_through(k, "c") == ["c"]
    assert cycle_through(k, "a") is None
    assert exact_walk(k, "a", "c", 4) == ["a", "b", "c", "c", "c"]
    assert close_walk(k, ["a", "b"]) == Lasso(("a", "b"), ("c",))


def test_lasso_checks():
    k = chain()
    lasso = Lasso(("a", "b"), ("c",))
    check_lasso(k, lasso, "a")
    assert lasso.unroll(5) == ["a", "b", "c", "c", "c"]
    assert str(lasso) == "a b | c"
    with pytest.raises(InvalidLassoError):
        check_lasso(k, Lasso(("a",), ("c",)))
    with pytest.raises(InvalidLassoError):
        check_lasso(k, lasso, "b")
    with pytest.raises(InvalidLassoError):
        Lasso(("a",), ())


def test_lasso_unrolls_along_edges():
    rng = random.Random(5)
    from naive import all_lassos

    for _ in range(50):
        k = random_kripke(rng, max_states=4)
        for lasso in list(all_lassos(k, k.initial, 2, 3))[:20]:
            seq = lasso.unroll(len(lasso.prefix) + 3 * len(lasso.cycle))
            assert all((u, v) in k.edges for u, v in zip(seq, seq[1:]))


def test_json_round_trip():
    k = gadget_u(PSI0).structure
    assert Kripke.loads(k.dumps()) == k
    with pytest.raises(KripkeError):
        Kripke.from_dict({"states": ["a"], "edges": [["a", "a"]]})
    with pytest.raises(KripkeError):
        Kripke.from_dict({"states": ["a"], "edges": [["a"]], "initial": "a"})
    with pytest.raises(KripkeError):
        Kripke(["a", "a"], [])
