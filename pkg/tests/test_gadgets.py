import pytest

from ltlfrag.clones import NotRepresentable
from ltlfrag.fastcheck import dispatch
from ltlfrag.formula import AND, Apply, walk
from ltlfrag.gadgets import (
    SAT_FAMILIES,
    Cnf,
    GadgetError,
    exp_family,
    gadget_gap,
    parse_edge_list,
    rebase_gadget,
)
from ltlfrag.kripke import validate
from ltlfrag.randgen import MAJ
from ltlfrag.selftest import exhaustive_cnfs, random_cnfs, suite_gadgets
from ltlfrag.semantics import check_bounded, minimal_witness

PSI0 = Cnf(4, ((1, -2, -4), (-1, 3, -4), (-2, 4)))
SAT1 = Cnf(1, ((1,),))
UNSAT1 = Cnf(1, ((1,), (-1,)))


def verdict(g):
    w = len(g.structure.states)
    return check_bounded(g.formula, g.structure, g.start, w + 2, w).is_sat


def test_cnf_validation_and_dimacs():
    assert Cnf.from_dimacs(PSI0.to_dimacs()) == PSI0
    assert Cnf.from_dimacs("c hi\np cnf 2 2\n1 -2 0 2\n0\n") == Cnf(2, ((1, -2), (2,)))
    for bad in ("1 0\n", "p cnf 1 2\n1 0\n", "p dnf 1 1\n1 0\n", "p cnf 1 1\nx 0\n"):
        with pytest.raises(GadgetError):
            Cnf.from_dimacs(bad)
    with pytest.raises(GadgetError):
        Cnf(1, ((2,),))
    with pytest.raises(GadgetError):
        Cnf(1, ((),))
    assert PSI0.brute_force_sat() and not UNSAT1.brute_force_sat()


@pytest.mark.parametrize("family, states", [("u", 12), ("gxv", 28), ("gs", 13), ("xs", 13), ("sfneg", 13)])
def test_sizes(family, states):
    g = SAT_FAMILIES[family](PSI0)
    assert len(g.structure.states) == states
    assert not validate(g.structure)


@pytest.mark.parametrize("family, cell", [("u", "NP-hard (7)"), ("gxv", "NP-hard (6)"),
                                          ("gs", "NP-hard (8)"), ("xs", "NP-hard (8)"),
                                          ("sfneg", "NP-hard (9)")])
def test_classifications(family, cell):
    assert str(SAT_FAMILIES[family](PSI0).classification) == cell


@pytest.mark.parametrize("family", sorted(SAT_FAMILIES))
def test_tiny_instances(family):
    build = SAT_FAMILIES[family]
    assert verdict(build(SAT1))
    assert not verdict(build(UNSAT1))
    assert verdict(build(PSI0))


def test_gadgets_match_brute_force_sat():
    cnfs = exhaustive_cnfs(2, 3) + random_cnfs(20, seed=3)
    res = suite_gadgets(cnfs)
    assert res.ok, res.failures[:3]


def test_rebase_gadget_to_majority():
    g = SAT_FAMILIES["gxv"](Cnf(2, ((1, 2), (-1,))))
    r = rebase_gadget(g, [MAJ])
    fns = {n.fn.name for n in walk(r.formula) if isinstance(n, Apply)}
    assert fns == {"maj"}
    # majority generates every monotone function, so the instance moves to the M column
    assert str(r.classification) == "PSPACE-hard (3)"
    assert verdict(r) == verdict(g)
    with pytest.raises(NotRepresentable):
        rebase_gadget(g, [AND])


def test_parse_edge_list():
    edges, a, b, vs = parse_edge_list("# graph\nu w\nu v\nv w\n")
    assert (a, b, edges, vs) == ("u", "w", [("u", "v"), ("v", "w")], ["u", "w", "v"])
    with pytest.raises(GadgetError):
        parse_edge_list("")
    with pytest.raises(GadgetError):
        parse_edge_list("a b\nc\n")
    with pytest.raises(GadgetError):
        gadget_gap([("u", "v")], "u", "q", "F")


def reachable(edges, a, b):
    seen, todo = {a}, [a]
    while todo:
        u = todo.pop()
        for x, y in edges:
            if x == u and y not in seen:
                seen.add(y)
                todo.append(y)
    return b in seen


def all_graphs(n):
    vs = [f"v{i}" for i in range(n)]
    pairs = [(u, v) for u in vs for v in vs]
    for mask in range(1 << len(pairs)):
        yield vs, [p for i, p in enumerate(pairs) if mask >> i & 1]


@pytest.mark.parametrize("flavor", ["F", "X", "G"])
def test_gap_gadgets_decide_reachability(flavor):
    count = 0
    for n in (1, 2, 3):
        for vs, edges in all_graphs(n):
            if n == 3 and len(edges) > 4:
                continue
            a, b = vs[0], vs[-1]
            g = gadget_gap(edges, a, b, flavor, vs)
            assert not validate(g.structure)
            w = len(g.structure.states)
            got = dispatch(g.formula, g.structure, g.start, w + 1, w).verdict.is_sat
            assert got == reachable(edges, a, b), (flavor, vs, edges)
            count += 1
    assert count > 100


def test_exp_family():
    lengths = []
    for i in (1, 2):
        g = exp_family(i)
        assert not validate(g.structure)
        assert str(g.classification) == "NP-hard (7)"
        lengths.append(len(minimal_witness(g.formula, g.structure, g.start, cap=64)))
    assert lengths == [3, 9]
    with pytest.raises(GadgetError):
        exp_family(0)
    with pytest.raises(GadgetError):
        exp_family(6)
