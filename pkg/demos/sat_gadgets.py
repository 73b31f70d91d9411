# CNF satisfiability encoded as model checking. Each family targets a different hard fragment.

from ltlfrag.gadgets import SAT_FAMILIES, Cnf
from ltlfrag.formula import print_formula
from ltlfrag.semantics import check_bounded

sat = Cnf(4, ((1, -2, -4), (-1, 3, -4), (-2, 4)))
unsat = Cnf(2, ((1, 2), (-1, 2), (1, -2), (-1, -2)))
print(sat.to_dimacs())

# %% build every family for both CNFs and compare with brute force
for name, build in SAT_FAMILIES.items():
    for cnf in (sat, unsat):
        g = build(cnf)
        w = len(g.structure.states)
        verdict = check_bounded(g.formula, g.structure, g.start, w + 2, w)
        print(f"{name:6} {w:3} states  {str(g.classification):14} "
              f"model checker: {type(verdict).__name__:10} brute force: {cnf.brute_force_sat()}")

# %% what the until gadget looks like for a one-clause CNF
g = SAT_FAMILIES["u"](Cnf(1, ((1,),)))
print(print_formula(g.formula))
for s in g.structure.states:
    succ = [t for u, t in g.structure.edges if u == s]
    print(f"  {s:4} {sorted(g.structure.labels[s])!s:20} -> {succ}")

# %% a satisfying path reads off an assignment: the literal states it visits
g = SAT_FAMILIES["u"](sat)
w = check_bounded(g.formula, g.structure, g.start, 12, 12).witness
print([s for s in w.prefix + w.cycle if s.startswith(("x", "nx"))])
