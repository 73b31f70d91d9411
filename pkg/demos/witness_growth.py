# Until formulas can force very long witnesses: the nested family needs repeated trips around inner loops.

from ltlfrag.gadgets import exp_family
from ltlfrag.formula import print_formula
from ltlfrag.semantics import minimal_witness

# %% formula and structure size against the shortest witness
for i in (1, 2, 3):
    g = exp_family(i)
    w = minimal_witness(g.formula, g.structure, g.start, cap=200)
    print(f"i={i}  |formula|={len(print_formula(g.formula)):3}  states={len(g.structure.states):2}  "
          f"shortest witness={len(w)}")

# %% the i=2 witness: the inner cycle x1_* is traversed more than once
g = exp_family(2)
w = minimal_witness(g.formula, g.structure, g.start)
print(print_formula(g.formula))
print(w)
