# Which fragments are easy? Walk a few formulas through the classifier and the dispatcher.

from ltlfrag import Kripke, classify_clone, dispatch, fragment_of, parse_formula
from ltlfrag.fastcheck import classify_problem, route

# %% a small structure: a -> b -> c, c loops; y holds before c, x holds at c
k = Kripke(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "c")],
           {"a": ["y"], "b": ["y"], "c": ["x"]}, "a")

formulas = [
    "F x",              # eventually, with a monotone disjunctive base
    "G (x | y)",        # invariantly, disjunctions only
    "G F x | F G y",    # recurrence and persistence
    "X y ^ X X x",      # xor over next-time: a parity walk
    "F (y S x)",        # since inside eventually collapses to F x
    "G !x",             # negation only
    "y U x",            # until: hard, the oracle takes over
    "G (x & !y)",       # conjunction plus negation: hard
]

# %% fragment, clone, table cell and the engine that handles it
for text in formulas:
    phi = parse_formula(text)
    sig = fragment_of(phi)
    cell = classify_problem(sig.temporal, sig.base)
    clone = classify_clone(sig.base).value
    print(f"{text:16} T={''.join(sorted(sig.temporal)) or '-':4} clone={clone:2} {str(cell):20} engine={route(phi)}")

# %% run them; fast engines return complete verdicts, the oracle is bounded
for text in formulas:
    r = dispatch(parse_formula(text), k, "a", 4, 3)
    print(f"{text:16} {type(r.verdict).__name__:10} via {r.engine}")
    if r.verdict.is_sat:
        print(" " * 17, r.verdict.witness)
