"""
Weighted tree automata
======================

Backward bisimulation of a weighted tree automaton is behavioural
equivalence of the coalgebra ``x -> (sigma(x1,...,xk) -> weight)``.
"""
from corefine import monoids
from corefine.wta import WTA, minimize_wta, is_backward_bisimulation, wta_to_coalgebra
from corefine.coalgebra import format_coalgebra
from corefine.naive import as_partition

w = WTA(monoids.MAX_INT, list("abcd"), {"p": 2})
a, b, c, d = range(4)
w.add("p", (b, a), a, 3)
w.add("p", (a, a), a, 5)
w.add("p", (a, b), b, 5)
w.add("p", (b, b), b, 2)
w.add("p", (b, a), c, 5)
w.add("p", (c, a), c, 7)
w.add("p", (b, a), d, 5)
w.add("p", (a, c), d, 7)

print(format_coalgebra(wta_to_coalgebra(w, with_output=False)))

block_of, stats = minimize_wta(w)
print("blocks:", as_partition(block_of))
print("{a,b},{c},{d} is a backward bisimulation:", is_backward_bisimulation(w, [[a, b], [c], [d]]))
# c and d differ in where the 7 sits: (c, a) versus (a, c)
print("{a,b},{c,d}:", is_backward_bisimulation(w, [[a, b], [c, d]]))
