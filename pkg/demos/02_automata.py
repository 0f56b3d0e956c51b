"""
Deterministic automata and transition systems
=============================================

A DFA over {a, b} is a coalgebra for ``2 x X^{a,b}``; a labelled transition
system is one for ``P({a,b} x X)``.  The same refiner minimizes both.
"""
from corefine import minimize

dfa = """{f,n} x X^{a,b}
q: (n, {a: p, b: r})
p: (n, {a: q, b: r})
r: (f, {a: q, b: p})
"""
print(minimize(dfa))

# an LTS where s0 and s1 can both do a then b, while s2 can only do a
lts = """P({a,b} x X)
s0: {(a, t0)}
s1: {(a, t1), (a, t0)}
s2: {(a, u)}
t0: {(b, u)}
t1: {(b, u)}
u: {}
"""
print(minimize(lts))

# switching off the single-state optimization gives the same partition
print(minimize(lts, singleton_opt=False))
