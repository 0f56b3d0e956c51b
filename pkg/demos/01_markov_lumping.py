"""
Lumping a Markov chain
======================

A probabilistic system is written as a distribution functor ``DX``.  Two
states are equivalent when they send the same probability into every class.
"""
from corefine import read_coalgebra, desort, refine, naive_fixpoint, write_partition

# three states; every state sends total weight 1 into the whole state set
text = """DX
q: {p: 0.5, r: 0.5}
p: {q: 0.4, r: 0.6}
r: {r: 1}
"""
term, c = read_coalgebra(text)
enc = desort(c)
block_of, stats = refine(enc)
print(write_partition(enc.names, block_of[:enc.n0]))

# the brute-force fixpoint gives the same answer: the chain is one lump
print("naive fixpoint:", naive_fixpoint(c))

# making the absorbing state observable: a flag marks r as halted, and now
# q (0.5 into r) and p (0.6 into r) can be told apart
flagged = """{run,halt} x DX
q: (run, {p: 0.5, r: 0.5})
p: (run, {q: 0.4, r: 0.6})
r: (halt, {r: 1})
"""
_, c2 = read_coalgebra(flagged)
enc2 = desort(c2)
print(write_partition(enc2.names, refine(enc2)[0][:enc2.n0]))
