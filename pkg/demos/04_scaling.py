"""
Scaling on random automata
==========================

Random (N,max) tree automata with 50 transitions per state, as in the
benchmark of the tool this library follows.  Refinement time should grow a
little faster than linearly in the number of edges.
"""
import time

import numpy as np

from corefine.coalgebra import desort
from corefine.refiner import refine
from corefine.wta import generate_random, wta_to_coalgebra

sizes = [500, 1000, 2000, 4000]
times = []
for n in sizes:
    enc = desort(wta_to_coalgebra(generate_random(n, 50, seed=1)))
    start = time.perf_counter()
    _, stats = refine(enc)
    times.append(time.perf_counter() - start)
    print(f"n={n:5d} n'={enc.n:7d} m={enc.m:8d} blocks={stats.final_blocks_sort0:5d} "
          f"refine={times[-1]:.2f}s traffic={stats.label_traffic}/{stats.traffic_bound()}")

# slope of log time against log n; m log m growth sits just above 1
slope = np.polyfit(np.log(sizes), np.log(times), 1)[0]
print(f"empirical exponent {slope:.2f}")
