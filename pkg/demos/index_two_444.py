"""A(4,4,4) through its index-2 subgroup x1, x2 -> 0, x3 -> 1 mod 2.

The subgroup has H1 = Z^5, and two-dimensional components of its Char_1
meet along circles, which rules out quasi-projectivity.

Run from the repository root:  python demos/index_two_444.py
"""
import time

from artinqp.artin import artin_presentation, triangle_graph
from artinqp.groups import abelianization
from artinqp.obstruct import char_census, run_battery
from artinqp.subgroups import FiniteQuotientMap, kernel_presentation

G = artin_presentation(triangle_graph(4, 4, 4))
N = kernel_presentation(G, FiniteQuotientMap.cyclic(2, [0, 0, 1]))
ab = abelianization(N)
print(f"subgroup: {N.ngens} generators, {len(N.relators)} relators, H1 = Z^{ab.rank}, torsion {list(ab.torsion)}")
print(N.to_text())

t0 = time.perf_counter()
census = char_census(N, 1)
print(f"Char_1 census ({'complete' if census.complete else 'partial'}):")
for c in census.components:
    print(f"  dim {c.torus.dim}, generic depth {c.depth}: {c.torus}")

report = run_battery(N)
print()
print(report.to_text())
print(f"({time.perf_counter() - t0:.1f} s)")
