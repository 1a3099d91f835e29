"""A(5,4,2) through a point stabilizer of a map onto a transitive subgroup of S5.

The map sends x1 -> (2 3), x2 -> (2 3)(4 5), x3 -> (1 2)(3 4).  The
preimage of the stabilizer of 1 has index 5 and b1 = 4; the normal kernel
is much larger (b1 = 29).  The battery on the stabilizer finds a point on
two components of Char_1 whose depth is too small.  This takes a few
minutes on one core.

Run from the repository root:  python demos/stabilizer_542.py
"""
import time

from artinqp.artin import artin_presentation, triangle_graph
from artinqp.groups import abelianization
from artinqp.obstruct import run_battery
from artinqp.subgroups import FiniteQuotientMap, kernel_presentation

G = artin_presentation(triangle_graph(5, 4, 2))
phi = FiniteQuotientMap.permutations(5, [[(2, 3)], [(2, 3), (4, 5)], [(1, 2), (3, 4)]])
for sub in ("stabilizer", "kernel"):
    H = kernel_presentation(G, phi, subgroup=sub)
    ab = abelianization(H)
    print(f"{sub}: {H.ngens} generators, {len(H.relators)} relators, b1 = {ab.rank}, torsion {list(ab.torsion)}")

H = kernel_presentation(G, phi, subgroup="stabilizer")
t0 = time.perf_counter()
report = run_battery(H)
print()
print(report.to_text())
print(f"({time.perf_counter() - t0:.0f} s)")
