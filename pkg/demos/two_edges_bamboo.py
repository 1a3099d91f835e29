"""A(inf,3,2): an index-3 subgroup that looks like the (2,4,2) bamboo.

The map x1 -> (1 2), x2 -> (), x3 -> (2 3) onto S3 has a point stabilizer
with H1 = Z^4, like the Artin group of the path with labels 2, 4, 2.  The
two groups have identical depth statistics over all characters of small
order, and both are obstructed.

Run from the repository root:  python demos/two_edges_bamboo.py
"""
from collections import Counter
from itertools import product
from fractions import Fraction

from artinqp.alexander import depth_at_character
from artinqp.artin import artin_presentation, path_graph, triangle_graph
from artinqp.groups import abelianization
from artinqp.obstruct import run_battery
from artinqp.subgroups import FiniteQuotientMap, kernel_presentation
from artinqp.torus import TorsionCharacter

G = artin_presentation(triangle_graph(None, 3, 2))
K = kernel_presentation(G, FiniteQuotientMap.permutations(3, [[(1, 2)], [], [(2, 3)]]), subgroup="stabilizer")
B = artin_presentation(path_graph([2, 4, 2]))
for name, P in (("stabilizer", K), ("bamboo", B)):
    ab = abelianization(P)
    print(f"{name}: {P.ngens} generators, H1 = Z^{ab.rank}, torsion {list(ab.torsion)}")

for N in (2, 4):
    hist = []
    for P in (K, B):
        ab = abelianization(P)
        c = Counter(depth_at_character(P, TorsionCharacter(tuple(Fraction(x, N) for x in xs)), ab).depth
                    for xs in product(range(N), repeat=ab.rank))
        hist.append(dict(sorted(c.items())))
    print(f"depth histogram over characters of order dividing {N}: stabilizer {hist[0]}, bamboo {hist[1]}")

for name, P in (("stabilizer", K), ("bamboo", B)):
    r = run_battery(P)
    print(f"{name}: {r.verdict} via {[t.id for t in r.violated()]}")
