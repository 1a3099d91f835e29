"""A(6,4,2): the codimension-one components of Char_1 meet outside Char_2.

Run from the repository root:  python demos/triangle_642.py
"""
from artinqp.alexander import char_ideal, depth_at_character
from artinqp.artin import artin_presentation, enumerate_components, triangle_graph
from artinqp.obstruct import run_battery
from artinqp.torus import intersect

g = triangle_graph(6, 4, 2)  # l(23) = 6, l(13) = 4, l(12) = 2
pres = artin_presentation(g)
print("presentation:")
print(pres.to_text())

ideal = char_ideal(pres, 1)
print(f"E_2 has {len(ideal.generators)} generators, for example {ideal.generators[0].format()}")

comps = enumerate_components(ideal.generators, 3)
print("components of Char_1:")
for c in comps:
    print(f"  dim {c.dim}: {c}")

print("pairwise intersections of the one-dimensional components, with depths:")
lines = [c for c in comps if c.dim == 1]
for i, a in enumerate(lines):
    for b in lines[i + 1:]:
        res = intersect(a, b)
        for pt in res.points:
            d = depth_at_character(pres, pt).depth
            print(f"  {a}  meets  {b}  at {pt}: depth {d}")

report = run_battery(g)
print()
print(report.to_text())
