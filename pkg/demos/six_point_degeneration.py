"""Six points in the plane, moved into special position one step at a time.

Each move degenerates the configuration; on the level of matroid polytopes
the parent polytope is cut into two cells, and equivariant classes add up
along the cut.
"""

from orbitcalc.algebra import QuantumContext
from orbitcalc.classes import class_from_duals
from orbitcalc.library import six_point_family
from orbitcalc.polytope import flacets, indicator_residual, shadow_facet_subdivision

fam = six_point_family()
for name, m in fam.items():
    flats = [f.subset for f in flacets(m) if f.kind == "flat"]
    print(f"{name}: {len(m.bases):>2} bases, flat facets {flats}")

ctx = QuantumContext.universal(2)
for src, i, j in (("A", 1, 3), ("B", 1, 4)):
    big, cells = shadow_facet_subdivision(fam[src], i, j)
    parent = next(k for k, v in fam.items() if v == big)
    names = sorted(k for c in cells for k, v in fam.items() if v == c)
    print(f"\nmove ({i},{j}) on {src}: P_{parent} = " + " + ".join(f"P_{n}" for n in names))
    print("  indicator check:", indicator_residual(big, cells, samples=2000))
    total = class_from_duals(cells[0], ctx) + class_from_duals(cells[1], ctx)
    print(f"  class({parent}) = sum of cell classes at r=2:", total == class_from_duals(big, ctx))
