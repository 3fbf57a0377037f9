"""Count lines on hypersurfaces two ways and split the count by contact type.

For d = 2r + 1 only finitely many lines in P^r meet a general degree-d
hypersurface in three or fewer points, counted without multiplicity.  The
class of that locus on G(1, r) has a closed product form, and it can also be
recomputed from the orbit class of the uniform rank-2 matroid on d points.
"""

from orbitcalc.enumerative import (
    grassmannian_degree,
    line_section_class_closed_form,
    line_section_class_via_pipeline,
    tri_incident_report,
    two_to_one,
)
from orbitcalc.quantum import uniform_expr

for r in (2, 3):
    d = 2 * r + 1
    closed = line_section_class_closed_form(d)
    piped = line_section_class_via_pipeline(d, uniform_expr(2, d))
    print(f"d={d}, r={r}")
    print(f"  class            {closed}")
    print(f"  routes agree     {closed == piped}")
    print(f"  degree           {grassmannian_degree(closed, r)}")

    rep = tri_incident_report(d, r)
    for row in rep["per_i"]:
        a, b, c = row["multiplicities"]
        note = f" = 2 x {row['degree'] // 2}" if two_to_one(d, row["i"]) else ""
        print(f"  contact ({a},{b},{c})  degree {row['degree']}{note}")
    print(f"  total            {rep['total']}")
    print()

# plane quintic: the (2,2,1) row sees each of the 120 bitangents twice, and
# the (1,3,1) and (3,1,1) rows each see each of the 45 flexes twice
