"""Why the q^(d/2) size threshold cannot be lowered in the plane.

Two families of sets sit at size about q^(d/2) and admit no dilated
configuration at all for suitable ratios.  The demo certifies both by
exhaustive search and runs the ratio-1 control that shows the searches
are not vacuous.
"""

from fqdilate import (EdgeSet, build_subfield_grid, build_unit_sphere,
                      certify_no_dilated, distance_set, edges_path,
                      field_make, find_dilated_pair_bruteforce,
                      max_distinct_sphere_overlap, squares_nonzero)

TRIANGLE = EdgeSet(2, [(1, 2), (1, 3), (2, 3)])

print("== subfield grid: F_3 x F_3 inside F_9^2 ==")
spec, grid, admissible = build_subfield_grid(3, 1)
print(f"|E| = {len(grid)} = q, admissible ratio ranks: "
      f"{sorted(r.rank for r in admissible)}")
print(f"grid distance ranks: {sorted(e.rank for e in distance_set(grid))} "
      "(all inside the embedded subfield)")
for r in sorted(admissible, key=lambda e: e.rank):
    cert = certify_no_dilated(grid, r, edges_path(1),
                              construction="subfield_grid", parameters=(3, 1))
    print(f"  ratio rank {r.rank}: exhausted={cert.exhausted} "
          f"witness={cert.witness_found} nodes={cert.nodes_searched} "
          f"-> valid={cert.valid}")

print()
print("== unit spheres, triangle constraints ==")
for q in (7, 11):
    spec, E = build_unit_sphere(q)
    ratios = sorted((r for r in squares_nonzero(spec) if r != spec.one),
                    key=lambda e: e.rank)
    for r in ratios:
        cert = certify_no_dilated(E, r, TRIANGLE, construction="unit_sphere",
                                  parameters=(q,))
        print(f"  q={q} ratio rank {r.rank}: valid={cert.valid} "
              f"(nodes={cert.nodes_searched})")

print()
print("== control: ratio 1 must find a witness on the sphere ==")
spec7, sphere7 = build_unit_sphere(7)
w = find_dilated_pair_bruteforce(sphere7, spec7.one, TRIANGLE)
print(f"found a congruent triangle pair: {w is not None}")

print()
print("== the geometric fact behind the sphere case ==")
for q in (3, 7):
    print(f"  max overlap of two distinct spheres in F_{q}^2: "
          f"{max_distinct_sphere_overlap(field_make(q))}")
