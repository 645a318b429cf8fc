"""Distance sets, quotient sets and spheres in F_q^2.

The "norm" is the coordinate sum of squares.  It is not a metric (in
F_5^2 the vector (1,2) has norm zero), but it is invariant under the
orthogonal group, which is all the theory needs.
"""

from fqdilate import (Point, PointSet, distance_set, field_make, full_space,
                      norm, quotient_set, sphere)

F5 = field_make(5)
F7 = field_make(7)

print("== an isotropic vector (q = 1 mod 4) ==")
v = Point((F5(1), F5(2)))
print(f"norm((1,2)) over F_5 = {norm(v).rank}   <- zero for a nonzero vector")

print()
print("== distance and quotient sets ==")
E = PointSet.from_ranks(F5, 2, [0, 1, 7, 18])
print(f"E = 4 points of F_5^2, distance ranks {sorted(e.rank for e in distance_set(E))}")
ratios = quotient_set(E)
print(f"ratio set ranks: {sorted(e.rank for e in ratios)}")
full = full_space(F5, 2)
print(f"full plane: distance set = whole field? "
      f"{distance_set(full) == frozenset(full.spec.from_rank(i) for i in range(5))}")

print()
print("== sphere sizes depend on q mod 4 ==")
for spec in (F5, F7):
    origin = Point((spec.zero, spec.zero))
    unit = sphere(spec, 2, origin, spec.one)
    print(f"|unit sphere in F_{spec.q}^2| = {len(unit)}"
          f"   (q {'+' if spec.q % 4 == 3 else '-'} 1)")
origin7 = Point((F7.zero, F7.zero))
degenerate = sphere(F7, 2, origin7, F7(0))
print(f"radius-0 sphere over F_7: {len(degenerate)} point "
      "(only the center, since q = 3 mod 4)")
