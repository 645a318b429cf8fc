"""Three ways to exhibit a dilated configuration.

* translation scan (ratio 1): find c with |E ∩ (c+E)| large,
* overlap scan (square ratio r != 1): maximize |tE ∩ (E+a)| with t^2 = r,
* exhaustive backtracking (any ratio, also proves non-existence).
"""

from fqdilate import (Point, PointSet, edges_all_pairs, edges_path,
                      field_make, find_congruent_tuple_translation,
                      find_dilated_pair_bruteforce,
                      find_dilated_tuple_scaling, format_point,
                      sample_subset, trial_rng, verify_witness)

F7 = field_make(7)

print("== translation scan on a progression ==")
E = PointSet(F7, 2, [Point((F7(i), F7(0))) for i in range(4)])
w = find_congruent_tuple_translation(E, 1)
print(f"xs = {[format_point(p) for p in w.xs]}")
print(f"ys = {[format_point(p) for p in w.ys]}")
print(f"difference c = {format_point(w.xs[0] - w.ys[0])}, "
      f"verified: {verify_witness(w, edges_all_pairs(1), F7.one)}")

print()
print("== overlap scan at ratio 2 on a random set ==")
E = sample_subset(F7, 2, 14, trial_rng(3, 14, 0))
w = find_dilated_tuple_scaling(E, F7(2), 1)
print(f"xs = {[format_point(p) for p in w.xs]}")
print(f"ys = {[format_point(p) for p in w.ys]}")
print(f"verified against every pair: {verify_witness(w, edges_all_pairs(1), F7(2))}")

print()
print("== exhaustive search doubles as a decision procedure ==")
small = sample_subset(F7, 2, 4, trial_rng(9, 4, 0))
for rank in (1, 2, 4):
    r = F7(rank)
    found = find_dilated_pair_bruteforce(small, r, edges_path(1))
    status = "witness" if found else "provably none"
    print(f"  |E|=4, ratio {rank}: {status}")
