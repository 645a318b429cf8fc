"""Enumerating O_2(F_q) and checking what it preserves."""

from fqdilate import (apply, brute_force_orthogonal, enumerate_orthogonal,
                      field_make, full_space, norm)

for q in (3, 5, 7, 11):
    spec = field_make(q)
    mats = enumerate_orthogonal(spec, 2)
    brute = brute_force_orthogonal(spec, 2)
    agree = {m.key() for m in mats} == {m.key() for m in brute}
    print(f"|O_2(F_{q})| = {len(mats):3d}   parametrized == filtered: {agree}")

print()
spec = field_make(7)
mats = enumerate_orthogonal(spec, 2)
ok = all(norm(apply(theta, v)) == norm(v)
         for v in full_space(spec, 2) for theta in mats)
print(f"norm invariance over all of F_7^2 x O_2: {ok}")

closed = all(a.matmul(b).key() in {m.key() for m in mats}
             for a in mats for b in mats)
print(f"closure under products: {closed}")

print()
print("first three matrices over F_3 (entry ranks):")
for m in enumerate_orthogonal(field_make(3), 2)[:3]:
    print("   ", m.key())
