"""Tour of the exact field arithmetic layer.

Run:  python demos/field_arithmetic.py
"""

from fqdilate import (enumerate_field, field_make, is_square, sqrt,
                      squares_nonzero, subfield_embed)

print("== prime field F_7 ==")
F7 = field_make(7)
a, b = F7(3), F7(5)
print(f"3 * 5 = {(a * b).coeffs[0]}")
print(f"3^-1  = {a.inverse().coeffs[0]}")
print(f"nonzero squares: {sorted(e.rank for e in squares_nonzero(F7))}")
print(f"sqrt(2) = {sqrt(F7(2)).coeffs[0]}  (canonical: the smaller of the two roots)")

print()
print("== extension field F_9 = F_3[x]/(x^2+1) ==")
F9 = field_make(3, 2)
print(f"modulus coefficients (constant first): {F9.modulus}")
x = F9.element((0, 1))
print(f"x * x = {(x * x).coeffs}  (x^2 = -1)")
print(f"element ranks in order: {[e.rank for e in enumerate_field(F9)]}")
print(f"nonzero squares of F_9: {sorted(e.rank for e in squares_nonzero(F9))}")
print(f"sqrt of rank-3 element has rank {sqrt(F9.from_rank(3)).rank}")

print()
print("== the subfield F_3 inside F_9 ==")
F3 = field_make(3)
image = [subfield_embed(F3, F9, F3(i)) for i in range(3)]
print(f"embedded ranks: {[e.rank for e in image]}")
fixed = [e.rank for e in enumerate_field(F9) if e**3 == e]
print(f"fixed points of z -> z^3: {fixed}  (the same three elements)")
print(f"every subfield element is a square in F_9: "
      f"{all(is_square(e) for e in image)}")
