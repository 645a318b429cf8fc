"""Enumeration of the orthogonal group O_d(F_q) and its action on points.

d = 2 uses the rotation/reflection parametrization by solutions of
a^2 + b^2 = 1; d = 1 is {+1, -1}; d >= 3 falls back to filtering every
matrix, which is only allowed for tiny q (guarded by q^(d^2)).
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .errors import GuardExceededError
from .field import FieldElem, FieldSpec
from .geometry import Point

# d >= 3 has no parametrized enumeration here, so the all-matrices filter
# must stay bounded.
BRUTE_FORCE_GUARD = 1 << 24


class OrthMatrix:
    """A d x d matrix over F_q with M^T M = I (checked at construction)."""

    __slots__ = ("spec", "d", "entries")

    def __init__(self, entries):
        rows = tuple(tuple(row) for row in entries)
        d = len(rows)
        if any(len(row) != d for row in rows):
            raise ValueError("matrix must be square")
        spec = rows[0][0].spec
        self.spec = spec
        self.d = d
        self.entries = rows
        if not self._is_orthogonal():
            raise ValueError("matrix columns are not orthonormal")

    def _is_orthogonal(self) -> bool:
        spec, d, m = self.spec, self.d, self.entries
        for i in range(d):
            for j in range(i, d):
                acc = spec.zero
                for t in range(d):
                    acc = acc + m[t][i] * m[t][j]
                want = spec.one if i == j else spec.zero
                if acc != want:
                    return False
        return True

    def apply(self, v: Point) -> Point:
        if v.d != self.d or v.spec != self.spec:
            raise ValueError("dimension or field mismatch")
        return Point(
            sum((self.entries[i][j] * v.coords[j] for j in range(self.d)),
                self.spec.zero)
            for i in range(self.d)
        )

    def matmul(self, other: "OrthMatrix") -> "OrthMatrix":
        if other.d != self.d or other.spec != self.spec:
            raise ValueError("dimension or field mismatch")
        d, spec = self.d, self.spec
        prod = [
            [sum((self.entries[i][t] * other.entries[t][j] for t in range(d)), spec.zero)
             for j in range(d)]
            for i in range(d)
        ]
        return OrthMatrix(prod)

    def transpose(self) -> "OrthMatrix":
        d = self.d
        return OrthMatrix(tuple(tuple(self.entries[j][i] for j in range(d)) for i in range(d)))

    def key(self) -> tuple[int, ...]:
        return tuple(e.rank for row in self.entries for e in row)

    def __eq__(self, other) -> bool:
        return (isinstance(other, OrthMatrix) and self.spec == other.spec
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.spec.q, self.entries))

    def __lt__(self, other: "OrthMatrix") -> bool:
        return self.key() < other.key()

    def __repr__(self) -> str:
        return f"OrthMatrix({self.entries!r})"


def apply(theta: OrthMatrix, v: Point) -> Point:
    """Matrix-vector product over F_q."""
    return theta.apply(v)


def identity(spec: FieldSpec, d: int) -> OrthMatrix:
    return OrthMatrix(
        tuple(tuple(spec.one if i == j else spec.zero for j in range(d)) for i in range(d))
    )


def _unit_circle(spec: FieldSpec) -> list[tuple[FieldElem, FieldElem]]:
    """Solutions of a^2 + b^2 = 1 in (a, b) rank-lexicographic order."""
    sols = []
    for ra in range(spec.q):
        a = spec.from_rank(ra)
        want = spec.one - a * a
        for rb in range(spec.q):
            b = spec.from_rank(rb)
            if b * b == want:
                sols.append((a, b))
    return sols


@functools.lru_cache(maxsize=None)
def enumerate_orthogonal(spec: FieldSpec, d: int) -> tuple[OrthMatrix, ...]:
    """Every element of O_d(F_q) exactly once, in a deterministic order.

    For d = 2 the order is: rotations [[a,-b],[b,a]] by (a, b) lex order
    over a^2 + b^2 = 1, then reflections [[a,b],[b,-a]] in the same order.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if d == 1:
        return (OrthMatrix(((spec.one,),)), OrthMatrix(((-spec.one,),)))
    if d == 2:
        circle = _unit_circle(spec)
        rots = [OrthMatrix(((a, -b), (b, a))) for a, b in circle]
        refls = [OrthMatrix(((a, b), (b, -a))) for a, b in circle]
        return tuple(rots + refls)
    if spec.q ** (d * d) > BRUTE_FORCE_GUARD:
        raise GuardExceededError(
            f"O_{d}(GF({spec.q})) enumeration needs {spec.q ** (d * d)} candidate "
            f"matrices, above the guard {BRUTE_FORCE_GUARD}"
        )
    return tuple(brute_force_orthogonal(spec, d))


def brute_force_orthogonal(spec: FieldSpec, d: int) -> list[OrthMatrix]:
    """Filter all q^(d^2) matrices by M^T M = I.  Cross-check oracle for d = 2."""
    total = spec.q ** (d * d)
    if total > BRUTE_FORCE_GUARD:
        raise GuardExceededError(
            f"{total} candidate matrices exceed the guard {BRUTE_FORCE_GUARD}")
    if spec.ell == 1:
        return _brute_force_prime(spec, d)
    elems = [spec.from_rank(r) for r in range(spec.q)]
    out = []
    for flat in itertools.product(elems, repeat=d * d):
        rows = tuple(tuple(flat[i * d:(i + 1) * d]) for i in range(d))
        if _orthonormal_columns(spec, rows):
            out.append(OrthMatrix(rows))
    return out


def _orthonormal_columns(spec: FieldSpec, rows) -> bool:
    d = len(rows)
    for i in range(d):
        for j in range(i, d):
            acc = spec.zero
            for t in range(d):
                acc = acc + rows[t][i] * rows[t][j]
            if acc != (spec.one if i == j else spec.zero):
                return False
    return True


def _brute_force_prime(spec: FieldSpec, d: int) -> list[OrthMatrix]:
    # Vectorized over all candidates: entries are plain residues mod p.
    p = spec.p
    total = p ** (d * d)
    ranks = np.arange(total, dtype=np.int64)
    digits = np.empty((total, d * d), dtype=np.int64)
    r = ranks
    for i in range(d * d):
        digits[:, i] = r % p
        r = r // p
    mats = digits.reshape(total, d, d)
    gram = np.einsum("nti,ntj->nij", mats, mats) % p
    eye = np.eye(d, dtype=np.int64)
    good = np.all(gram == eye, axis=(1, 2))
    out = []
    for m in mats[good]:
        rows = tuple(tuple(spec.from_int(int(x)) for x in row) for row in m)
        out.append(OrthMatrix(rows))
    return out


def group_order(spec: FieldSpec, d: int) -> int:
    return len(enumerate_orthogonal(spec, d))
