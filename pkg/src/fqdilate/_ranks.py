"""Internal integer-rank encodings for vectorized exact arithmetic.

Field elements have rank c0 + c1*p + ... (see field.py); a point in F_q^d
has ambient rank sum_j rank(coord_j) * q^(d-1-j), i.e. coordinate 0 is the
most significant base-q digit, so numeric order on ambient ranks equals
lexicographic order on coordinate tuples.  Because q = p^ell, an ambient
rank is also a base-p integer with ell*d digits, and point addition or
subtraction is digit-wise mod p.  Everything here works on numpy int64
arrays of ranks; all arithmetic stays exact.
"""

from __future__ import annotations

import functools

import numpy as np

from .field import FieldElem, FieldSpec


def digits_of(ranks: np.ndarray, base: int, length: int) -> np.ndarray:
    """Base-`base` digits (least significant first) along a new last axis."""
    ranks = np.asarray(ranks, dtype=np.int64)
    out = np.empty(ranks.shape + (length,), dtype=np.int64)
    r = ranks
    for i in range(length):
        out[..., i] = r % base
        r = r // base
    return out


def undigits(digits: np.ndarray, base: int) -> np.ndarray:
    length = digits.shape[-1]
    weights = base ** np.arange(length, dtype=np.int64)
    return (digits * weights).sum(axis=-1)


@functools.lru_cache(maxsize=None)
def elem_calc(spec: FieldSpec) -> "ElemCalc":
    return ElemCalc(spec)


class ElemCalc:
    """Vectorized add/sub/neg/square on element ranks of one field."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self._square = None
        self._mul_tables: dict[int, np.ndarray] = {}

    def add(self, a, b):
        p, ell = self.spec.p, self.spec.ell
        if ell == 1:
            return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % p
        da = digits_of(np.asarray(a), p, ell)
        db = digits_of(np.asarray(b), p, ell)
        return undigits((da + db) % p, p)

    def sub(self, a, b):
        p, ell = self.spec.p, self.spec.ell
        if ell == 1:
            return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % p
        da = digits_of(np.asarray(a), p, ell)
        db = digits_of(np.asarray(b), p, ell)
        return undigits((da - db) % p, p)

    def neg(self, a):
        p, ell = self.spec.p, self.spec.ell
        if ell == 1:
            return (-np.asarray(a, dtype=np.int64)) % p
        return undigits((-digits_of(np.asarray(a), p, ell)) % p, p)

    @property
    def square_table(self) -> np.ndarray:
        """square_table[r] = rank of from_rank(r) squared."""
        if self._square is None:
            spec = self.spec
            self._square = np.array(
                [(spec.from_rank(r) ** 2).rank for r in range(spec.q)], dtype=np.int64
            )
        return self._square

    def mul_table(self, s: FieldElem) -> np.ndarray:
        """mul_table(s)[r] = rank of s * from_rank(r)."""
        key = s.rank
        tab = self._mul_tables.get(key)
        if tab is None:
            spec = self.spec
            tab = np.array(
                [(s * spec.from_rank(r)).rank for r in range(spec.q)], dtype=np.int64
            )
            self._mul_tables[key] = tab
        return tab


@functools.lru_cache(maxsize=None)
def point_calc(spec: FieldSpec, d: int) -> "PointCalc":
    return PointCalc(spec, d)


class PointCalc:
    """Vectorized arithmetic on ambient point ranks of F_q^d."""

    def __init__(self, spec: FieldSpec, d: int):
        self.spec = spec
        self.d = d
        self.size = spec.q**d
        self.ndigits = spec.ell * d
        self.elems = elem_calc(spec)

    def add(self, a, b):
        p = self.spec.p
        da = digits_of(np.asarray(a), p, self.ndigits)
        db = digits_of(np.asarray(b), p, self.ndigits)
        return undigits((da + db) % p, p)

    def sub(self, a, b):
        p = self.spec.p
        da = digits_of(np.asarray(a), p, self.ndigits)
        db = digits_of(np.asarray(b), p, self.ndigits)
        return undigits((da - db) % p, p)

    def neg(self, a):
        p = self.spec.p
        return undigits((-digits_of(np.asarray(a), p, self.ndigits)) % p, p)

    def coord_ranks(self, a) -> np.ndarray:
        """Coordinate element ranks, coordinate 0 first, along a new axis."""
        q = self.spec.q
        dig = digits_of(np.asarray(a), q, self.d)
        return dig[..., ::-1]

    def from_coord_ranks(self, coords: np.ndarray) -> np.ndarray:
        return undigits(np.asarray(coords)[..., ::-1], self.spec.q)

    def scale(self, s: FieldElem, a) -> np.ndarray:
        """Ranks of s * x for an array of point ranks x."""
        tab = self.elems.mul_table(s)
        return self.from_coord_ranks(tab[self.coord_ranks(a)])

    def norms(self, a) -> np.ndarray:
        """Element ranks of the coordinate sum-of-squares map."""
        coords = self.coord_ranks(a)
        sq = self.elems.square_table[coords]
        acc = sq[..., 0]
        for j in range(1, self.d):
            acc = self.elems.add(acc, sq[..., j])
        return acc

    def membership_mask(self, ranks) -> np.ndarray:
        mask = np.zeros(self.size, dtype=bool)
        mask[np.asarray(ranks, dtype=np.int64)] = True
        return mask
