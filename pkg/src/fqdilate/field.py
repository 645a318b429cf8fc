"""Exact arithmetic in small finite fields of odd characteristic.

A field F_{p^ell} is represented by a :class:`FieldSpec` holding the
characteristic ``p``, the extension degree ``ell`` and a fixed monic
irreducible modulus polynomial.  Elements are fully reduced coefficient
tuples (constant term first), so equality is component-wise and every
element has a unique representation.

The canonical order on elements is by *rank*: the integer
``c0 + c1*p + ... + c_{ell-1}*p^{ell-1}``.  Ranks run 0..q-1, constants
come first, and all tie-breaking elsewhere in the package (canonical
square roots, modulus selection, point ordering) refers to this order.
"""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

# Elements are tiny, but the dense representation keeps memory trivial and
# needs no precomputed tables, so fields up to this size stay cheap to make.
DEFAULT_MAX_Q = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- polynomial helpers over F_p ------------------------------------------
# Polynomials are tuples of ints in [0, p), constant term first, with
# trailing zeros trimmed ("" == zero polynomial is the empty tuple).


def _ptrim(c: Sequence[int]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of a modulo m; m must be monic."""
    r = list(a)
    dm = len(m) - 1
    while len(_ptrim(r)) - 1 >= dm:
        r = list(_ptrim(r))
        lead = r[-1]
        shift = len(r) - 1 - dm
        for i in range(len(m)):
            r[shift + i] = (r[shift + i] - lead * m[i]) % p
    return _ptrim(r)


def _irreducible(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    deg = len(f) - 1
    for gdeg in range(1, deg // 2 + 1):
        for low in range(p**gdeg):
            g, n = [], low
            for _ in range(gdeg):
                g.append(n % p)
                n //= p
            g.append(1)
            if not _pmod(f, g, p):
                return False
    return True


class FieldSpec:
    """A finite field F_{p^ell} with a fixed polynomial-basis modulus."""

    __slots__ = ("p", "ell", "q", "modulus", "_zero", "_one")

    def __init__(self, p: int, ell: int, modulus: Sequence[int] | None = None,
                 *, max_q: int = DEFAULT_MAX_Q):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        if ell < 1:
            raise ValueError(f"extension degree must be >= 1, got {ell}")
        q = p**ell
        if q > max_q:
            raise ValueError(f"field size {q} exceeds the guard {max_q}")
        self.p = p
        self.ell = ell
        self.q = q
        if modulus is None:
            modulus = self._find_modulus(p, ell)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != ell + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree ell")
            if ell > 1 and not _irreducible(modulus, p):
                raise ValueError("modulus is reducible")
        self.modulus = modulus
        self._zero = FieldElem(self, (0,) * ell)
        self._one = FieldElem(self, (1,) + (0,) * (ell - 1))

    @staticmethod
    def _find_modulus(p: int, ell: int) -> tuple[int, ...]:
        # Smallest monic irreducible in rank order of the low coefficients.
        if ell == 1:
            return (0, 1)
        for low in range(p**ell):
            c, n = [], low
            for _ in range(ell):
                c.append(n % p)
                n //= p
            f = tuple(c) + (1,)
            if _irreducible(f, p):
                return f
        raise AssertionError("no irreducible polynomial found")  # unreachable

    # -- element constructors ---------------------------------------------

    def element(self, coeffs: Iterable[int]) -> "FieldElem":
        c = tuple(int(x) % self.p for x in coeffs)
        if len(c) != self.ell:
            raise ValueError(f"expected {self.ell} coefficients, got {len(c)}")
        return FieldElem(self, c)

    def from_int(self, n: int) -> "FieldElem":
        """Image of the integer n under Z -> F_q (a constant polynomial)."""
        return FieldElem(self, (n % self.p,) + (0,) * (self.ell - 1))

    def from_rank(self, r: int) -> "FieldElem":
        if not 0 <= r < self.q:
            raise ValueError(f"rank {r} out of range for field of size {self.q}")
        c = []
        for _ in range(self.ell):
            c.append(r % self.p)
            r //= self.p
        return FieldElem(self, tuple(c))

    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return self.from_int(value)
        return self.element(value)

    @property
    def zero(self) -> "FieldElem":
        return self._zero

    @property
    def one(self) -> "FieldElem":
        return self._one

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.ell == other.ell and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.ell, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"


@functools.lru_cache(maxsize=None)
def field_make(p: int, ell: int = 1) -> FieldSpec:
    """The field F_{p^ell} with the canonical (rank-smallest) modulus.

    Cached, so repeated calls return the same object and elements of
    "the same field" always share their spec.
    """
    return FieldSpec(p, ell)


class FieldElem:
    """An element of F_{p^ell}: a reduced coefficient tuple over F_p."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple[int, ...]):
        self.spec = spec
        self.coeffs = coeffs

    # -- basic protocol ------------------------------------------------------

    @property
    def rank(self) -> int:
        r = 0
        for c in reversed(self.coeffs):
            r = r * self.spec.p + c
        return r

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self.spec.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.ell, self.coeffs))

    def __lt__(self, other: "FieldElem") -> bool:
        self._check(other)
        return self.rank < other.rank

    def __le__(self, other: "FieldElem") -> bool:
        self._check(other)
        return self.rank <= other.rank

    def __repr__(self) -> str:
        if self.spec.ell == 1:
            return f"GF({self.spec.q})({self.coeffs[0]})"
        return f"GF({self.spec.q})({','.join(map(str, self.coeffs))})"

    def _check(self, other: "FieldElem") -> None:
        if self.spec is not other.spec and self.spec != other.spec:
            raise ValueError("operands belong to different fields")

    def _coerce(self, other):
        if isinstance(other, int):
            return self.spec.from_int(other)
        if isinstance(other, FieldElem):
            self._check(other)
            return other
        return None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        return FieldElem(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        return FieldElem(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        p = self.spec.p
        return FieldElem(self.spec, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        spec = self.spec
        if spec.ell == 1:
            return FieldElem(spec, ((self.coeffs[0] * o.coeffs[0]) % spec.p,))
        prod = _pmul(self.coeffs, o.coeffs, spec.p)
        red = _pmod(prod, spec.modulus, spec.p)
        return FieldElem(spec, red + (0,) * (spec.ell - len(red)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.spec.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.spec.q - 2)


# -- field-level operations -------------------------------------------------


def enumerate_field(spec: FieldSpec) -> list[FieldElem]:
    """All q elements in canonical rank order (constants first)."""
    return [spec.from_rank(r) for r in range(spec.q)]


def is_square(a: FieldElem) -> bool:
    """Whether a is a square in its field (zero counts as a square)."""
    if a.is_zero():
        return True
    return a ** ((a.spec.q - 1) // 2) == a.spec.one


def sqrt(a: FieldElem) -> FieldElem:
    """The canonical square root: of the two roots +-s, the smaller rank.

    Uses a^((q+1)/4) when q = 3 (mod 4) and Tonelli-Shanks in the
    multiplicative group otherwise.  Raises ValueError on non-squares.
    """
    spec = a.spec
    if a.is_zero():
        return spec.zero
    if not is_square(a):
        raise ValueError(f"{a!r} is not a square")
    q = spec.q
    if q % 4 == 3:
        s = a ** ((q + 1) // 4)
    else:
        s = _tonelli_shanks(a)
    t = -s
    return s if s.rank <= t.rank else t


def _tonelli_shanks(a: FieldElem) -> FieldElem:
    spec = a.spec
    q = spec.q
    Q, S = q - 1, 0
    while Q % 2 == 0:
        Q //= 2
        S += 1
    z = _first_nonsquare(spec)
    m = S
    c = z**Q
    t = a**Q
    r = a ** ((Q + 1) // 2)
    one = spec.one
    while t != one:
        i = 0
        t2 = t
        while t2 != one:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (m - i - 1))
        r = r * b
        c = b * b
        t = t * c
        m = i
    return r


@functools.lru_cache(maxsize=None)
def _first_nonsquare(spec: FieldSpec) -> FieldElem:
    for r in range(1, spec.q):
        e = spec.from_rank(r)
        if not is_square(e):
            return e
    raise AssertionError("no non-square in a field of odd order")  # unreachable


def squares_nonzero(spec: FieldSpec) -> frozenset[FieldElem]:
    """The (q-1)/2 nonzero squares of the field."""
    out = set()
    for r in range(1, spec.q):
        e = spec.from_rank(r)
        out.add(e * e)
    return frozenset(out)


@functools.lru_cache(maxsize=None)
def _embedding_root(small: FieldSpec, big: FieldSpec) -> FieldElem:
    # Rank-smallest root in the big field of the small field's modulus.
    for r in range(big.q):
        x = big.from_rank(r)
        acc = big.zero
        xp = big.one
        for c in small.modulus:
            if c:
                acc = acc + xp * c
            xp = xp * x
        if acc.is_zero():
            return x
    raise AssertionError("modulus has no root in the extension")  # unreachable


def subfield_embed(small: FieldSpec, big: FieldSpec, a: FieldElem) -> FieldElem:
    """Ring-homomorphic injection F_{p^ell} -> F_{p^{2 ell}}.

    The image is exactly the fixed set of z -> z^(p^ell).  Deterministic:
    the generator of the small field maps to the rank-smallest root of the
    small modulus inside the big field.
    """
    if small.p != big.p or big.ell != 2 * small.ell:
        raise ValueError("embedding requires same characteristic and doubled degree")
    if a.spec != small:
        raise ValueError("element does not belong to the small field")
    beta = _embedding_root(small, big)
    acc = big.zero
    bp = big.one
    for c in a.coeffs:
        if c:
            acc = acc + bp * c
        bp = bp * beta
    return acc
