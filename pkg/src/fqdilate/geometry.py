"""Points and finite point sets in F_q^d.

Provides the sum-of-squares "norm" map, distance sets, quotient sets,
spheres, translations and dilations.  Point sets are stored sorted by
ambient rank with a hash index for O(1) membership, so iteration order
is deterministic everywhere.
"""

from __future__ import annotations

import re
from typing import Iterable

import numpy as np

from . import _ranks
from .field import FieldElem, FieldSpec, field_make

# Full-space enumerations (spheres, sampling, membership masks) are capped
# at this many ambient points.
AMBIENT_GUARD = 1 << 24


class Point:
    """A vector in F_q^d over a shared FieldSpec."""

    __slots__ = ("spec", "coords", "_rank")

    def __init__(self, coords: Iterable[FieldElem]):
        coords = tuple(coords)
        if not coords:
            raise ValueError("points need at least one coordinate")
        spec = coords[0].spec
        for c in coords[1:]:
            if c.spec != spec:
                raise ValueError("coordinates belong to different fields")
        self.spec = spec
        self.coords = coords
        self._rank = None

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def rank(self) -> int:
        if self._rank is None:
            r = 0
            for c in self.coords:
                r = r * self.spec.q + c.rank
            self._rank = r
        return self._rank

    @classmethod
    def from_rank(cls, spec: FieldSpec, d: int, rank: int) -> "Point":
        coords = []
        for j in range(d - 1, -1, -1):
            coords.append(spec.from_rank((rank // spec.q**j) % spec.q))
        return cls(coords)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Point) and self.spec == other.spec
                and self.coords == other.coords)

    def __hash__(self) -> int:
        return hash((self.spec.q, self.coords))

    def __lt__(self, other: "Point") -> bool:
        return self.rank < other.rank

    def __add__(self, other: "Point") -> "Point":
        return Point(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Point") -> "Point":
        return Point(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Point":
        return Point(-a for a in self.coords)

    def scale(self, s: FieldElem) -> "Point":
        return Point(s * a for a in self.coords)

    def __repr__(self) -> str:
        return "(" + ",".join(repr(c.coeffs if self.spec.ell > 1 else c.coeffs[0]) for c in self.coords) + ")"


class PointSet:
    """A deduplicated finite subset of F_q^d, iterated in rank order."""

    __slots__ = ("spec", "d", "points", "_index", "_ranks")

    def __init__(self, spec: FieldSpec, d: int, points: Iterable[Point]):
        seen = {}
        for pt in points:
            if pt.spec != spec or pt.d != d:
                raise ValueError("point does not live in the declared ambient space")
            seen[pt.rank] = pt
        self.spec = spec
        self.d = d
        self.points = tuple(seen[r] for r in sorted(seen))
        self._index = frozenset(seen)
        self._ranks = None

    @classmethod
    def from_ranks(cls, spec: FieldSpec, d: int, ranks: Iterable[int]) -> "PointSet":
        return cls(spec, d, (Point.from_rank(spec, d, int(r)) for r in ranks))

    def ranks(self) -> np.ndarray:
        if self._ranks is None:
            self._ranks = np.array([p.rank for p in self.points], dtype=np.int64)
        return self._ranks

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, pt) -> bool:
        return isinstance(pt, Point) and pt.spec == self.spec and pt.rank in self._index

    def contains_rank(self, rank: int) -> bool:
        return rank in self._index

    def __eq__(self, other) -> bool:
        return (isinstance(other, PointSet) and self.spec == other.spec
                and self.d == other.d and self._index == other._index)

    def __hash__(self) -> int:
        return hash((self.spec.q, self.d, self._index))

    def __repr__(self) -> str:
        return f"PointSet(GF({self.spec.q})^{self.d}, n={len(self)})"


def full_space(spec: FieldSpec, d: int) -> PointSet:
    """All of F_q^d (guarded by the ambient enumeration limit)."""
    _check_ambient(spec, d)
    return PointSet.from_ranks(spec, d, range(spec.q**d))


def _check_ambient(spec: FieldSpec, d: int) -> None:
    if spec.q**d > AMBIENT_GUARD:
        raise ValueError(f"ambient space of size {spec.q**d} exceeds the guard {AMBIENT_GUARD}")


def norm(x: Point) -> FieldElem:
    """Sum of squared coordinates.  Not a metric, but orthogonally invariant."""
    acc = x.spec.zero
    for c in x.coords:
        acc = acc + c * c
    return acc


def distance_set(E: PointSet) -> frozenset[FieldElem]:
    """All values ||x - y|| over pairs of E.  Contains 0 (x = y allowed)."""
    if len(E) == 0:
        raise ValueError("distance set of an empty point set")
    calc = _ranks.point_calc(E.spec, E.d)
    r = E.ranks()
    diffs = calc.sub(r[:, None], r[None, :])
    vals = np.unique(calc.norms(diffs.ravel()))
    return frozenset(E.spec.from_rank(int(v)) for v in vals)


def quotient_set(E: PointSet) -> frozenset[FieldElem]:
    """All ratios of realized distances with nonzero denominator."""
    dist = distance_set(E)
    denoms = [v for v in dist if not v.is_zero()]
    out = set()
    for b in denoms:
        binv = b.inverse()
        for a in dist:
            out.add(a * binv)
    return frozenset(out)


def sphere(spec: FieldSpec, d: int, center: Point, radius: FieldElem) -> PointSet:
    """{x in F_q^d : ||x - center|| = radius}, by full enumeration."""
    _check_ambient(spec, d)
    if center.spec != spec or center.d != d:
        raise ValueError("center does not live in the ambient space")
    if radius.spec != spec:
        raise ValueError("radius belongs to a different field")
    calc = _ranks.point_calc(spec, d)
    allr = np.arange(spec.q**d, dtype=np.int64)
    rel = calc.sub(allr, np.int64(center.rank))
    hits = allr[calc.norms(rel) == radius.rank]
    return PointSet.from_ranks(spec, d, hits)


def translate(E: PointSet, t: Point) -> PointSet:
    """The pointwise image E + t; always the same cardinality as E."""
    if t.spec != E.spec or t.d != E.d:
        raise ValueError("translation vector does not live in the ambient space")
    calc = _ranks.point_calc(E.spec, E.d)
    return PointSet.from_ranks(E.spec, E.d, calc.add(E.ranks(), np.int64(t.rank)))


def dilate(E: PointSet, s: FieldElem) -> PointSet:
    """The pointwise image s*E; same cardinality as E when s != 0."""
    if s.spec != E.spec:
        raise ValueError("scalar belongs to a different field")
    calc = _ranks.point_calc(E.spec, E.d)
    return PointSet.from_ranks(E.spec, E.d, calc.scale(s, E.ranks()))


# -- serialization ------------------------------------------------------------
# One point per line; each coordinate is a parenthesized coefficient tuple
# (constant term first) and coordinates are comma-separated:
#     q=3^2 d=2
#     (1,0),(2,1)

_HEADER_RE = re.compile(r"^q=(\d+)\^(\d+)\s+d=(\d+)$")
_COORD_RE = re.compile(r"\(([^()]*)\)")


def format_elem(a: FieldElem) -> str:
    return "(" + ",".join(str(c) for c in a.coeffs) + ")"


def parse_elem(spec: FieldSpec, text: str) -> FieldElem:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return spec.element(int(c) for c in text.split(","))


def format_point(pt: Point) -> str:
    return ",".join(format_elem(c) for c in pt.coords)


def write_point_set(E: PointSet) -> str:
    lines = [f"q={E.spec.p}^{E.spec.ell} d={E.d}"]
    lines.extend(format_point(pt) for pt in E.points)
    return "\n".join(lines) + "\n"


def read_point_set(text: str) -> PointSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty point-set input")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise ValueError(f"bad point-set header: {lines[0]!r}")
    p, ell, d = (int(g) for g in m.groups())
    spec = field_make(p, ell)
    points = []
    for ln in lines[1:]:
        groups = _COORD_RE.findall(ln)
        if len(groups) != d:
            raise ValueError(f"expected {d} coordinates on line {ln!r}")
        points.append(Point(spec.element(int(c) for c in g.split(",")) for g in groups))
    return PointSet(spec, d, points)
