"""Extremal point sets certified by exhaustive search.

Two constructions of size about q^(d/2) in dimension 2 admit no dilated
configuration at all for suitable square ratios:

* the subfield grid: the product of the embedded index-2 subfield with
  itself, paired with any square ratio outside that subfield;
* the unit sphere (for q = 3 mod 4), paired with any square ratio
  outside {0, 1} and any edge set containing a triangle.

A certificate is only valid when the backtracking search ran to
exhaustion; a guard-exceeded run never certifies anything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _ranks
from .errors import GuardExceededError
from .field import FieldElem, FieldSpec, field_make, squares_nonzero, subfield_embed
from .geometry import Point, PointSet, sphere
from .search import EdgeSet, NODE_GUARD, search_nodes_used


@dataclass(frozen=True)
class SharpnessCertificate:
    construction: str           # subfield_grid | unit_sphere | custom
    parameters: tuple[int, ...]
    size_e: int
    ratio_rank: int
    edges_label: str
    exhausted: bool
    witness_found: bool
    nodes_searched: int

    @property
    def valid(self) -> bool:
        return self.exhausted and not self.witness_found

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "parameters": list(self.parameters),
            "size_e": self.size_e,
            "ratio_rank": self.ratio_rank,
            "edges": self.edges_label,
            "exhausted": self.exhausted,
            "witness_found": self.witness_found,
            "nodes_searched": self.nodes_searched,
            "valid": self.valid,
        }


def build_subfield_grid(p: int, ell: int) -> tuple[FieldSpec, PointSet, frozenset[FieldElem]]:
    """The grid F_{p^ell} x F_{p^ell} inside F_{p^(2ell)}^2, with its ratios.

    Requires p = 3 (mod 4) and odd ell, so the coordinate subfield has no
    nonzero vector of zero norm.  Returns the big field, the grid (of
    size exactly q = p^(2ell)) and the admissible ratios: nonzero squares
    of the big field outside the embedded subfield.
    """
    if p % 4 != 3:
        raise ValueError("the grid construction needs p = 3 (mod 4)")
    if ell % 2 != 1:
        raise ValueError("the grid construction needs odd extension degree")
    small = field_make(p, ell)
    big = field_make(p, 2 * ell)
    embedded = [subfield_embed(small, big, small.from_rank(i)) for i in range(small.q)]
    grid = PointSet(big, 2, (Point((a, b)) for a in embedded for b in embedded))
    embedded_set = frozenset(embedded)
    admissible = frozenset(
        s for s in squares_nonzero(big) if s not in embedded_set
    )
    if not admissible:
        raise AssertionError("nonzero squares always outnumber the subfield")
    return big, grid, admissible


def build_unit_sphere(q: int) -> tuple[FieldSpec, PointSet]:
    """The radius-1 sphere in F_q^2 (q = 3 mod 4), of size exactly q + 1."""
    p, ell = _factor_prime_power(q)
    if q % 4 != 3:
        raise ValueError("the sphere construction needs q = 3 (mod 4)")
    spec = field_make(p, ell)
    center = Point((spec.zero, spec.zero))
    return spec, sphere(spec, 2, center, spec.one)


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 3:
        raise ValueError(f"{q} is not an odd prime power")
    for p in range(3, q + 1, 2):
        if q % p == 0:
            ell = 0
            m = q
            while m % p == 0:
                m //= p
                ell += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, ell
    raise ValueError(f"{q} is not an odd prime power")


def certify_no_dilated(E: PointSet, r: FieldElem, edges: EdgeSet,
                       *, construction: str = "custom",
                       parameters: tuple[int, ...] = (),
                       max_nodes: int = NODE_GUARD) -> SharpnessCertificate:
    """Run the exhaustive finder and record whether it ran to completion.

    The certificate is valid only when exhausted and no witness exists.
    """
    try:
        witness, nodes = search_nodes_used(E, r, edges, max_nodes=max_nodes)
        exhausted = True
        found = witness is not None
    except GuardExceededError:
        exhausted = False
        found = False
        nodes = max_nodes
    return SharpnessCertificate(
        construction=construction,
        parameters=tuple(parameters),
        size_e=len(E),
        ratio_rank=r.rank,
        edges_label=edges.label(),
        exhausted=exhausted,
        witness_found=found,
        nodes_searched=nodes,
    )


def sphere_pair_intersection(c1: Point, r1: FieldElem, c2: Point,
                             r2: FieldElem) -> PointSet:
    """S(c1; r1) intersect S(c2; r2) in F_q^2, by enumeration."""
    if c1.d != 2 or c2.d != 2:
        raise ValueError("sphere intersection is a d = 2 operation")
    spec = c1.spec
    s1 = sphere(spec, 2, c1, r1)
    s2 = sphere(spec, 2, c2, r2)
    common = frozenset(p.rank for p in s1) & frozenset(p.rank for p in s2)
    return PointSet.from_ranks(spec, 2, sorted(common))


def max_distinct_sphere_overlap(spec: FieldSpec) -> int:
    """Largest |S1 intersect S2| over all distinct (center, radius) pairs in F_q^2.

    Exhaustive: builds every sphere as a bitmask over ambient ranks and
    intersects all pairs bit-parallel.  For q = 3 (mod 4) the answer is
    at most 2.
    """
    calc = _ranks.point_calc(spec, 2)
    masks = []
    all_ranks = np.arange(calc.size, dtype=np.int64)
    for center in range(calc.size):
        norms = calc.norms(calc.sub(all_ranks, np.int64(center)))
        for radius in range(spec.q):
            bits = 0
            for point_rank in all_ranks[norms == radius]:
                bits |= 1 << int(point_rank)
            masks.append(bits)
    best = 0
    for i in range(len(masks)):
        mi = masks[i]
        for j in range(i + 1, len(masks)):
            overlap = (mi & masks[j]).bit_count()
            if overlap > best:
                best = overlap
    return best
