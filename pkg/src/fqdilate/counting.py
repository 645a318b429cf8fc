"""Exact counting of dilated tuple families and the inequality chain.

For a point set E, a square ratio r with root s, and an orthogonal matrix
theta, every pair (u, v) in E^2 determines the offset z = u - s*theta(v).
The table of offset multiplicities drives everything here: tuple families
that share an offset coordinate-wise reduce to power sums and falling
factorials of the table values, and families constrained only on an edge
set factor over the connected components of the edge graph.

Every count is an exact integer and every bound an exact rational; the
chain verifier compares them with no floating point anywhere.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _ranks
from .errors import GuardExceededError
from .field import FieldElem, is_square, sqrt
from .geometry import Point, PointSet
from .orthogonal import OrthMatrix, enumerate_orthogonal
from .search import EdgeSet, NODE_GUARD, count_dilated_tuples

# Dense offset tables above this ambient size switch to sparse maps.
DENSE_TABLE_GUARD = 1 << 20
# Literal tuple enumeration (the cross-validation oracle) refuses larger spaces.
DIRECT_GUARD = 1 << 26
# The closed-form edge-constrained count materializes an |E|^(k+1) tensor.
TENSOR_GUARD = 1 << 20

FAMILIES = ("aligned", "aligned-distinct", "edge-aligned", "pair-collapsed")


def _require_ratio(r: FieldElem) -> None:
    if r.is_zero() or not is_square(r):
        raise ValueError("ratio must be a nonzero square")


def _offset_vector_ranks(E: PointSet, r: FieldElem, theta: OrthMatrix) -> np.ndarray:
    """Ranks of s*theta(v) for v in E (s the canonical root of r)."""
    s = sqrt(r)
    return np.array([theta.apply(v).scale(s).rank for v in E.points], dtype=np.int64)


class CountingTable:
    """Multiplicities of z = u - s*theta(v) over (u, v) in E^2.

    Stored dense (array over ambient ranks) up to DENSE_TABLE_GUARD,
    sparse otherwise.  The values always sum to |E|^2 and no single value
    exceeds |E|.
    """

    __slots__ = ("E", "ratio", "theta", "_dense", "_sparse")

    def __init__(self, E: PointSet, ratio: FieldElem, theta: OrthMatrix):
        _require_ratio(ratio)
        self.E = E
        self.ratio = ratio
        self.theta = theta
        calc = _ranks.point_calc(E.spec, E.d)
        w = _offset_vector_ranks(E, ratio, theta)
        offsets = calc.sub(E.ranks()[:, None], w[None, :]).ravel()
        if calc.size <= DENSE_TABLE_GUARD:
            self._dense = np.bincount(offsets, minlength=calc.size)
            self._sparse = None
        else:
            self._dense = None
            self._sparse = Counter(int(z) for z in offsets)

    def count_at(self, z: Point) -> int:
        if z.spec != self.E.spec or z.d != self.E.d:
            raise ValueError("query point is not in the ambient space")
        if self._dense is not None:
            return int(self._dense[z.rank])
        return self._sparse.get(z.rank, 0)

    def nonzero_values(self) -> list[int]:
        """The nonzero table values (offsets with zero count carry nothing)."""
        if self._dense is not None:
            return [int(v) for v in self._dense[self._dense > 0]]
        return list(self._sparse.values())

    def nonzero_items(self):
        """(Point, count) pairs in offset rank order."""
        spec, d = self.E.spec, self.E.d
        if self._dense is not None:
            for z_rank in np.nonzero(self._dense)[0]:
                yield Point.from_rank(spec, d, int(z_rank)), int(self._dense[z_rank])
        else:
            for z_rank in sorted(self._sparse):
                yield Point.from_rank(spec, d, z_rank), self._sparse[z_rank]

    def total(self) -> int:
        return sum(self.nonzero_values())

    def power_sum(self, p: int) -> int:
        """Sum of value^p over all offsets, as an exact Python integer."""
        if p < 1:
            raise ValueError("exponent must be >= 1")
        hist = Counter(self.nonzero_values())
        return sum(mult * value**p for value, mult in hist.items())

    def split_power_sum(self, p: int, threshold: int) -> tuple[int, int]:
        """Power sums over values >= threshold and values < threshold."""
        hist = Counter(self.nonzero_values())
        high = sum(mult * value**p for value, mult in hist.items() if value >= threshold)
        low = sum(mult * value**p for value, mult in hist.items() if value < threshold)
        return high, low

    def falling_factorial_sum(self, length: int) -> int:
        """Sum over offsets of value * (value-1) * ... * (value-length+1)."""
        hist = Counter(self.nonzero_values())
        total = 0
        for value, mult in hist.items():
            term = 1
            for step in range(length):
                term *= value - step
            if term > 0:
                total += mult * term
        return total


def offset_counts(E: PointSet, r: FieldElem, theta: OrthMatrix) -> CountingTable:
    """The offset multiplicity table for (E, r, theta)."""
    return CountingTable(E, r, theta)


def offset_power_sum(E: PointSet, r: FieldElem, p: int) -> int:
    """Sum over all orthogonal theta and all offsets of table(z)^p."""
    if p < 1:
        raise ValueError("exponent must be >= 1")
    _require_ratio(r)
    total = 0
    for theta in enumerate_orthogonal(E.spec, E.d):
        total += offset_counts(E, r, theta).power_sum(p)
    return total


# -- tuple families ------------------------------------------------------------


def count_tuple_family(E: PointSet, r: FieldElem, theta: OrthMatrix, k: int,
                       family: str, *, edges: EdgeSet | None = None,
                       pair: tuple[int, int] | None = None,
                       method: str = "closed") -> int:
    """Exact size of one of the four tuple families in E^(2k+2).

    Families (u_1..u_{k+1}, v_1..v_{k+1}), writing w_i = s*theta(v_i):

    * "aligned": u_i - u_j = w_i - w_j for every pair i < j.
    * "aligned-distinct": aligned, plus v_i != v_j for every pair.
    * "edge-aligned": u_i - u_j = w_i - w_j only for (i, j) in `edges`,
      plus v_i != v_j for every pair.
    * "pair-collapsed": aligned, plus v_alpha = v_beta for the given pair.

    method="closed" uses offset-table identities; method="direct" loops
    over every tuple literally (the cross-validation oracle, guarded).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if k < 1:
        raise ValueError("k must be >= 1")
    _require_ratio(r)
    if family == "edge-aligned":
        if edges is None:
            raise ValueError("edge-aligned needs an edge set")
        if edges.k != k:
            raise ValueError("edge set arity does not match k")
    if family == "pair-collapsed":
        if pair is None:
            raise ValueError("pair-collapsed needs an index pair")
        a, b = pair
        if not (1 <= a < b <= k + 1):
            raise ValueError(f"bad index pair {pair}")
    if method == "direct":
        return _count_direct(E, r, theta, k, family, edges, pair)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")

    if family == "edge-aligned":
        return _count_edge_aligned(E, r, theta, edges)
    table = offset_counts(E, r, theta)
    if family == "aligned":
        return table.power_sum(k + 1)
    if family == "pair-collapsed":
        return table.power_sum(k)
    return table.falling_factorial_sum(k + 1)


@functools.lru_cache(maxsize=None)
def _distinct_mask(n: int, arity: int) -> np.ndarray:
    grids = np.indices((n,) * arity)
    mask = np.ones((n,) * arity, dtype=bool)
    for a in range(arity):
        for b in range(a + 1, arity):
            mask &= grids[a] != grids[b]
    return mask


def _pair_membership_matrix(E: PointSet, r: FieldElem, theta: OrthMatrix) -> np.ndarray:
    """B[v_idx, z_rank] = 1 iff z + w_v lies in E (column sums = table values)."""
    calc = _ranks.point_calc(E.spec, E.d)
    n = len(E)
    if n * calc.size > 1 << 24:
        raise GuardExceededError("pair membership matrix would be too large")
    memb = calc.membership_mask(E.ranks())
    w = _offset_vector_ranks(E, r, theta)
    all_z = np.arange(calc.size, dtype=np.int64)
    B = np.empty((n, calc.size), dtype=np.int64)
    for idx in range(n):
        B[idx] = memb[calc.add(all_z, np.int64(w[idx]))]
    return B


def _count_edge_aligned(E: PointSet, r: FieldElem, theta: OrthMatrix,
                        edges: EdgeSet) -> int:
    # Offsets are forced equal exactly along connected components of the
    # edge graph, so the count factors per component for each assignment
    # of v's; only the global v-distinctness couples components, handled
    # by summing a product tensor over the distinct-index mask.
    n = len(E)
    arity = edges.k + 1
    if n < arity:
        return 0
    if n**arity > TENSOR_GUARD:
        raise GuardExceededError("edge-aligned tensor would exceed the guard")
    comps = edges.components()
    B = _pair_membership_matrix(E, r, theta)
    tensor = np.ones((n,) * arity, dtype=np.int64)
    scalar = 1
    for comp in comps:
        if len(comp) == 1:
            scalar *= len(E)  # any u works and the offset is free
            continue
        letters = "abcdefgh"[: len(comp)]
        subscript = ",".join(f"{c}z" for c in letters) + "->" + letters
        gram = np.einsum(subscript, *([B] * len(comp)))
        shape = [n if (v + 1) in comp else 1 for v in range(arity)]
        tensor = tensor * gram.reshape(shape)
    total = int((tensor * _distinct_mask(n, arity)).sum())
    return total * scalar


def _count_direct(E: PointSet, r: FieldElem, theta: OrthMatrix, k: int,
                  family: str, edges: EdgeSet | None,
                  pair: tuple[int, int] | None) -> int:
    """Literal enumeration of E^(2k+2) against the defining conditions."""
    n = len(E)
    arity = k + 1
    if n ** (2 * arity) > DIRECT_GUARD:
        raise GuardExceededError("direct enumeration space exceeds the guard")
    calc = _ranks.point_calc(E.spec, E.d)
    ranks = E.ranks()
    w = _offset_vector_ranks(E, r, theta)
    du = calc.sub(ranks[:, None], ranks[None, :])
    dw = calc.sub(w[:, None], w[None, :])
    all_pairs = [(i, j) for i in range(arity) for j in range(i + 1, arity)]
    if family == "edge-aligned":
        constrained = [(i - 1, j - 1) for i, j in edges.sorted_edges()]
    else:
        constrained = all_pairs
    need_distinct = family in ("aligned-distinct", "edge-aligned")
    collapse = None
    if family == "pair-collapsed":
        collapse = (pair[0] - 1, pair[1] - 1)
    total = 0
    for us in itertools.product(range(n), repeat=arity):
        for vs in itertools.product(range(n), repeat=arity):
            if collapse is not None and vs[collapse[0]] != vs[collapse[1]]:
                continue
            if need_distinct and any(vs[i] == vs[j] for i, j in all_pairs):
                continue
            if all(du[us[i], us[j]] == dw[vs[i], vs[j]] for i, j in constrained):
                total += 1
    return total


# -- the proven lower bound and the chain verifier ----------------------------


def dilated_count_lower_bound(size_e: int, q: int, d: int, k: int) -> Fraction:
    """Exact rational |E|^(2k+2) / (2 q^(dk)) - (k^2+k)^(k+1) q^d / 2.

    Positive whenever |E| >= 2k q^(d/2); strictly increasing in |E|.
    """
    if size_e < 1 or q < 2 or d < 1 or k < 1:
        raise ValueError("all arguments must be positive")
    return (Fraction(size_e ** (2 * k + 2), 2 * q ** (d * k))
            - Fraction((k * k + k) ** (k + 1) * q**d, 2))


@dataclass(frozen=True)
class ChainReport:
    """Every quantity in the counting chain for one (E, r, edges) instance."""

    q: int
    d: int
    k: int
    size_e: int
    edges_label: str
    ratio_rank: int
    group_order: int
    power_sum_top: int          # sum over theta, z of table^(k+1)
    power_sum_low: int          # sum over theta, z of table^k
    aligned_total: int          # tuples aligned on every pair
    aligned_distinct_total: int  # aligned with distinct v's
    edge_aligned_total: int     # aligned on the edge set, distinct v's
    dilated_count: int          # configuration pairs on the edge set
    holder_bound: Fraction      # |O| |E|^(2k+2) / q^(dk)
    split_threshold: int        # k(k+1)
    split_high: Fraction        # top/2 - C(k+1,2) * (high-value part)
    split_low: Fraction         # top/2 - C(k+1,2) * (low-value part)
    theorem_bound: Fraction
    flags: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_dict(self) -> dict:
        out = {
            "q": self.q, "d": self.d, "k": self.k, "size_e": self.size_e,
            "edges": self.edges_label, "ratio_rank": self.ratio_rank,
            "group_order": self.group_order,
            "power_sum_top": self.power_sum_top,
            "power_sum_low": self.power_sum_low,
            "aligned_total": self.aligned_total,
            "aligned_distinct_total": self.aligned_distinct_total,
            "edge_aligned_total": self.edge_aligned_total,
            "dilated_count": self.dilated_count,
            "holder_bound": str(self.holder_bound),
            "split_threshold": self.split_threshold,
            "split_high": str(self.split_high),
            "split_low": str(self.split_low),
            "theorem_bound": str(self.theorem_bound),
            "flags": dict(sorted(self.flags.items())),
            "passed": self.passed,
        }
        return out


def verify_chain(E: PointSet, r: FieldElem, edges: EdgeSet,
                 *, max_nodes: int = NODE_GUARD) -> ChainReport:
    """Compute the whole counting chain exactly and check every inequality.

    Flags (all must hold on every instance; a False flag means the
    implementation is broken, and callers should treat it as such):

    * a_count_vs_averages: dilated_count >= edge_aligned_total / |O|
      >= aligned_distinct_total / |O|.
    * b_per_theta_union_bound: per theta, the distinct-v count is at
      least the aligned count minus C(k+1,2) times the k-th power sum.
    * c_power_mean: the (k+1)-power sum is at least |O| |E|^(2k+2) / q^(dk).
    * d_split_nonneg: the high-value split term is nonnegative at
      threshold k(k+1).
    * e_final_bound: dilated_count >= the closed-form lower bound.
    """
    _require_ratio(r)
    k = edges.k
    spec, d = E.spec, E.d
    n = len(E)
    thetas = enumerate_orthogonal(spec, d)
    group = len(thetas)
    binom = k * (k + 1) // 2
    threshold = k * (k + 1)

    top_total = 0
    low_total = 0
    distinct_total = 0
    edge_total = 0
    high_part = 0   # sum over (theta, z) with value >= threshold of value^k
    low_part = 0
    per_theta_ok = True
    for theta in thetas:
        table = offset_counts(E, r, theta)
        top = table.power_sum(k + 1)
        low = table.power_sum(k)
        distinct = table.falling_factorial_sum(k + 1)
        hi, lo = table.split_power_sum(k, threshold)
        edge = _count_edge_aligned(E, r, theta, edges)
        top_total += top
        low_total += low
        distinct_total += distinct
        edge_total += edge
        high_part += hi
        low_part += lo
        if distinct < top - binom * low:
            per_theta_ok = False

    dilated = count_dilated_tuples(E, r, edges, max_nodes=max_nodes)
    holder = Fraction(group * n ** (2 * k + 2), spec.q ** (d * k))
    split_high = Fraction(top_total, 2) - binom * high_part
    split_low = Fraction(top_total, 2) - binom * low_part
    bound = dilated_count_lower_bound(n, spec.q, d, k) if n >= 1 else Fraction(0)

    flags = {
        "a_count_vs_averages": (
            Fraction(dilated) >= Fraction(edge_total, group)
            and edge_total >= distinct_total
        ),
        "b_per_theta_union_bound": per_theta_ok,
        "c_power_mean": Fraction(top_total) >= holder,
        "d_split_nonneg": split_high >= 0,
        "e_final_bound": Fraction(dilated) >= bound,
    }
    return ChainReport(
        q=spec.q, d=d, k=k, size_e=n,
        edges_label=edges.label(), ratio_rank=r.rank,
        group_order=group,
        power_sum_top=top_total, power_sum_low=low_total,
        aligned_total=top_total,
        aligned_distinct_total=distinct_total,
        edge_aligned_total=edge_total,
        dilated_count=dilated,
        holder_bound=holder,
        split_threshold=threshold,
        split_high=split_high, split_low=split_low,
        theorem_bound=bound,
        flags=flags,
    )
