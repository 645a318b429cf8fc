"""Constructive and exhaustive search for dilated point configurations.

A configuration is a pair of (k+1)-tuples (xs, ys) of points, each tuple
pairwise distinct, with ||y_i - y_j|| = r * ||x_i - x_j|| for every index
pair (i, j) in a prescribed edge set.  Three finders are provided:

* an exhaustive lexicographic backtracking search (also used to count all
  configurations exactly),
* a translation scan for ratio 1, which looks for a difference c with
  at least k+1 points shared between E and c + E,
* a dilate-and-translate scan for square ratios r != 1, which maximizes
  |tE intersect (E + a)| over a, where t*t = r.

The two scans certify every index pair at once, so their witnesses are
valid for any edge set of the same arity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _ranks
from .errors import FalsificationError, GuardExceededError
from .field import FieldElem, is_square, sqrt
from .geometry import Point, PointSet, norm

# Exhaustive searches refuse instances whose unpruned tuple space
# |E|^(2k+2) exceeds this, and also count live nodes against it.
NODE_GUARD = 1 << 30


class EdgeSet:
    """A nonempty set of index pairs (i, j), 1 <= i < j <= k+1."""

    __slots__ = ("k", "edges")

    def __init__(self, k: int, edges):
        if k < 1:
            raise ValueError("k must be >= 1")
        normalized = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"degenerate edge ({i},{j})")
            if i > j:
                i, j = j, i
            if not (1 <= i < j <= k + 1):
                raise ValueError(f"edge ({i},{j}) out of range for k={k}")
            normalized.add((i, j))
        if not normalized:
            raise ValueError("edge set must be nonempty")
        self.k = k
        self.edges = frozenset(normalized)

    @property
    def vertices(self) -> int:
        return self.k + 1

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_complete(self) -> bool:
        return len(self.edges) == self.k * (self.k + 1) // 2

    def components(self) -> list[tuple[int, ...]]:
        """Connected components of the edge graph on vertices 1..k+1.

        Isolated vertices appear as singleton components.
        """
        parent = list(range(self.k + 2))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for v in range(1, self.k + 2):
            groups.setdefault(find(v), []).append(v)
        return sorted(tuple(g) for g in groups.values())

    def label(self) -> str:
        return ";".join(f"{i}-{j}" for i, j in self.sorted_edges())

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeSet) and self.k == other.k and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.k, self.edges))

    def __repr__(self) -> str:
        return f"EdgeSet(k={self.k}, {self.label()})"


def edges_path(k: int) -> EdgeSet:
    """The path 1-2-...-(k+1): k constrained consecutive pairs."""
    if k < 1:
        raise ValueError("paths need k >= 1")
    return EdgeSet(k, [(i, i + 1) for i in range(1, k + 1)])


def edges_cycle(k: int) -> EdgeSet:
    """The k-cycle on vertices 1..k (arity k, so the EdgeSet has k-1 as its k)."""
    if k < 3:
        raise ValueError("cycles need k >= 3")
    return EdgeSet(k - 1, [(i, i + 1) for i in range(1, k)] + [(1, k)])


def edges_star(k: int) -> EdgeSet:
    """The star with k edges: vertex 1 joined to 2..k+1."""
    if k < 1:
        raise ValueError("stars need k >= 1")
    return EdgeSet(k, [(1, i) for i in range(2, k + 2)])


def edges_all_pairs(k: int) -> EdgeSet:
    return EdgeSet(k, [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 2)])


def parse_edge_spec(text: str, k: int | None = None) -> EdgeSet:
    """Parse a CLI edge spec: path|cycle|star (with k) or edges:1-2,2-3."""
    text = text.strip()
    if text in ("path", "cycle", "star"):
        if k is None:
            raise ValueError(f"edge shape {text!r} needs k")
        return {"path": edges_path, "cycle": edges_cycle, "star": edges_star}[text](k)
    if text.startswith("edges:"):
        pairs = []
        for part in text[len("edges:"):].split(","):
            i, _, j = part.strip().partition("-")
            pairs.append((int(i), int(j)))
        arity = max(max(i, j) for i, j in pairs)
        if k is not None and k + 1 < arity:
            raise ValueError(f"explicit edges need {arity} vertices but k={k}")
        return EdgeSet(k if k is not None else arity - 1, pairs)
    raise ValueError(f"bad edge spec {text!r}")


@dataclass(frozen=True)
class DilatedWitness:
    """A certified pair of (k+1)-tuples realizing a dilation by `ratio`."""

    xs: tuple[Point, ...]
    ys: tuple[Point, ...]
    ratio: FieldElem
    method: str  # bruteforce | translation | scaling


def verify_witness(w: DilatedWitness, edges: EdgeSet, r: FieldElem) -> bool:
    """Recheck distinctness and every constrained edge from scratch."""
    if len(w.xs) != edges.k + 1 or len(w.ys) != edges.k + 1:
        raise ValueError("witness arity does not match the edge set")
    if len({p.rank for p in w.xs}) != len(w.xs):
        return False
    if len({p.rank for p in w.ys}) != len(w.ys):
        return False
    for i, j in edges.sorted_edges():
        lhs = norm(w.ys[i - 1] - w.ys[j - 1])
        rhs = r * norm(w.xs[i - 1] - w.xs[j - 1])
        if lhs != rhs:
            return False
    return True


def _require_nonzero_square(r: FieldElem) -> None:
    if r.is_zero():
        raise ValueError("dilation ratio must be nonzero")
    if not is_square(r):
        raise ValueError("dilation ratio must be a square")


class _DilationSearch:
    """Shared backtracking engine over point indices of one set E.

    Candidate order is ascending point rank; the tuple assignment order is
    x_1..x_{k+1} then y_1..y_{k+1}, so the first witness found is the
    lexicographically smallest one.  Partial x-tuples are pruned as soon
    as a constrained target distance is not realized between any two
    distinct points of E; y-candidates come from a (point, distance)
    index.  Exact y-completion counts are memoized per target profile.
    """

    def __init__(self, E: PointSet, r: FieldElem, edges: EdgeSet, max_nodes: int):
        _require_nonzero_square(r)
        self.E = E
        self.edges = edges
        self.arity = edges.k + 1
        self.n = len(E)
        self.max_nodes = max_nodes
        self.nodes = 0
        space = self.n ** (2 * self.arity)
        if space > max_nodes:
            raise GuardExceededError(
                f"|E|^(2k+2) = {space} exceeds the node guard {max_nodes}"
            )
        calc = _ranks.point_calc(E.spec, E.d)
        ranks = E.ranks()
        diffs = calc.sub(ranks[:, None], ranks[None, :])
        self.dist = calc.norms(diffs)
        mul_r = _ranks.elem_calc(E.spec).mul_table(r)
        self.target = mul_r[self.dist]
        off_diag = ~np.eye(self.n, dtype=bool)
        self.realized: frozenset[int] = frozenset(
            int(v) for v in np.unique(self.dist[off_diag])
        ) if self.n > 1 else frozenset()
        by_pair: dict[tuple[int, int], list[int]] = {}
        for i in range(self.n):
            for j in range(self.n):
                if i != j:
                    by_pair.setdefault((i, int(self.dist[i, j])), []).append(j)
        self.by_pair = {key: tuple(v) for key, v in by_pair.items()}
        # edges (i, m) with i < m, grouped by the later vertex m
        self.prior: list[list[int]] = [[] for _ in range(self.arity + 1)]
        for i, j in edges.sorted_edges():
            self.prior[j].append(i)
        self._profile_counts: dict[tuple[int, ...], int] = {}
        self._profile_empty: dict[tuple[int, ...], bool] = {}

    def _bump(self, amount: int = 1) -> None:
        self.nodes += amount
        if self.nodes > self.max_nodes:
            raise GuardExceededError(f"search exceeded the node guard {self.max_nodes}")

    def _profile(self, xs: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(int(self.target[xs[i - 1], xs[j - 1]]) for i, j in self.edges_sorted)

    # -- counting ----------------------------------------------------------

    def count(self) -> int:
        if self.n < self.arity:
            return 0
        self.edges_sorted = self.edges.sorted_edges()
        total = 0
        realized = self.realized
        for xs in itertools.permutations(range(self.n), self.arity):
            self._bump()
            profile = self._profile(xs)
            if any(t not in realized for t in profile):
                continue
            cnt = self._profile_counts.get(profile)
            if cnt is None:
                cnt = self._count_y(profile)
                self._profile_counts[profile] = cnt
            total += cnt
        return total

    def _count_y(self, profile: tuple[int, ...]) -> int:
        targets = {
            (i, j): t for (i, j), t in zip(self.edges_sorted, profile)
        }
        used: list[int] = []

        def rec(m: int) -> int:
            if m > self.arity:
                return 1
            prior = self.prior[m]
            if prior:
                first = self.by_pair.get((used[prior[0] - 1], targets[(prior[0], m)]), ())
                subtotal = 0
                for cand in first:
                    self._bump()
                    if cand in used:
                        continue
                    if any(
                        cand not in self.by_pair.get((used[i - 1], targets[(i, m)]), ())
                        for i in prior[1:]
                    ):
                        continue
                    used.append(cand)
                    subtotal += rec(m + 1)
                    used.pop()
                return subtotal
            subtotal = 0
            for cand in range(self.n):
                self._bump()
                if cand in used:
                    continue
                used.append(cand)
                subtotal += rec(m + 1)
                used.pop()
            return subtotal

        return rec(1)

    # -- first witness -----------------------------------------------------

    def find(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        if self.n < self.arity:
            return None
        self.edges_sorted = self.edges.sorted_edges()
        xs: list[int] = []
        return self._find_x(xs)

    def _find_x(self, xs: list[int]):
        m = len(xs) + 1
        if m > self.arity:
            profile = self._profile(tuple(xs))
            if self._profile_empty.get(profile):
                return None
            ys = self._find_y(profile)
            if ys is None:
                self._profile_empty[profile] = True
                return None
            return tuple(xs), ys
        for cand in range(self.n):
            self._bump()
            if cand in xs:
                continue
            ok = True
            for i in self.prior[m]:
                if int(self.target[xs[i - 1], cand]) not in self.realized:
                    ok = False
                    break
            if not ok:
                continue
            xs.append(cand)
            hit = self._find_x(xs)
            if hit is not None:
                return hit
            xs.pop()
        return None

    def _find_y(self, profile: tuple[int, ...]):
        targets = {
            (i, j): t for (i, j), t in zip(self.edges_sorted, profile)
        }
        used: list[int] = []

        def rec(m: int):
            if m > self.arity:
                return tuple(used)
            prior = self.prior[m]
            if prior:
                first = self.by_pair.get((used[prior[0] - 1], targets[(prior[0], m)]), ())
                candidates = (
                    cand for cand in first
                    if all(
                        cand in self.by_pair.get((used[i - 1], targets[(i, m)]), ())
                        for i in prior[1:]
                    )
                )
            else:
                candidates = range(self.n)
            for cand in candidates:
                self._bump()
                if cand in used:
                    continue
                used.append(cand)
                hit = rec(m + 1)
                if hit is not None:
                    return hit
                used.pop()
            return None

        return rec(1)


def count_dilated_tuples(E: PointSet, r: FieldElem, edges: EdgeSet,
                         *, max_nodes: int = NODE_GUARD) -> int:
    """Exact number of configuration pairs realizing ratio r on `edges`.

    Counts ordered tuple pairs (xs, ys) in E^(2k+2) with both tuples
    pairwise distinct and every constrained edge satisfied.
    """
    engine = _DilationSearch(E, r, edges, max_nodes)
    return engine.count()


def find_dilated_pair_bruteforce(E: PointSet, r: FieldElem, edges: EdgeSet,
                                 *, max_nodes: int = NODE_GUARD) -> DilatedWitness | None:
    """First witness in lexicographic backtracking order, or None (exhaustive).

    A None return is a proof of non-existence within E; resource
    exhaustion raises GuardExceededError instead of returning None.
    """
    engine = _DilationSearch(E, r, edges, max_nodes)
    hit = engine.find()
    if hit is None:
        return None
    xs, ys = hit
    return DilatedWitness(
        xs=tuple(E.points[i] for i in xs),
        ys=tuple(E.points[i] for i in ys),
        ratio=r,
        method="bruteforce",
    )


def search_nodes_used(E: PointSet, r: FieldElem, edges: EdgeSet,
                      *, max_nodes: int = NODE_GUARD) -> tuple[DilatedWitness | None, int]:
    """Like find_dilated_pair_bruteforce but also reports nodes visited."""
    engine = _DilationSearch(E, r, edges, max_nodes)
    hit = engine.find()
    if hit is None:
        return None, engine.nodes
    xs, ys = hit
    w = DilatedWitness(
        xs=tuple(E.points[i] for i in xs),
        ys=tuple(E.points[i] for i in ys),
        ratio=r,
        method="bruteforce",
    )
    return w, engine.nodes


# -- constructive methods -----------------------------------------------------


def floor_sqrt_ambient(E: PointSet) -> int:
    """floor(q^(d/2)) for the ambient space of E."""
    return math.isqrt(E.spec.q**E.d)


def find_congruent_tuple_translation(E: PointSet, k: int) -> DilatedWitness | None:
    """Ratio-1 witness from a translate: k+1 points of E also in c + E.

    Scans candidate differences c != 0 in a fixed deterministic order:
    first a_i - a_j over pairs of S (the first floor(q^(d/2)) points of
    the ambient space in rank order), then every ambient point in rank
    order.  Returns the k+1 rank-smallest intersection points paired
    with their preimages, or None when no such c exists at all.

    Guaranteed to succeed when |E| >= (k+3) * q^(d/2); below that it
    returns whatever the scan finds.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    spec, d = E.spec, E.d
    if len(E) == 0:
        return None
    calc = _ranks.point_calc(spec, d)
    ranks = E.ranks()
    diffs = calc.sub(ranks[:, None], ranks[None, :]).ravel()
    counts = np.bincount(diffs, minlength=calc.size)

    def build(c_rank: int) -> DilatedWitness:
        inside = ranks[
            np.fromiter(
                (E.contains_rank(int(v)) for v in calc.sub(ranks, np.int64(c_rank))),
                dtype=bool, count=len(ranks),
            )
        ]
        chosen = inside[: k + 1]
        xs = tuple(Point.from_rank(spec, d, int(v)) for v in chosen)
        ys = tuple(
            Point.from_rank(spec, d, int(v))
            for v in calc.sub(chosen, np.int64(c_rank))
        )
        return DilatedWitness(xs=xs, ys=ys, ratio=spec.one, method="translation")

    s_size = floor_sqrt_ambient(E)
    seen: set[int] = set()
    for i in range(s_size):
        for j in range(i + 1, s_size):
            c = int(calc.sub(np.int64(i), np.int64(j)))
            if c == 0 or c in seen:
                continue
            seen.add(c)
            if counts[c] >= k + 1:
                return build(c)
    for c in range(1, calc.size):
        if c in seen:
            continue
        if counts[c] >= k + 1:
            return build(c)
    return None


def find_dilated_tuple_scaling(E: PointSet, r: FieldElem, k: int) -> DilatedWitness | None:
    """Witness for a square ratio r != 1 from a maximizing overlap of tE with E + a.

    With t the canonical square root of r, picks the rank-smallest a
    maximizing |tE intersect (E + a)|.  An overlap point x = t*z = y + a
    (y, z in E) contributes the pair (z, y); overlaps of size >= k+2
    always contain k+1 indices with y != z, which form the witness.

    Guaranteed to succeed when |E|^2 >= (k+2) * q^d.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _require_nonzero_square(r)
    spec, d = E.spec, E.d
    if r == spec.one:
        raise ValueError("ratio 1 needs the translation method")
    if len(E) == 0:
        return None
    t = sqrt(r)
    calc = _ranks.point_calc(spec, d)
    ranks = E.ranks()
    t_ranks = calc.scale(t, ranks)
    diffs = calc.sub(t_ranks[:, None], ranks[None, :]).ravel()
    counts = np.bincount(diffs, minlength=calc.size)
    best = int(counts.max())
    if best < k + 2:
        return None
    a_rank = int(np.argmax(counts))  # first maximum = rank-smallest a
    shifted = calc.sub(t_ranks, np.int64(a_rank))
    mask = np.fromiter(
        (E.contains_rank(int(v)) for v in shifted), dtype=bool, count=len(t_ranks)
    )
    overlap = np.sort(t_ranks[mask])
    t_inv = t.inverse()
    pairs = []
    for x_rank in overlap:
        z_rank = int(calc.scale(t_inv, np.int64(x_rank)))
        y_rank = int(calc.sub(np.int64(x_rank), np.int64(a_rank)))
        if y_rank != z_rank:
            pairs.append((z_rank, y_rank))
    assert len(pairs) >= k + 1, "overlap of size k+2 must keep k+1 indices"
    chosen = pairs[: k + 1]
    xs = tuple(Point.from_rank(spec, d, z) for z, _ in chosen)
    ys = tuple(Point.from_rank(spec, d, y) for _, y in chosen)
    return DilatedWitness(xs=xs, ys=ys, ratio=r, method="scaling")


# -- method selection ---------------------------------------------------------


def translation_guaranteed(E: PointSet, k: int) -> bool:
    return len(E) ** 2 >= (k + 3) ** 2 * E.spec.q**E.d


def scaling_guaranteed(E: PointSet, k: int) -> bool:
    return len(E) ** 2 >= (k + 2) * E.spec.q**E.d


def theorem_guaranteed(E: PointSet, k: int) -> bool:
    """|E| >= 2k q^(d/2), compared exactly as |E|^2 >= 4 k^2 q^d."""
    return len(E) ** 2 >= 4 * k * k * E.spec.q**E.d


def find_witness_auto(E: PointSet, r: FieldElem, edges: EdgeSet,
                      *, max_nodes: int = NODE_GUARD) -> DilatedWitness | None:
    """Constructive method per ratio, exhaustive fallback when unguaranteed.

    Raises FalsificationError if a constructive method fails above its
    own proven threshold.
    """
    _require_nonzero_square(r)
    k = edges.k
    if r == E.spec.one:
        w = find_congruent_tuple_translation(E, k)
        if w is not None:
            return w
        if translation_guaranteed(E, k):
            raise FalsificationError(
                f"translation scan failed although |E|={len(E)} >= (k+3) q^(d/2)"
            )
    else:
        w = find_dilated_tuple_scaling(E, r, k)
        if w is not None:
            return w
        if scaling_guaranteed(E, k):
            raise FalsificationError(
                f"overlap scan failed although |E|^2={len(E)**2} >= (k+2) q^d"
            )
    return find_dilated_pair_bruteforce(E, r, edges, max_nodes=max_nodes)
