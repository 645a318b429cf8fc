"""Seeded experiment harness: sampling, threshold sweeps, quotient checks.

Everything is reproducible: random subsets come from PCG64 streams keyed
by (seed, size, trial), so a trial's point set does not depend on how
many other trials ran or in what order, and parallel execution produces
the same records as sequential execution.

Witness searches above the proven size thresholds must succeed; the
harness raises FalsificationError instead of recording such a failure as
a data point.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import FalsificationError, GuardExceededError
from .field import FieldElem, FieldSpec, field_make, squares_nonzero
from .geometry import AMBIENT_GUARD, PointSet, format_elem, parse_elem, quotient_set
from .search import (EdgeSet, NODE_GUARD, find_congruent_tuple_translation,
                     find_dilated_tuple_scaling, parse_edge_spec,
                     scaling_guaranteed, search_nodes_used,
                     translation_guaranteed, verify_witness)

CSV_HEADER = ("q", "d", "k", "edges", "r", "size", "trial", "method",
              "found", "nodes", "micros")

METHODS = ("auto", "bruteforce", "translation", "scaling")


@dataclass(frozen=True)
class ExperimentConfig:
    """A sweep description; JSON config files mirror these fields."""

    p: int
    ell: int = 1
    d: int = 2
    k: int = 1
    edge_spec: str = "path"
    r_spec: str = "all-squares"
    sizes: tuple[int, ...] = ()
    trials: int = 0
    seed: int = 0
    method: str = "auto"
    guard_nodes: int = NODE_GUARD
    timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative 64-bit integer")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        spec = self.field()
        total = spec.q**self.d
        for s in self.sizes:
            if not 1 <= s <= total:
                raise ValueError(f"size {s} outside 1..{total}")
        self.edge_set()  # validates shape/k combination

    def field(self) -> FieldSpec:
        return field_make(self.p, self.ell)

    def edge_set(self) -> EdgeSet:
        return parse_edge_spec(self.edge_spec, self.k)

    def ratios(self) -> list[FieldElem]:
        spec = self.field()
        if self.r_spec == "all-squares":
            return sorted(squares_nonzero(spec), key=lambda e: e.rank)
        r = parse_elem(spec, self.r_spec)
        return [r]

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            "p": self.p, "ell": self.ell, "d": self.d, "k": self.k,
            "edge_spec": self.edge_spec, "r_spec": self.r_spec,
            "sizes": list(self.sizes), "trials": self.trials,
            "seed": self.seed, "method": self.method,
            "guard_nodes": self.guard_nodes, "timing": self.timing,
        }


@dataclass(frozen=True)
class TrialRecord:
    q: int
    d: int
    k: int
    edges: str
    r: str
    size: int
    trial: int
    method: str
    found: bool
    guard: bool
    nodes: int
    micros: int

    def found_cell(self) -> str:
        if self.guard:
            return "guard"
        return "true" if self.found else "false"

    def to_row(self) -> list:
        return [self.q, self.d, self.k, self.edges, self.r, self.size,
                self.trial, self.method, self.found_cell(), self.nodes,
                self.micros]


def trial_rng(seed: int, size: int, trial: int) -> np.random.Generator:
    """The PCG64 stream for one trial; independent of all other trials."""
    return np.random.default_rng(np.random.SeedSequence([seed, size, trial]))


def sample_subset(spec: FieldSpec, d: int, size: int,
                  rng: np.random.Generator) -> PointSet:
    """Uniform random size-subset of F_q^d by partial Fisher-Yates.

    The shuffle runs over the rank enumeration with a sparse swap map, so
    memory is O(size) even for large ambient spaces.
    """
    total = spec.q**d
    if total > AMBIENT_GUARD:
        raise ValueError(f"ambient size {total} exceeds the guard {AMBIENT_GUARD}")
    if not 1 <= size <= total:
        raise ValueError(f"subset size {size} outside 1..{total}")
    swaps: dict[int, int] = {}
    chosen = []
    for i in range(size):
        j = int(rng.integers(i, total))
        vi = swaps.get(i, i)
        vj = swaps.get(j, j)
        swaps[i] = vj
        swaps[j] = vi
        chosen.append(vj)
    return PointSet.from_ranks(spec, d, chosen)


def attempt_witness(method: str, E: PointSet, r: FieldElem, edges: EdgeSet,
                    max_nodes: int):
    """Run one witness search; returns (witness_or_None, nodes, method_used).

    Constructive scans report zero nodes (they expand no search tree);
    the exhaustive search reports its live node count.
    """
    k = edges.k
    one = E.spec.one
    if method == "translation":
        if r != one:
            raise ValueError("translation method requires ratio 1")
        return find_congruent_tuple_translation(E, k), 0, "translation"
    if method == "scaling":
        return find_dilated_tuple_scaling(E, r, k), 0, "scaling"
    if method == "bruteforce":
        w, nodes = search_nodes_used(E, r, edges, max_nodes=max_nodes)
        return w, nodes, "bruteforce"
    # auto: constructive method by ratio, exhaustive fallback only when
    # the constructive guarantee does not apply.
    if r == one:
        w = find_congruent_tuple_translation(E, k)
        if w is not None:
            return w, 0, "translation"
        if translation_guaranteed(E, k):
            raise FalsificationError(
                f"translation scan failed at |E|={len(E)} >= (k+3) q^(d/2)")
    else:
        w = find_dilated_tuple_scaling(E, r, k)
        if w is not None:
            return w, 0, "scaling"
        if scaling_guaranteed(E, k):
            raise FalsificationError(
                f"overlap scan failed at |E|^2={len(E) ** 2} >= (k+2) q^d")
    w, nodes = search_nodes_used(E, r, edges, max_nodes=max_nodes)
    return w, nodes, "bruteforce"


def run_single_trial(config: ExperimentConfig, size: int,
                     trial: int) -> list[TrialRecord]:
    spec = config.field()
    edges = config.edge_set()
    E = sample_subset(spec, config.d, size, trial_rng(config.seed, size, trial))
    rows = []
    for r in config.ratios():
        start = time.perf_counter_ns() if config.timing else 0
        guard_hit = False
        try:
            witness, nodes, used = attempt_witness(config.method, E, r, edges,
                                                   config.guard_nodes)
        except GuardExceededError:
            witness, nodes, used = None, config.guard_nodes, config.method
            guard_hit = True
        found = witness is not None
        if found and not verify_witness(witness, edges, r):
            raise FalsificationError(
                f"witness from {used} failed independent re-verification")
        micros = (time.perf_counter_ns() - start) // 1000 if config.timing else 0
        rows.append(TrialRecord(
            q=spec.q, d=config.d, k=edges.k, edges=edges.label(),
            r=format_elem(r), size=size, trial=trial, method=used,
            found=found, guard=guard_hit, nodes=nodes, micros=int(micros),
        ))
    return rows


def run_threshold_sweep(config: ExperimentConfig,
                        parallel: int = 1) -> tuple[list[TrialRecord], dict]:
    """All (size, trial, ratio) records plus per-size success aggregates.

    Sizes at or above the proven threshold (|E|^2 >= 4 k^2 q^d, with k
    the edge-set arity minus one) must succeed in every trial; a clean
    "not found" there raises FalsificationError rather than producing a
    row.  Guard breaches are recorded per-row.
    """
    tasks = [(size, trial) for size in config.sizes
             for trial in range(config.trials)]
    if parallel > 1 and tasks:
        worker = functools.partial(_trial_task, config)
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            chunks = list(pool.map(worker, tasks))
    else:
        chunks = [_trial_task(config, t) for t in tasks]
    records = [rec for chunk in chunks for rec in chunk]

    spec = config.field()
    k = config.edge_set().k
    threshold_sq = 4 * k * k * spec.q**config.d
    summary: dict[int, dict[str, int]] = {}
    for rec in records:
        cell = summary.setdefault(rec.size, {"successes": 0, "failures": 0,
                                             "guards": 0})
        if rec.guard:
            cell["guards"] += 1
        elif rec.found:
            cell["successes"] += 1
        else:
            cell["failures"] += 1
            if rec.size**2 >= threshold_sq:
                raise FalsificationError(
                    f"no witness at size {rec.size} >= 2k q^(d/2) "
                    f"(trial {rec.trial}, r={rec.r})")
    return records, {
        "per_size": {str(size): summary[size] for size in sorted(summary)},
        "threshold_size_squared": threshold_sq,
    }


def _trial_task(config: ExperimentConfig, task: tuple[int, int]):
    return run_single_trial(config, task[0], task[1])


def records_to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.to_row())
    return buf.getvalue()


def records_to_json(records: list[TrialRecord], summary: dict | None = None) -> str:
    payload = {
        "records": [dict(zip(CSV_HEADER, rec.to_row())) for rec in records],
    }
    if summary is not None:
        payload["summary"] = summary
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# -- quotient-set checks -------------------------------------------------------


def quotient_threshold(q: int, d: int, constant: int) -> int:
    """Smallest integer m with m >= constant * q^(d/2), compared exactly."""
    target = constant * constant * q**d
    m = math.isqrt(target)
    if m * m < target:
        m += 1
    return m


def run_quotient_check(spec: FieldSpec, d: int, size: int, trials: int,
                       seed: int, squares_only: bool = False) -> dict:
    """Sample point sets and check their distance-ratio sets.

    Even d (default): sets of size >= 9 q^(d/2) must have ratio set equal
    to the whole field.  Odd d requires squares_only, where sets of size
    >= 6 q^(d/2) must have ratio set containing every square.  Any
    failure falsifies a proven statement and raises.

    For small q the proven threshold can exceed q^d itself; the full
    space is then the only set satisfying (the closure of) the
    hypothesis, so sizes down to q^d are accepted in that case.
    """
    if d % 2 == 0 and squares_only:
        raise ValueError("squares_only applies to odd d")
    if d % 2 == 1 and not squares_only:
        raise ValueError("odd d supports only the squares_only check")
    constant = 6 if squares_only else 9
    needed = min(quotient_threshold(spec.q, d, constant), spec.q**d)
    if size < needed:
        raise ValueError(
            f"size {size} below the proven threshold {needed} for this check")
    want_full = frozenset(spec.from_rank(i) for i in range(spec.q))
    want_squares = frozenset(squares_nonzero(spec)) | {spec.zero}
    failures = []
    for trial in range(trials):
        E = sample_subset(spec, d, size, trial_rng(seed, size, trial))
        ratios = quotient_set(E)
        if squares_only:
            ok = want_squares <= ratios
        else:
            ok = ratios == want_full
        if not ok:
            failures.append(trial)
    report = {
        "q": spec.q, "d": d, "size": size, "trials": trials,
        "check": "squares-subset" if squares_only else "full-field",
        "threshold": needed,
        "failures": failures,
        "passed": not failures,
    }
    if failures:
        raise FalsificationError(
            f"quotient check failed on trials {failures}: report={report}")
    return report
