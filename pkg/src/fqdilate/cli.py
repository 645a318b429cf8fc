"""Command-line interface.

Subcommands: sweep, verify, search, sharpness, ortho, quotient.  All
output is deterministic for fixed flags (timings are opt-in because they
would break byte-identical reruns).

Exit codes: 0 success, 2 falsification (an exactly-verified guarantee
failed), 3 resource guard exceeded, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .counting import verify_chain
from .errors import FalsificationError, GuardExceededError
from .experiment import (ExperimentConfig, attempt_witness, records_to_csv,
                         records_to_json, run_quotient_check,
                         run_threshold_sweep, quotient_threshold,
                         sample_subset, trial_rng)
from .field import FieldElem, FieldSpec, field_make, is_square, squares_nonzero
from .geometry import PointSet, format_elem, format_point, parse_elem, read_point_set
from .orthogonal import enumerate_orthogonal
from .search import (NODE_GUARD, edges_path, parse_edge_spec,
                     theorem_guaranteed, verify_witness)
from .sharpness import (build_subfield_grid, build_unit_sphere,
                        certify_no_dilated)

EXIT_OK = 0
EXIT_FALSIFIED = 2
EXIT_GUARD = 3
EXIT_BAD_INPUT = 4


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _resolve_field(q: int, ell: int | None) -> FieldSpec:
    """--q is the field size; --ell may restate (or, for prime q, raise) the degree."""
    p, e = _factor(q)
    if ell is None or ell == e:
        return field_make(p, e)
    if e == 1 and ell > 1:
        return field_make(q, ell)
    raise UsageError(f"--ell {ell} is inconsistent with q={q}={p}^{e}")


def _factor(q: int) -> tuple[int, int]:
    if q < 3 or q % 2 == 0:
        raise UsageError(f"{q} is not an odd prime power")
    for p in range(3, q + 1, 2):
        if q % p == 0:
            ell = 0
            while q % p == 0:
                q //= p
                ell += 1
            if q != 1:
                raise UsageError("field size must be a prime power")
            return p, ell
    raise UsageError(f"{q} is not an odd prime power")


def _load_set(spec: FieldSpec, d: int, set_spec: str) -> PointSet:
    if set_spec.startswith("random:"):
        parts = set_spec.split(":")
        if len(parts) != 3:
            raise UsageError("--set random form is random:<size>:<seed>")
        size, seed = int(parts[1]), int(parts[2])
        return sample_subset(spec, d, size, trial_rng(seed, size, 0))
    with open(set_spec, "r", encoding="utf-8") as fh:
        E = read_point_set(fh.read())
    if E.spec != spec or E.d != d:
        raise UsageError(
            f"point-set file is over GF({E.spec.q})^{E.d}, flags say GF({spec.q})^{d}")
    return E


def _ratio_list(spec: FieldSpec, r_spec: str) -> list[FieldElem]:
    if r_spec == "all-squares":
        return sorted(squares_nonzero(spec), key=lambda e: e.rank)
    if r_spec == "auto":
        return [min(squares_nonzero(spec), key=lambda e: e.rank)]
    r = parse_elem(spec, r_spec)
    if r.is_zero() or not is_square(r):
        raise UsageError(f"ratio {r_spec} is not a nonzero square in GF({spec.q})")
    return [r]


def _witness_dict(w) -> dict:
    return {
        "method": w.method,
        "ratio": format_elem(w.ratio),
        "xs": [format_point(p) for p in w.xs],
        "ys": [format_point(p) for p in w.ys],
    }


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# -- subcommand handlers (return (text, exit_code)) ----------------------------


def _cmd_ortho(args) -> tuple[str, int]:
    spec = _resolve_field(args.q, args.ell)
    mats = enumerate_orthogonal(spec, args.d)
    payload = {"q": spec.q, "d": args.d, "group_order": len(mats)}
    if args.list:
        payload["matrices"] = [
            [[format_elem(e) for e in row] for row in m.entries] for m in mats
        ]
    return _dump(payload), EXIT_OK


def _cmd_verify(args) -> tuple[str, int]:
    spec = _resolve_field(args.q, args.ell)
    edges = parse_edge_spec(args.edges, args.k)
    E = _load_set(spec, args.d, args.set)
    reports = []
    ok = True
    for r in _ratio_list(spec, args.r):
        report = verify_chain(E, r, edges, max_nodes=args.guard_nodes)
        reports.append(report.to_dict())
        ok = ok and report.passed
    text = _dump(reports if len(reports) > 1 else reports[0])
    return text, EXIT_OK if ok else EXIT_FALSIFIED


def _cmd_search(args) -> tuple[str, int]:
    spec = _resolve_field(args.q, args.ell)
    edges = parse_edge_spec(args.shape, args.k)
    E = _load_set(spec, args.d, args.set)
    results = []
    worst = EXIT_OK
    for r in _ratio_list(spec, args.r):
        try:
            w, nodes, _ = attempt_witness(args.method, E, r, edges,
                                          args.guard_nodes)
        except GuardExceededError:
            results.append({"r": format_elem(r), "status": "GUARD"})
            worst = max(worst, EXIT_GUARD)
            continue
        if w is None:
            if args.method in ("auto", "bruteforce") and theorem_guaranteed(E, edges.k):
                raise FalsificationError(
                    f"exhaustive search found nothing at |E|={len(E)} >= 2k q^(d/2)")
            results.append({"r": format_elem(r), "status": "NONE"})
        else:
            if not verify_witness(w, edges, r):
                raise FalsificationError("witness failed independent re-verification")
            results.append({"r": format_elem(r), "status": "FOUND",
                            "nodes": nodes, "witness": _witness_dict(w)})
    return _dump(results), worst


def _cmd_sharpness(args) -> tuple[str, int]:
    certs = []
    if args.construction == "grid":
        spec, E, admissible = build_subfield_grid(args.p, args.ell)
        edges = (parse_edge_spec(args.edges, args.k) if args.edges
                 else edges_path(1))
        ratios = sorted(admissible, key=lambda e: e.rank)
        label = "subfield_grid"
        params = (args.p, args.ell)
    else:
        spec, E = build_unit_sphere(args.q)
        edges = (parse_edge_spec(args.edges, args.k) if args.edges
                 else parse_edge_spec("edges:1-2,1-3,2-3", None))
        one = spec.one
        ratios = sorted((s for s in squares_nonzero(spec) if s != one),
                        key=lambda e: e.rank)
        label = "unit_sphere"
        params = (spec.q,)
    code = EXIT_OK
    for r in ratios:
        cert = certify_no_dilated(E, r, edges, construction=label,
                                  parameters=params, max_nodes=args.guard_nodes)
        certs.append(cert.to_dict())
        if not cert.exhausted:
            code = max(code, EXIT_GUARD)
        elif cert.witness_found:
            code = EXIT_FALSIFIED
    return _dump({"construction": label, "size_e": len(E),
                  "certificates": certs}), code


def _cmd_quotient(args) -> tuple[str, int]:
    spec = _resolve_field(args.q, args.ell)
    constant = 6 if args.squares_only else 9
    size = args.size if args.size else min(
        quotient_threshold(spec.q, args.d, constant), spec.q**args.d)
    seed = args.seed if args.seed is not None else 0
    report = run_quotient_check(spec, args.d, size, args.trials, seed,
                                squares_only=args.squares_only)
    return _dump(report), EXIT_OK


def _cmd_sweep(args) -> tuple[str, int]:
    data = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    overrides = {
        "p": args.p, "ell": args.ell, "d": args.d, "k": args.k,
        "edge_spec": args.edges, "r_spec": args.r,
        "sizes": [int(s) for s in args.sizes.split(",")] if args.sizes else None,
        "trials": args.trials, "seed": args.seed, "method": args.method,
        "guard_nodes": args.guard_nodes, "timing": args.timing or None,
    }
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    if "p" not in data:
        raise UsageError("sweep needs --p (or a config file with p)")
    config = ExperimentConfig.from_dict(data)
    records, summary = run_threshold_sweep(config, parallel=args.parallel)
    if args.format == "csv":
        return records_to_csv(records), EXIT_OK
    return records_to_json(records, summary), EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="fqdilate", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, field=True, guard=True):
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--parallel", type=int, default=1)
        if guard:
            p.add_argument("--guard-nodes", dest="guard_nodes", type=int,
                           default=NODE_GUARD)
        if field:
            p.add_argument("--q", type=int, required=True,
                           help="field size (an odd prime power)")
            p.add_argument("--ell", type=int, default=None,
                           help="extension degree; with a prime --q, build GF(q^ell)")

    p = sub.add_parser("ortho", help="enumerate the orthogonal group")
    common(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--list", action="store_true", help="print every matrix")
    p.set_defaults(func=_cmd_ortho)

    p = sub.add_parser("verify", help="verify the exact counting chain")
    common(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--edges", default="path",
                   help="path|cycle|star|edges:<i-j,...>")
    p.add_argument("--r", default="auto", help="ratio element, or auto")
    p.add_argument("--set", required=True, help="file path or random:<size>:<seed>")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="find a dilated configuration")
    common(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--shape", default="path",
                   help="path|cycle|star|edges:<i-j,...>")
    p.add_argument("--r", default="all-squares",
                   help="ratio element, or all-squares")
    p.add_argument("--set", required=True, help="file path or random:<size>:<seed>")
    p.add_argument("--method", choices=("auto", "bruteforce", "translation",
                                        "scaling"), default="auto")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("sharpness", help="certify the extremal constructions")
    common(p, field=False)
    p.add_argument("--construction", choices=("grid", "sphere"), required=True)
    p.add_argument("--p", type=int, default=3, help="grid characteristic")
    p.add_argument("--ell", type=int, default=1, help="grid subfield degree")
    p.add_argument("--q", type=int, default=7, help="sphere field size")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--edges", default=None,
                   help="path|cycle|star|edges:<i-j,...> (defaults per construction)")
    p.set_defaults(func=_cmd_sharpness)

    p = sub.add_parser("quotient", help="check distance-ratio sets")
    common(p, guard=False)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--size", type=int, default=None,
                   help="sample size (default: the proven threshold)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--squares-only", dest="squares_only", action="store_true",
                   help="odd-d variant: ratios must cover every square")
    p.set_defaults(func=_cmd_quotient)

    p = sub.add_parser("sweep", help="threshold sweep over set sizes")
    common(p, field=False)
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--edges", default=None)
    p.add_argument("--r", default=None)
    p.add_argument("--sizes", default=None, help="comma-separated set sizes")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--method", choices=("auto", "bruteforce", "translation",
                                        "scaling"), default=None)
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock micros (breaks byte-identical reruns)")
    p.set_defaults(func=_cmd_sweep, format="csv")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.format == "csv" and args.command != "sweep":
            raise UsageError("csv output is only available for sweep")
        text, code = args.func(args)
    except FalsificationError as exc:
        print(f"FALSIFIED: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except GuardExceededError as exc:
        print(f"GUARD: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
