"""Empirically locating the witness threshold.

Sweeps set sizes across the 2k*q^(d/2) boundary and prints per-size
success rates.  At or above the boundary the rate must be exactly 1.0
(the harness aborts otherwise); below it, rates are observations.
"""

from fqdilate import ExperimentConfig, run_threshold_sweep

config = ExperimentConfig(
    p=7, d=2, k=1, edge_spec="path", r_spec="all-squares",
    sizes=(4, 6, 8, 10, 12, 14, 17, 20), trials=100, seed=1,
)
records, summary = run_threshold_sweep(config)
threshold = 2 * config.k * 7  # 2k q^(d/2) for q = 7, d = 2

print(f"q=7, k=1, path edge, {config.trials} trials per size, all square ratios")
print(f"{'size':>5} {'rate':>8}  {'note'}")
for size_str, cell in summary["per_size"].items():
    size = int(size_str)
    total = cell["successes"] + cell["failures"]
    rate = cell["successes"] / total
    note = "guaranteed" if size >= threshold else ""
    print(f"{size:>5} {rate:>8.3f}  {note}")

by_method = {}
for rec in records:
    by_method[rec.method] = by_method.get(rec.method, 0) + 1
print()
print("method usage:", dict(sorted(by_method.items())))
