"""A small benchmark: three algorithms, random circuits, width 5 on Nairobi.

Uses the same harness as ``cnotroute bench``, with fewer trials so it runs in
a few seconds.  Raise ``trials`` to 100 for the full protocol.
"""

from __future__ import annotations

from statistics import mean

from cnotroute.bench import BenchConfig, fit_summary, run_benchmark

cfg = BenchConfig(backend="nairobi", widths=[5], counts=[16, 64, 256], trials=30, seed=1)
records = run_benchmark(cfg, jobs=2)

print("mean synthesized CNOT count / mean Cost")
print(f"{'m':>5}  " + "  ".join(f"{a:>20}" for a in cfg.algorithms))
for m in cfg.counts:
    cells = []
    for algo in cfg.algorithms:
        rs = [r for r in records if r.orig_count == m and r.algo == algo]
        cells.append(f"{mean(r.synth_count for r in rs):>10.2f} / {mean(r.cost for r in rs):.4f}")
    print(f"{m:>5}  " + "  ".join(f"{c:>20}" for c in cells))

summary = fit_summary(r for r in records if r.algo == "napermrowcol")
print("\nfit of each cost function to the oracle (noise-aware results only):")
for name in ("cost", "cost1", "cost2"):
    print(f"  RMSE {name:<5} {summary.rmse[5][name]:.2e}   max distance {summary.maxdist[5][name]:.2e}")
