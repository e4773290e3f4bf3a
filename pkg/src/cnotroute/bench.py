"""Circuit generators, the benchmark harness and goodness-of-fit metrics.

Every trial draws from its own generator seeded by ``(master, width, count,
trial)``, so results do not depend on execution order or worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .circuits import CnotCircuit
from .cost import cost as cost_report
from .errors import BackendFormatError
from .fidelity import avg_gate_fidelity_rates
from .gf2 import from_circuit, relabel
from .synthesis import ALGORITHMS, synthesize
from .topology import Topology, connected_prefix, induced_subgraph, resolve_backend

RECORD_FIELDS = ["width", "orig_count", "algo", "seed", "synth_count",
                 "cost", "cost1", "cost2", "prob", "runtime_us"]
SUMMARY_FIELDS = ["width", "synth_count", "n_samples", "mean_prob", "mean_cost",
                  "mean_cost1", "mean_cost2", "maxdist_cost", "maxdist_cost1", "maxdist_cost2"]
MIN_BIN = 3


# --- generators -------------------------------------------------------------

def trial_seed(master: int, width: int, count: int, trial: int) -> int:
    ss = np.random.SeedSequence([master, width, count, trial])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def gen_random_circuit(n: int, m: int, seed: int) -> CnotCircuit:
    """``m`` CNOTs with ``(control, target)`` uniform over ordered pairs of distinct qubits."""
    if n < 2:
        raise ValueError("random circuits need at least two qubits")
    rng = np.random.default_rng(seed)
    cs = rng.integers(0, n, size=m)
    ts = rng.integers(0, n - 1, size=m)
    ts = ts + (ts >= cs)
    return CnotCircuit(n, tuple(zip(cs.tolist(), ts.tolist())))


def gen_topology_circuit(g: Topology, m: int, seed: int, n: int | None = None) -> CnotCircuit:
    """Walk over directed edges of ``g``, never repeating the previous directed edge."""
    directed = sorted([(u, v) for u, v in g.edges] + [(v, u) for u, v in g.edges])
    if len(g.edges) < 2:
        raise ValueError("topology-based generation needs at least two edges")
    rng = np.random.default_rng(seed)
    gates = []
    prev = None
    for _ in range(m):
        if prev is None:
            e = directed[int(rng.integers(len(directed)))]
        else:
            k = int(rng.integers(len(directed) - 1))
            e = directed[k if k < prev else k + 1]
        gates.append(e)
        prev = directed.index(e)
    width = n if n is not None else max(g.vertices) + 1
    return CnotCircuit(width, tuple(gates))


# --- metrics ----------------------------------------------------------------

def rmse(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys) or not xs:
        raise ValueError("rmse needs two non-empty sequences of equal length")
    return math.sqrt(math.fsum((x - y) ** 2 for x, y in zip(xs, ys)) / len(xs))


def max_distance(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise ValueError("max_distance needs sequences of equal length")
    return max((abs(x - y) for x, y in zip(xs, ys)), default=0.0)


# --- harness ----------------------------------------------------------------

@dataclass
class BenchConfig:
    backend: str
    widths: list[int]
    counts: list[int]
    trials: int = 100
    seed: int = 0
    algorithms: list[str] = field(default_factory=lambda: ["rowcol", "permrowcol", "napermrowcol"])
    oracle_max_width: int = 10
    generator: str = "random"
    timing: bool = False

    def validate(self) -> None:
        if not self.widths or any(not isinstance(w, int) or w < 2 for w in self.widths):
            raise BackendFormatError("widths must be integers >= 2")
        if not self.counts or any(not isinstance(c, int) or c < 1 for c in self.counts):
            raise BackendFormatError("counts must be integers >= 1")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise BackendFormatError("trials must be >= 1")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise BackendFormatError(f"unknown algorithm {a!r}")
        if self.generator not in ("random", "topology"):
            raise BackendFormatError(f"unknown generator {self.generator!r}")

    @classmethod
    def from_json(cls, text: str) -> "BenchConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise BackendFormatError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise BackendFormatError(f"unknown config fields {sorted(extra)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg


@dataclass
class BenchRecord:
    width: int
    orig_count: int
    algo: str
    seed: int
    synth_count: int
    cost: float
    cost1: float
    cost2: float
    prob: float | None = None
    runtime_us: int | None = None
    trial: int = 0


def _work(args) -> list[BenchRecord]:
    cfg, g_json, width, count, trial = args
    from .topology import load_backend

    full = load_backend(g_json)
    verts = connected_prefix(full, width)
    g = induced_subgraph(full, verts)
    seed = trial_seed(cfg.seed, width, count, trial)
    if cfg.generator == "random":
        logical = gen_random_circuit(width, count, seed)
    else:
        pos = {v: i for i, v in enumerate(verts)}
        phys = gen_topology_circuit(g, count, seed)
        logical = CnotCircuit(width, tuple((pos[a], pos[b]) for a, b in phys.gates))
    A = relabel(from_circuit(logical), verts)
    index = {v: i for i, v in enumerate(verts)}
    out = []
    for algo in cfg.algorithms:
        t0 = time.perf_counter()
        res = synthesize(algo, A, g)
        dt = time.perf_counter() - t0
        rep = cost_report(res.circuit, g, width)
        prob = None
        if width <= cfg.oracle_max_width:
            gates = [(index[a], index[b]) for a, b in res.circuit.gates]
            rates = [g.weight(a, b) for a, b in res.circuit.gates]
            prob = avg_gate_fidelity_rates(width, gates, rates).prob
        out.append(BenchRecord(
            width=width, orig_count=count, algo=algo, seed=seed,
            synth_count=len(res.circuit), cost=rep.cost, cost1=rep.cost1, cost2=rep.cost2,
            prob=prob, runtime_us=int(dt * 1e6) if cfg.timing else None, trial=trial,
        ))
    return out


def run_benchmark(cfg: BenchConfig, jobs: int = 1, topology: Topology | None = None) -> list[BenchRecord]:
    cfg.validate()
    g = topology if topology is not None else resolve_backend(cfg.backend)
    for w in cfg.widths:
        if w > len(g):
            raise BackendFormatError(f"width {w} exceeds backend size {len(g)}")
    g_json = g.to_json()
    items = [(cfg, g_json, w, m, t) for w in cfg.widths for m in cfg.counts for t in range(cfg.trials)]
    records: list[BenchRecord] = []
    if jobs <= 1:
        for it in items:
            records.extend(_work(it))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for recs in pool.map(_work, items, chunksize=max(1, len(items) // (4 * jobs))):
                records.extend(recs)
    order = {a: k for k, a in enumerate(cfg.algorithms)}
    records.sort(key=lambda r: (r.width, r.orig_count, r.trial, order[r.algo]))
    return records


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def records_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in records:
        d = asdict(r)
        w.writerow([_fmt(d[k]) for k in RECORD_FIELDS])
    return buf.getvalue()


# --- cost-fit study -----------------------------------------------------------

@dataclass
class FitBin:
    width: int
    synth_count: int
    n_samples: int
    mean_prob: float
    mean_cost: float
    mean_cost1: float
    mean_cost2: float
    maxdist_cost: float
    maxdist_cost1: float
    maxdist_cost2: float


@dataclass
class FitSummary:
    bins: list[FitBin]
    rmse: dict[int, dict[str, float]]
    maxdist: dict[int, dict[str, float]]


def fit_summary(records: Iterable[BenchRecord]) -> FitSummary:
    """Bin records with an oracle value by (width, synthesized count).

    Per-bin max distances are over individual circuits.  The per-width RMSE
    pools every circuit in bins holding at least three samples.
    """
    groups: dict[tuple[int, int], list[BenchRecord]] = defaultdict(list)
    for r in records:
        if r.prob is not None:
            groups[(r.width, r.synth_count)].append(r)
    bins = []
    pooled: dict[int, list[BenchRecord]] = defaultdict(list)
    for (w, k), rs in sorted(groups.items()):
        prob = [r.prob for r in rs]
        vals = {name: [getattr(r, name) for r in rs] for name in ("cost", "cost1", "cost2")}
        bins.append(FitBin(
            width=w, synth_count=k, n_samples=len(rs),
            mean_prob=float(np.mean(prob)),
            mean_cost=float(np.mean(vals["cost"])),
            mean_cost1=float(np.mean(vals["cost1"])),
            mean_cost2=float(np.mean(vals["cost2"])),
            maxdist_cost=max_distance(prob, vals["cost"]),
            maxdist_cost1=max_distance(prob, vals["cost1"]),
            maxdist_cost2=max_distance(prob, vals["cost2"]),
        ))
        if len(rs) >= MIN_BIN:
            pooled[w].extend(rs)
    agg_rmse: dict[int, dict[str, float]] = {}
    agg_max: dict[int, dict[str, float]] = {}
    for w, rs in sorted(pooled.items()):
        prob = [r.prob for r in rs]
        agg_rmse[w] = {name: rmse(prob, [getattr(r, name) for r in rs]) for name in ("cost", "cost1", "cost2")}
        agg_max[w] = {name: max_distance(prob, [getattr(r, name) for r in rs]) for name in ("cost", "cost1", "cost2")}
    return FitSummary(bins=bins, rmse=agg_rmse, maxdist=agg_max)


def summary_csv(summary: FitSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS)
    for b in summary.bins:
        d = asdict(b)
        w.writerow([_fmt(d[k]) for k in SUMMARY_FIELDS])
    return buf.getvalue()


def cost_fit_study(cfg: BenchConfig, jobs: int = 1) -> tuple[list[BenchRecord], FitSummary]:
    """NAPermRowCol over the configured grid, compared against the fidelity oracle."""
    cfg = BenchConfig(**{**asdict(cfg), "algorithms": ["napermrowcol"]})
    records = run_benchmark(cfg, jobs=jobs)
    return records, fit_summary(records)


def write_outputs(records: list[BenchRecord], out_dir: str | Path) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rec_path = out / "records.csv"
    sum_path = out / "summary.csv"
    rec_path.write_text(records_csv(records))
    sum_path.write_text(summary_csv(fit_summary(records)))
    return rec_path, sum_path
