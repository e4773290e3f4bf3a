from __future__ import annotations

import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnotroute import bench
from cnotroute.bench import (
    BenchConfig,
    fit_summary,
    gen_random_circuit,
    gen_topology_circuit,
    max_distance,
    records_csv,
    rmse,
    run_benchmark,
    summary_csv,
    trial_seed,
)
from cnotroute.errors import BackendFormatError
from cnotroute.topology import Topology


def test_random_circuit_basics():
    assert len(gen_random_circuit(5, 0, 1)) == 0
    assert gen_random_circuit(5, 50, 9) == gen_random_circuit(5, 50, 9)
    assert gen_random_circuit(5, 50, 9) != gen_random_circuit(5, 50, 10)
    with pytest.raises(ValueError):
        gen_random_circuit(1, 3, 0)


def test_random_pairs_are_uniform():
    n, m = 5, 100_000
    c = gen_random_circuit(n, m, 2024)
    freq = Counter(c.gates)
    assert len(freq) == 20 and all(a != b for a, b in freq)
    p = 1 / 20
    sigma = (m * p * (1 - p)) ** 0.5
    assert all(abs(k - m * p) <= 3 * sigma for k in freq.values())
    chi2 = sum((k - m * p) ** 2 / (m * p) for k in freq.values())
    assert chi2 < 43.82  # 0.999 quantile of chi-square with 19 degrees of freedom


def test_topology_walk(nairobi):
    c = gen_topology_circuit(nairobi, 500, 3)
    assert c.n == 7
    assert all(nairobi.has_edge(a, b) for a, b in c.gates)
    assert all(x != y for x, y in zip(c.gates, c.gates[1:]))
    assert gen_topology_circuit(nairobi, 500, 3) == c


def test_topology_first_gate_covers_all_directed_edges(nairobi):
    seen = Counter(gen_topology_circuit(nairobi, 1, s).gates[0] for s in range(2400))
    assert len(seen) == 12
    assert all(abs(k - 200) < 4 * (2400 / 12 * 11 / 12) ** 0.5 for k in seen.values())


def test_topology_walk_needs_two_edges():
    with pytest.raises(ValueError):
        gen_topology_circuit(Topology([0, 1], [(0, 1, 0.01)]), 3, 0)


def test_metric_examples():
    assert rmse([0.3, 0.4], [0.3, 0.4]) == 0
    assert rmse([0.5], [0.4]) == pytest.approx(0.1)
    assert rmse([1, 0], [0, 1]) == 1
    assert max_distance([0.2, 0.3], [0.2, 0.3]) == 0
    assert max_distance([0.1, 0.9], [0.2, 0.85]) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        rmse([], [])


@settings(max_examples=100)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=30),
       st.tuples(st.floats(0, 1), st.floats(0, 1)))
def test_max_distance_never_drops_when_appending(pairs, extra):
    xs, ys = map(list, zip(*pairs))
    before = max_distance(xs, ys)
    assert max_distance(xs + [extra[0]], ys + [extra[1]]) >= before


def test_trial_seed_is_stable():
    assert trial_seed(0, 5, 64, 3) == trial_seed(0, 5, 64, 3)
    assert len({trial_seed(0, 5, 64, t) for t in range(100)}) == 100


def test_config_validation():
    ok = BenchConfig.from_json(json.dumps({"backend": "nairobi", "widths": [5], "counts": [8]}))
    assert ok.trials == 100 and ok.algorithms == ["rowcol", "permrowcol", "napermrowcol"]
    for bad in [{"backend": "nairobi", "widths": [5], "counts": [0]},
                {"backend": "nairobi", "widths": [5], "counts": [8], "trials": 0},
                {"backend": "nairobi", "widths": [5], "counts": [8], "algorithms": ["sabre"]},
                {"backend": "nairobi", "widths": [5], "counts": [8], "colour": "blue"}]:
        with pytest.raises(BackendFormatError):
            BenchConfig.from_json(json.dumps(bad))


def test_single_cell_gives_one_record():
    cfg = BenchConfig(backend="nairobi", widths=[5], counts=[16], trials=1, algorithms=["permrowcol"])
    recs = run_benchmark(cfg)
    assert len(recs) == 1
    r = recs[0]
    assert r.synth_count >= 0 and r.prob is not None and r.runtime_us is None
    assert records_csv(recs).splitlines()[0] == ",".join(bench.RECORD_FIELDS)


def test_oracle_cap_leaves_prob_blank():
    cfg = BenchConfig(backend="guadalupe", widths=[12], counts=[8], trials=2, oracle_max_width=10)
    recs = run_benchmark(cfg)
    assert all(r.prob is None for r in recs)
    assert records_csv(recs).splitlines()[1].split(",")[8] == ""


def test_topology_generator_routes_cleanly():
    cfg = BenchConfig(backend="nairobi", widths=[7], counts=[32], trials=3,
                      algorithms=["napermrowcol"], generator="topology")
    assert len(run_benchmark(cfg)) == 3


def test_csv_is_deterministic_across_job_counts():
    cfg = BenchConfig(backend="nairobi", widths=[5, 6], counts=[8, 32], trials=4, seed=17)
    a = records_csv(run_benchmark(cfg, jobs=1))
    b = records_csv(run_benchmark(cfg, jobs=3))
    assert a == b


def test_zero_noise_fit_is_exact():
    g = Topology(range(5), [(i, i + 1, 0.0) for i in range(4)], name="quiet")
    cfg = BenchConfig(backend="quiet", widths=[5], counts=[16], trials=6, algorithms=["napermrowcol"])
    recs = run_benchmark(cfg, topology=g)
    summ = fit_summary(recs)
    for b in summ.bins:
        assert b.mean_prob == pytest.approx(0, abs=1e-15) and b.mean_cost == 0
    for vals in summ.rmse.values():
        assert all(v == pytest.approx(0, abs=1e-15) for v in vals.values())
    assert summary_csv(summ).splitlines()[0] == ",".join(bench.SUMMARY_FIELDS)


def test_fit_summary_bins_and_pooling():
    mk = lambda k, prob, c: bench.BenchRecord(5, 8, "napermrowcol", 0, k, c, c * 2, c, prob)
    recs = [mk(3, 0.1, 0.1), mk(3, 0.2, 0.25), mk(3, 0.3, 0.3), mk(4, 0.5, 0.9)]
    summ = fit_summary(recs)
    assert [(b.synth_count, b.n_samples) for b in summ.bins] == [(3, 3), (4, 1)]
    assert summ.bins[0].maxdist_cost == pytest.approx(0.05)
    # The single-sample bin is left out of the pooled RMSE.
    assert summ.rmse[5]["cost"] == pytest.approx(np.sqrt(0.05 ** 2 / 3))
