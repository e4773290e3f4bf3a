"""Command-line front end.

Exit codes: 0 success, 2 usage or input errors, 3 infeasible routing input
(the qubit map does not land on a connected set of registers).  Data goes to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench
from .circuits import CnotCircuit, emit, guess_format, parse
from .cost import alpha as alpha_of
from .cost import cost as cost_report
from .errors import CnotRouteError, Disconnected
from .fidelity import ORACLE_MAX_WIDTH, avg_gate_fidelity
from .gf2 import from_circuit, relabel
from .synthesis import ALGORITHMS, synthesize
from .topology import connected_prefix, induced_subgraph, resolve_backend

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _read_circuit(path: str) -> CnotCircuit:
    return parse(Path(path).read_text(), guess_format(path))


def _parse_map(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise CnotRouteError(f"bad --map {text!r}; expected comma-separated integers") from None


def cmd_synth(args) -> int:
    g_full = resolve_backend(args.backend)
    circ = _read_circuit(args.circuit)
    n = circ.n
    phi = _parse_map(args.map) if args.map else connected_prefix(g_full, n)
    if len(phi) != n:
        raise CnotRouteError(f"--map has {len(phi)} entries for a {n}-qubit circuit")
    if len(set(phi)) != n:
        raise CnotRouteError("--map is not injective")
    for v in phi:
        if v not in g_full:
            raise CnotRouteError(f"--map register {v} is not on backend {g_full.name}")
    try:
        g = induced_subgraph(g_full, phi)
    except Disconnected as exc:
        print(f"error: mapped registers are not connected: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    A = relabel(from_circuit(circ), phi)
    alpha_value = args.alpha if args.alpha is not None else alpha_of(max(n, 2))
    res = synthesize(args.algo, A, g, alpha_value if args.algo == "napermrowcol" else None)
    out_circ = CnotCircuit(len(g_full), res.circuit.gates)
    rep = cost_report(out_circ, g, alpha_value=alpha_of(max(n, 2)))
    omap = res.output_map
    perm = ",".join(str(omap[phi[i]]) for i in range(n))
    report = [
        f"perm: {perm}",
        f"gates: {rep.gate_count}",
        f"cost: {rep.cost!r}",
        f"cost1: {rep.cost1!r}",
        f"cost2: {rep.cost2!r}",
    ]
    text = emit(out_circ, "simple")
    if args.out:
        Path(args.out).write_text(text)
        sys.stdout.write("\n".join(report) + "\n")
    else:
        sys.stdout.write(text + "\n".join(report) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig.from_json(Path(args.config).read_text())
    records = bench.run_benchmark(cfg, jobs=args.jobs)
    rec_path, sum_path = bench.write_outputs(records, args.out_dir)
    print(f"wrote {len(records)} records to {rec_path} and summary to {sum_path}", file=sys.stderr)
    return EXIT_OK


def cmd_fidelity(args) -> int:
    g = resolve_backend(args.backend)
    circ = _read_circuit(args.circuit)
    width = args.width if args.width is not None else circ.n
    if width > args.max_width:
        print(f"error: width {width} exceeds oracle limit {args.max_width}", file=sys.stderr)
        return EXIT_USAGE
    for c, t in circ.gates:
        if c >= width or t >= width:
            raise CnotRouteError(f"gate ({c},{t}) lies outside width {width}")
    c2 = CnotCircuit(width, circ.gates)
    fid = avg_gate_fidelity(c2, g, width, max_width=args.max_width)
    rep = cost_report(c2, g, max(width, 2))
    print(f"f_avg: {fid.f_avg!r}")
    print(f"prob: {fid.prob!r}")
    print(f"cost: {rep.cost!r}")
    print(f"cost1: {rep.cost1!r}")
    print(f"cost2: {rep.cost2!r}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.mode == "random":
        if args.n is None:
            raise CnotRouteError("random mode needs --n")
        circ = bench.gen_random_circuit(args.n, args.m, args.seed)
    else:
        if not args.backend:
            raise CnotRouteError("topo mode needs --backend")
        g_full = resolve_backend(args.backend)
        n = args.n if args.n is not None else len(g_full)
        g = induced_subgraph(g_full, connected_prefix(g_full, n))
        circ = bench.gen_topology_circuit(g, args.m, args.seed, n=len(g_full))
    text = emit(circ, "qasm-lite" if args.out and args.out.endswith(".qasm") else "simple")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cnotroute", description="Noise-aware CNOT circuit routing.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="route a CNOT circuit onto a backend")
    s.add_argument("--backend", required=True, help="bundled name or backend JSON path")
    s.add_argument("--circuit", required=True, help="circuit file (.qasm for qasm-lite)")
    s.add_argument("--algo", choices=sorted(ALGORITHMS), default="napermrowcol")
    s.add_argument("--map", help="comma list: physical register of each logical qubit")
    s.add_argument("--alpha", type=float, help="override the alpha factor")
    s.add_argument("--out", help="write the routed circuit here instead of stdout")
    s.set_defaults(func=cmd_synth)

    b = sub.add_parser("bench", help="run a benchmark grid")
    b.add_argument("--config", required=True)
    b.add_argument("--out-dir", required=True)
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("fidelity", help="exact average gate fidelity of a circuit")
    f.add_argument("--backend", required=True)
    f.add_argument("--circuit", required=True)
    f.add_argument("--width", type=int)
    f.add_argument("--max-width", type=int, default=ORACLE_MAX_WIDTH)
    f.set_defaults(func=cmd_fidelity)

    gsub = sub.add_parser("gen", help="generate a circuit")
    gsub.add_argument("--mode", choices=["random", "topo"], required=True)
    gsub.add_argument("--backend")
    gsub.add_argument("--n", type=int)
    gsub.add_argument("--m", type=int, required=True)
    gsub.add_argument("--seed", type=int, default=0)
    gsub.add_argument("--out")
    gsub.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CnotRouteError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
