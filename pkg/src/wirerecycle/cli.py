"""Command-line driver.

    wirerecycle --inputs a.real b.icm --heuristic both --verify
    wirerecycle regress --corpus revlib/ --out report.csv --figure report.png

Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .causal import build_causal_graph
from .circuit import CircuitError
from .formats import ParseError, Stats, emit_schedule, emit_stats_json, load_circuit
from .recycle import Heuristic, M1Mode, recycle
from .verify import MAX_EXHAUSTIVE_INPUTS, VerificationError, check_functional_equivalence, \
    check_plan_sound, is_classical

log = logging.getLogger("wirerecycle")

TABLE_HEADER = "Circuit, Qubits, Ancilla, M1, M2, %M1, %M2"


@dataclass
class RunConfig:
    inputs: list[str]
    format: str = "auto"
    heuristic: str = "both"
    m1_mode: str = M1Mode.ABSOLUTE.value
    verify: bool = False
    emit_schedule: Optional[str] = None
    emit_stats: Optional[str] = None
    emit_dot: Optional[str] = None
    jobs: int = 1
    figure: Optional[str] = None

    def heuristics(self) -> list[Heuristic]:
        if self.heuristic == "both":
            return [Heuristic.M1, Heuristic.M2]
        return [Heuristic.parse(self.heuristic)]


@dataclass
class FileResult:
    path: str
    name: str = ""
    stats: list[Stats] = field(default_factory=list)
    ancilla: int = 0
    qubits: int = 0
    schedules: dict[str, str] = field(default_factory=dict)
    dots: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    verify_failures: list[str] = field(default_factory=list)
    error: Optional[str] = None

    def row(self) -> str:
        by_h = {s.heuristic: s for s in self.stats}
        cells = [self.name, str(self.qubits), str(self.ancilla)]
        cells += [str(by_h[h].recycled) if h in by_h else "-" for h in ("M1", "M2")]
        cells += [str(by_h[h].percent) if h in by_h else "-" for h in ("M1", "M2")]
        return ", ".join(cells)


def process_file(path: str, config: RunConfig) -> FileResult:
    result = FileResult(path)
    try:
        circuit = load_circuit(path, config.format)
        build_causal_graph(circuit)  # surfaces invalid circuits as parse errors
    except (ParseError, CircuitError) as exc:
        result.error = str(exc)
        return result
    result.name = circuit.name
    result.qubits = circuit.num_qubits
    result.ancilla = sum(q.input_ancilla for q in circuit.qubits)
    mode = M1Mode(config.m1_mode)
    classical = is_classical(circuit)
    for h in config.heuristics():
        graph = build_causal_graph(circuit)
        plan = recycle(graph, h, mode)
        result.stats.append(Stats.from_plan(circuit, plan))
        if config.emit_schedule:
            result.schedules[h.value] = emit_schedule(plan, graph)
        if config.emit_dot:
            result.dots[h.value] = graph.to_dot(f"{circuit.name}.{h.value}")
        if not config.verify:
            continue
        report = check_plan_sound(circuit, graph, plan)
        if not report.ok:
            result.verify_failures.append(report.to_text())
        if not classical:
            result.notes.append(f"{circuit.name} {h.value}: structural checks only (non-classical circuit)")
            continue
        try:
            if not check_functional_equivalence(circuit, graph, plan):
                result.verify_failures.append(f"{circuit.name} {h.value}: recycled schedule is not equivalent")
        except VerificationError as exc:
            if "infeasible" not in str(exc):
                raise
            result.notes.append(f"{circuit.name} {h.value}: functional check skipped "
                                f"(more than {MAX_EXHAUSTIVE_INPUTS} configurable inputs)")
    return result


def _write_artifacts(res: FileResult, config: RunConfig) -> None:
    for h, text in res.schedules.items():
        out = Path(config.emit_schedule) / f"{res.name}.{h}.sched"
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    for h, text in res.dots.items():
        out = Path(config.emit_dot) / f"{res.name}.{h}.dot"
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def run(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if config.jobs > 1 and len(config.inputs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(process_file, config.inputs, [config] * len(config.inputs)))
    else:
        results = [process_file(p, config) for p in config.inputs]

    print(TABLE_HEADER, file=out)
    code = 0
    stats_lines = []
    for res in results:
        if res.error:
            log.error("%s", res.error)
            code = max(code, 1)
            continue
        print(res.row(), file=out)
        _write_artifacts(res, config)
        stats_lines += [emit_stats_json(s) for s in res.stats]
        for note in res.notes:
            log.info("%s", note)
        for failure in res.verify_failures:
            log.error("verification failed: %s", failure.rstrip())
        if res.verify_failures:
            code = 2
    if config.emit_stats:
        Path(config.emit_stats).write_text("".join(line + "\n" for line in stats_lines))
    if config.figure:
        from .plotting import plot_run
        plot_run([r for r in results if not r.error], config.figure)
    return code


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for verification failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _run_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wirerecycle", description="Recycle ancilla wires in circuit files.",
                epilog="Use 'wirerecycle regress --help' for the table regression.")
    p.add_argument("--inputs", nargs="*", default=[], metavar="FILE", help="circuit files (.real or ICM text)")
    p.add_argument("--format", choices=["auto", "real", "icm"], default="auto")
    p.add_argument("--heuristic", choices=["m1", "m2", "both"], default="both")
    p.add_argument("--m1-mode", choices=[m.value for m in M1Mode], default=M1Mode.ABSOLUTE.value)
    p.add_argument("--verify", action="store_true", help="run soundness and equivalence checks")
    p.add_argument("--emit-schedule", metavar="DIR", help="write <circuit>.<heuristic>.sched files")
    p.add_argument("--emit-stats", metavar="FILE", help="write stats as JSON lines")
    p.add_argument("--emit-dot", metavar="DIR", help="write the recycled causal graph as DOT")
    p.add_argument("--figure", metavar="FILE", help="bar chart of wires before/after recycling")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _regress_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wirerecycle regress",
                description="Compare recycling results against reference tables.")
    p.add_argument("--corpus", required=True, metavar="DIR", help="directory holding <circuit>.real / .icm")
    p.add_argument("--expected", metavar="CSV", help="reference table (default: bundled RevLib table)")
    p.add_argument("--out", metavar="CSV", help="write the per-circuit comparison here")
    p.add_argument("--figure", metavar="FILE", help="scatter plot of measured vs reference counts")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "regress":
        args = _regress_parser().parse_args(argv[1:])
        _setup_logging(args.verbose)
        from .regress import regress
        report = regress(args.corpus, args.expected, jobs=args.jobs)
        print(report.summary())
        if args.out:
            Path(args.out).write_text(report.to_csv())
        if args.figure:
            from .plotting import plot_regression
            plot_regression(report, args.figure)
        return 0

    parser = _run_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)
    if not args.inputs:
        parser.print_usage(sys.stderr)
        print("wirerecycle: error: no input files given", file=sys.stderr)
        return 1
    if args.jobs < 1:
        parser.error("--jobs must be positive")  # exits 1
    config = RunConfig(inputs=args.inputs, format=args.format, heuristic=args.heuristic,
                       m1_mode=args.m1_mode, verify=args.verify, emit_schedule=args.emit_schedule,
                       emit_stats=args.emit_stats, emit_dot=args.emit_dot, jobs=args.jobs,
                       figure=args.figure)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
