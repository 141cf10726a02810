"""Regression of recycling counts against the bundled reference tables."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .causal import build_causal_graph
from .circuit import CircuitError
from .formats import ParseError, load_circuit
from .recycle import Heuristic, M1Mode, recycle

TOLERANCE = 0.10
COLUMNS = ("qubits", "ancilla", "m1", "m2")


@dataclass(frozen=True)
class ExpectedRow:
    circuit: str
    qubits: int
    ancilla: int
    m1: int
    m2: int
    pct_m1: Optional[int] = None
    pct_m2: Optional[int] = None


def load_expected(path: Union[str, Path, None] = None) -> list[ExpectedRow]:
    if path is None:
        text = resources.files("wirerecycle").joinpath("data/table1.csv").read_text()
    else:
        text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        pct = [int(rec[c]) if rec.get(c) else None for c in ("pct_m1", "pct_m2")]
        rows.append(ExpectedRow(rec["circuit"].strip(), *(int(rec[c]) for c in COLUMNS), *pct))
    return rows


def classify(measured: int, expected: int, tolerance: float = TOLERANCE) -> str:
    if measured == expected:
        return "exact"
    if abs(measured - expected) <= tolerance * expected:
        return "within-tolerance"
    return "deviation"


@dataclass
class RegressionRow:
    expected: ExpectedRow
    status: str = "ok"
    path: str = ""
    qubits: Optional[int] = None
    ancilla: Optional[int] = None
    m1: Optional[int] = None
    m1_signed: Optional[int] = None
    m2: Optional[int] = None
    seconds: float = 0.0
    message: str = ""

    @property
    def m1_best_mode(self) -> str:
        if self.m1 is None:
            return ""
        target = self.expected.m1
        if abs(self.m1_signed - target) < abs(self.m1 - target):
            return M1Mode.SIGNED.value
        return M1Mode.ABSOLUTE.value

    def cell(self, column: str) -> Optional[str]:
        value = getattr(self, column)
        if value is None:
            return None
        return classify(value, getattr(self.expected, column))


@dataclass
class RegressionReport:
    rows: list[RegressionRow] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def processed(self) -> list[RegressionRow]:
        return [r for r in self.rows if r.status == "ok"]

    def column_stats(self, column: str) -> dict[str, int]:
        counts = {"exact": 0, "within-tolerance": 0, "deviation": 0}
        for r in self.processed:
            counts[r.cell(column)] += 1
        return counts

    def summary(self) -> str:
        done = self.processed
        errors = sum(r.status == "error" for r in self.rows)
        lines = [f"rows: {len(self.rows)}  processed: {len(done)}  errors: {errors}  "
                 f"skipped (not in corpus): {len(self.skipped)}"]
        for col in COLUMNS:
            c = self.column_stats(col)
            if done:
                exact = 100.0 * c["exact"] / len(done)
                near = 100.0 * (c["exact"] + c["within-tolerance"]) / len(done)
                lines.append(f"  {col:8s} exact {exact:5.1f}%  within ±{TOLERANCE:.0%} {near:5.1f}%  "
                             f"deviations {c['deviation']}")
            else:
                lines.append(f"  {col:8s} no data")
        for r in done:
            if r.cell("ancilla") != "exact":
                lines.append(f"  note: {r.expected.circuit} input-ancilla count {r.ancilla} "
                             f"vs reference {r.expected.ancilla}")
            if r.cell("m1") != "exact":
                lines.append(f"  note: {r.expected.circuit} M1 {r.m1} (signed {r.m1_signed}) vs "
                             f"reference {r.expected.m1}; closer mode: {r.m1_best_mode}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["circuit", "status", "qubits", "qubits_ref", "ancilla", "ancilla_ref",
                    "m1", "m1_signed", "m1_ref", "m1_class", "m1_best_mode",
                    "m2", "m2_ref", "m2_class", "seconds"])
        for r in self.rows:
            e = r.expected
            w.writerow([e.circuit, r.status, r.qubits, e.qubits, r.ancilla, e.ancilla,
                        r.m1, r.m1_signed, e.m1, r.cell("m1") or "", r.m1_best_mode,
                        r.m2, e.m2, r.cell("m2") or "", f"{r.seconds:.3f}"])
        return buf.getvalue()


def find_circuit(corpus: Path, name: str) -> Optional[Path]:
    for suffix in (".real", ".icm"):
        for candidate in (corpus / f"{name}{suffix}", corpus / f"{name.lower()}{suffix}"):
            if candidate.is_file():
                return candidate
    return None


def _run_row(path: Path, expected: ExpectedRow) -> RegressionRow:
    row = RegressionRow(expected, path=str(path))
    start = time.perf_counter()
    try:
        circuit = load_circuit(path)
        counts = {}
        for key, h, mode in (("m1", Heuristic.M1, M1Mode.ABSOLUTE),
                             ("m1_signed", Heuristic.M1, M1Mode.SIGNED),
                             ("m2", Heuristic.M2, M1Mode.ABSOLUTE)):
            counts[key] = recycle(build_causal_graph(circuit), h, mode).recycled_count
    except (ParseError, CircuitError) as exc:
        row.status, row.message = "error", str(exc)
        return row
    row.status = "ok"
    row.qubits = circuit.num_qubits
    row.ancilla = sum(q.input_ancilla for q in circuit.qubits)
    row.m1, row.m1_signed, row.m2 = counts["m1"], counts["m1_signed"], counts["m2"]
    row.seconds = time.perf_counter() - start
    return row


def regress(corpus: Union[str, Path], expected: Union[str, Path, None] = None,
            jobs: int = 1) -> RegressionReport:
    corpus = Path(corpus)
    found, skipped = [], []
    for e in load_expected(expected):
        path = find_circuit(corpus, e.circuit)
        if path is None:
            skipped.append(e.circuit)
        else:
            found.append((path, e))
    paths = [p for p, _ in found]
    table = [e for _, e in found]
    if jobs > 1 and len(found) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_row, paths, table))
    else:
        rows = [_run_row(p, e) for p, e in found]
    return RegressionReport(rows, skipped)
