"""Circuit file formats and report serialization.

Readers
    ``.real``  RevLib reversible netlists (t/f gates only).
    ICM text   ``qubit``/``init``/``cnot``/``measure`` lines.

Writers
    schedule   recycled circuit as a topologically ordered operation list.
    ICM text   round-trippable dump of all-CNOT circuits.
    stats      one JSON object per (circuit, heuristic) run.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .causal import CausalGraph, GraphError, NodeType
from .circuit import Circuit, CircuitError, GateOp, InitState, MeasureBasis, Qubit, validate
from .recycle import RecyclePlan


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = ""):
        self.line = line
        self.source = source
        where = source
        if line is not None:
            where = f"{where}:{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


# --------------------------------------------------------------------------
# RevLib .real

_REAL_DIRECTIVES = {".version", ".numvars", ".variables", ".inputs", ".outputs",
                    ".constants", ".garbage", ".begin", ".end"}
_GATE_RE = re.compile(r"^([tf])(\d+)$")


@dataclass
class RealHeader:
    numvars: int
    variables: list[str]
    inputs: Optional[list[str]] = None
    outputs: Optional[list[str]] = None
    constants: str = ""
    garbage: str = ""


def _real_qubits(header: RealHeader) -> list[Qubit]:
    qubits = []
    for i, label in enumerate(header.variables):
        c = header.constants[i]
        init = {"0": InitState.ZERO, "1": InitState.ONE, "-": InitState.CONFIGURABLE}[c]
        meas = MeasureBasis.Z if header.garbage[i] == "1" else MeasureBasis.CONFIGURABLE
        qubits.append(Qubit(i, label, init, meas))
    return qubits


def parse_real(text: str, name: str = "circuit", source: str = "") -> Circuit:
    """Parse a RevLib ``.real`` document.

    Constant lines (``0``/``1``) become input ancillae; garbage lines (``1``)
    become Z-measured output ancillae.  ``t<k>`` is a k-operand Toffoli whose
    last operand is the target; ``f<k>`` is a Fredkin whose last two operands
    are swapped.
    """
    header = {}
    gates = []
    index = {}
    in_body = False
    ended = False

    def err(msg, ln):
        return ParseError(msg, ln, source)

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        head = fields[0].lower()
        if ended:
            raise err("content after .end", ln)
        if head.startswith("."):
            if head not in _REAL_DIRECTIVES:
                raise err(f"unsupported directive {fields[0]}", ln)
            if head == ".begin":
                if "numvars" not in header:
                    raise err("missing .numvars", ln)
                n = header["numvars"]
                variables = header.get("variables")
                if variables is None:
                    raise err("missing .variables", ln)
                for key in ("constants", "garbage"):
                    value = header.setdefault(key, "-" * n)
                    if len(value) != n:
                        raise err(f".{key} has {len(value)} entries, expected {n}", ln)
                index = {v: i for i, v in enumerate(variables)}
                in_body = True
            elif head == ".end":
                if not in_body:
                    raise err(".end before .begin", ln)
                ended = True
            elif in_body:
                raise err(f"directive {fields[0]} inside gate body", ln)
            elif head == ".numvars":
                try:
                    n = int(fields[1])
                except (IndexError, ValueError):
                    raise err("malformed .numvars", ln) from None
                if n <= 0:
                    raise err(".numvars must be positive", ln)
                header["numvars"] = n
            elif head == ".variables":
                if "numvars" not in header:
                    raise err("missing .numvars", ln)
                if len(fields) - 1 != header["numvars"]:
                    raise err(f".variables lists {len(fields) - 1} names, expected {header['numvars']}", ln)
                if len(set(fields[1:])) != len(fields) - 1:
                    raise err("duplicate variable name", ln)
                header["variables"] = fields[1:]
            elif head in (".inputs", ".outputs"):
                header[head[1:]] = fields[1:]
            elif head in (".constants", ".garbage"):
                value = "".join(fields[1:])
                allowed = "01-" if head == ".constants" else "1-"
                bad = set(value) - set(allowed)
                if bad:
                    raise err(f"invalid {head} entry {sorted(bad)[0]!r}", ln)
                header[head[1:]] = value
            continue

        if not in_body:
            raise err(f"gate line outside .begin/.end: {fields[0]}", ln)
        m = _GATE_RE.match(head)
        if not m:
            raise err(f"unknown gate mnemonic {fields[0]}", ln)
        kind, k = m.group(1), int(m.group(2))
        operands = fields[1:]
        if len(operands) != k:
            raise err(f"{fields[0]} expects {k} operands, got {len(operands)}", ln)
        if kind == "f" and k < 2:
            raise err(f"{fields[0]} needs at least two targets", ln)
        ids = []
        for label in operands:
            if label not in index:
                raise err(f"unknown variable {label!r}", ln)
            ids.append(index[label])
        split = k - (1 if kind == "t" else 2)
        gate = GateOp(head, tuple(ids[:split]), tuple(ids[split:]))
        problems = validate(Circuit("_", tuple(Qubit(i, str(i)) for i in range(len(index))), (gate,)))
        if problems:
            raise err(problems[0].split(": ", 1)[-1], ln)
        gates.append(gate)

    if "numvars" not in header:
        raise err("missing .numvars", None)
    if not in_body:
        raise err("missing .begin", None)
    if not ended:
        raise err("missing .end", None)
    hdr = RealHeader(header["numvars"], header["variables"], header.get("inputs"),
                     header.get("outputs"), header["constants"], header["garbage"])
    return Circuit(name, tuple(_real_qubits(hdr)), tuple(gates))


# --------------------------------------------------------------------------
# ICM text

_INIT_TAGS = {s.value: s for s in InitState}
_MEASURE_TAGS = {b.value: b for b in MeasureBasis}


def parse_icm(text: str, name: str = "circuit", source: str = "") -> Circuit:
    labels: dict[str, int] = {}
    inits: dict[str, InitState] = {}
    measures: dict[str, MeasureBasis] = {}
    gates = []

    def err(msg, ln):
        return ParseError(msg, ln, source)

    def lookup(label, ln):
        if label not in labels:
            raise err(f"undeclared qubit {label!r}", ln)
        return labels[label]

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        op, args = fields[0].lower(), fields[1:]
        arity = {"qubit": 1, "init": 2, "measure": 2, "cnot": 2}.get(op)
        if arity is None:
            raise err(f"unknown statement {fields[0]!r}", ln)
        if len(args) != arity:
            raise err(f"{op} expects {arity} arguments, got {len(args)}", ln)
        if op == "qubit":
            if args[0] in labels:
                raise err(f"duplicate qubit {args[0]!r}", ln)
            labels[args[0]] = len(labels)
        elif op == "init":
            lookup(args[0], ln)
            if args[0] in inits:
                raise err(f"duplicate init for {args[0]!r}", ln)
            if args[1] not in _INIT_TAGS:
                raise err(f"unknown init state {args[1]!r}", ln)
            inits[args[0]] = _INIT_TAGS[args[1]]
        elif op == "measure":
            lookup(args[0], ln)
            if args[0] in measures:
                raise err(f"duplicate measure for {args[0]!r}", ln)
            if args[1] not in _MEASURE_TAGS:
                raise err(f"unknown measurement basis {args[1]!r}", ln)
            measures[args[0]] = _MEASURE_TAGS[args[1]]
        else:
            c, t = lookup(args[0], ln), lookup(args[1], ln)
            if c == t:
                raise err("control equals target", ln)
            gates.append(GateOp("cnot", (c,), (t,)))

    for label in labels:
        if label not in inits:
            raise err(f"qubit {label!r} has no init", None)
        if label not in measures:
            raise err(f"qubit {label!r} has no measure", None)
    qubits = tuple(Qubit(i, label, inits[label], measures[label]) for label, i in labels.items())
    return Circuit(name, qubits, tuple(gates))


def emit_icm(circuit: Circuit) -> str:
    lines = [f"qubit {q.label}" for q in circuit.qubits]
    lines += [f"init {q.label} {q.init.value}" for q in circuit.qubits]
    for gate in circuit.gates:
        if gate.name != "cnot" or len(gate.controls) != 1 or len(gate.targets) != 1:
            raise CircuitError(f"gate {gate.name} cannot be written as ICM")
        c, t = gate.controls[0], gate.targets[0]
        lines.append(f"cnot {circuit.qubits[c].label} {circuit.qubits[t].label}")
    lines += [f"measure {q.label} {q.measure.value}" for q in circuit.qubits]
    return "\n".join(lines) + "\n"


def load_circuit(path: Union[str, Path], fmt: str = "auto") -> Circuit:
    path = Path(path)
    if fmt == "auto":
        fmt = "real" if path.suffix.lower() == ".real" else "icm"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", None, str(path)) from None
    parser = parse_real if fmt == "real" else parse_icm
    return parser(text, name=path.stem, source=str(path))


# --------------------------------------------------------------------------
# schedule

@dataclass(frozen=True)
class ScheduleOp:
    node: int
    kind: NodeType
    wires: tuple[int, ...]
    name: str = ""
    tag: str = ""
    """Init state or measurement basis text for input/output lines."""

    def render(self) -> str:
        ws = " ".join(f"w{w}" for w in self.wires)
        if self.kind is NodeType.INPUT:
            return f"init {ws} {self.tag}"
        if self.kind is NodeType.OUTPUT:
            return f"measure {ws} {self.tag}"
        return f"gate {self.name} {ws}"


def build_schedule(plan: RecyclePlan, graph: CausalGraph) -> list[ScheduleOp]:
    missing = [e for e in plan.added_edges if e[1] not in graph.succ[e[0]]]
    if missing:
        raise GraphError(f"plan edges {missing} are not in the graph")
    ops = []
    for u in graph.topological_order():
        node = graph.nodes[u]
        if node.type is NodeType.INPUT:
            tag = node.state.value
        elif node.type is NodeType.OUTPUT:
            tag = node.basis.value
        else:
            tag = ""
        ops.append(ScheduleOp(u, node.type, tuple(node.wires), node.name, tag))
    return ops


def emit_schedule(plan: RecyclePlan, graph: CausalGraph) -> str:
    return "".join(op.render() + "\n" for op in build_schedule(plan, graph))


# --------------------------------------------------------------------------
# stats

@dataclass(frozen=True)
class Stats:
    circuit: str
    qubits: int
    ancilla_inputs: int
    ancilla_outputs: int
    heuristic: str
    recycled: int

    @property
    def final_wires(self) -> int:
        return self.qubits - self.recycled

    @property
    def percent(self) -> int:
        return percent(self.recycled, self.qubits)

    @classmethod
    def from_plan(cls, circuit: Circuit, plan: RecyclePlan) -> "Stats":
        return cls(circuit.name, circuit.num_qubits,
                   sum(q.input_ancilla for q in circuit.qubits),
                   sum(q.output_ancilla for q in circuit.qubits),
                   plan.heuristic.value, plan.recycled_count)

    def to_dict(self) -> dict:
        return {
            "circuit": self.circuit,
            "qubits": self.qubits,
            "ancilla_inputs": self.ancilla_inputs,
            "ancilla_outputs": self.ancilla_outputs,
            "heuristic": self.heuristic,
            "recycled": self.recycled,
            "final_wires": self.final_wires,
            "percent": self.percent,
        }


def percent(part: int, whole: int) -> int:
    """``100 * part / whole`` rounded half up, in exact integer arithmetic."""
    if whole <= 0:
        return 0
    return (200 * part + whole) // (2 * whole)


def emit_stats_json(stats: Stats) -> str:
    return json.dumps(stats.to_dict(), separators=(", ", ": "))
