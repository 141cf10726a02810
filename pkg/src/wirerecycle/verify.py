"""Independent checks for recycling plans.

Nothing here reuses the engine's reachability code: the replay graph is
rebuilt from the circuit and queried with a BFS over a visited bitset.

Functional checks are classical only.  Each wire holds one bit per input
assignment, packed into a Python int ("bit-sliced"), so all ``2**k``
assignments of the configurable inputs run in a single pass.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import asdict, dataclass, field
from functools import lru_cache

from .causal import CausalGraph, NodeType
from .circuit import Circuit, GateOp, InitState
from .formats import build_schedule
from .recycle import RecyclePlan

MAX_EXHAUSTIVE_INPUTS = 12


class VerificationError(ValueError):
    pass


_TOFFOLI_NAMES = {"not", "x", "cnot", "cx", "toffoli", "ccx"}
_FREDKIN_NAMES = {"swap", "fredkin", "cswap"}


def gate_kind(gate: GateOp) -> str:
    """'x' for multi-controlled NOT, 'swap' for multi-controlled swap."""
    name = gate.name.lower()
    if name in _TOFFOLI_NAMES or re.fullmatch(r"t\d+", name):
        if len(gate.targets) != 1:
            raise VerificationError(f"gate {gate.name} must have exactly one target")
        return "x"
    if name in _FREDKIN_NAMES or re.fullmatch(r"f\d+", name):
        if len(gate.targets) != 2:
            raise VerificationError(f"gate {gate.name} must have exactly two targets")
        return "swap"
    raise VerificationError(f"semantics unknown for gate {gate.name!r}")


def is_classical(circuit: Circuit) -> bool:
    fixed_ok = {InitState.ZERO, InitState.ONE, InitState.CONFIGURABLE}
    if any(q.init not in fixed_ok for q in circuit.qubits):
        return False
    try:
        for g in circuit.gates:
            gate_kind(g)
    except VerificationError:
        return False
    return True


def simulate_reversible(circuit: Circuit, word: int) -> int:
    """Run the circuit on one input word; bit ``i`` of the word is qubit ``i``."""
    n = circuit.num_qubits
    if not 0 <= word < (1 << n):
        raise VerificationError(f"input word {word} does not fit {n} qubits")
    for gate in circuit.gates:
        kind = gate_kind(gate)
        if all((word >> c) & 1 for c in gate.controls):
            if kind == "x":
                word ^= 1 << gate.targets[0]
            else:
                t0, t1 = gate.targets
                if ((word >> t0) ^ (word >> t1)) & 1:
                    word ^= (1 << t0) | (1 << t1)
    return word


def truth_table(circuit: Circuit) -> list[int]:
    return [simulate_reversible(circuit, w) for w in range(1 << circuit.num_qubits)]


# --------------------------------------------------------------------------
# bit-sliced evaluation

@lru_cache(maxsize=None)
def _lanes(k: int) -> tuple[int, ...]:
    """Lane masks for ``k`` variables over ``2**k`` assignments."""
    lanes = []
    size = 1 << k
    for j in range(k):
        block = ((1 << (1 << j)) - 1) << (1 << j)  # 2^j zeros then 2^j ones
        period = 1 << (j + 1)
        mask = 0
        for start in range(0, size, period):
            mask |= block << start
        lanes.append(mask)
    return tuple(lanes)


def _apply(kind: str, controls: list[int], targets: list[int], full: int) -> list[int]:
    cond = full
    for c in controls:
        cond &= c
    if kind == "x":
        return [targets[0] ^ cond]
    t0, t1 = targets
    diff = (t0 ^ t1) & cond
    return [t0 ^ diff, t1 ^ diff]


def _initial_lane(state: InitState, config_index: int, lanes: tuple[int, ...], full: int) -> int:
    if state is InitState.ZERO:
        return 0
    if state is InitState.ONE:
        return full
    if state is InitState.CONFIGURABLE:
        return lanes[config_index]
    raise VerificationError(f"init state {state.value} has no classical value")


def _configurable_inputs(circuit: Circuit) -> list[int]:
    return [q.id for q in circuit.qubits if q.init is InitState.CONFIGURABLE]


def simulate_sliced(circuit: Circuit) -> list[int]:
    """Final lane of every qubit over all configurable-input assignments."""
    config = _configurable_inputs(circuit)
    lanes = _lanes(len(config))
    full = (1 << (1 << len(config))) - 1
    pos = {q: i for i, q in enumerate(config)}
    values = [_initial_lane(q.init, pos.get(q.id, -1), lanes, full) for q in circuit.qubits]
    for gate in circuit.gates:
        kind = gate_kind(gate)
        out = _apply(kind, [values[c] for c in gate.controls], [values[t] for t in gate.targets], full)
        for t, v in zip(gate.targets, out):
            values[t] = v
    return values


def run_schedule(circuit: Circuit, graph_after: CausalGraph, plan: RecyclePlan) -> dict[int, int]:
    """Execute the recycled schedule wire by wire.

    Returns the measured lane of every qubit.  Raises when the schedule uses a
    wire that is not live or initializes a wire that is still occupied.
    """
    config = _configurable_inputs(circuit)
    if len(config) > MAX_EXHAUSTIVE_INPUTS:
        raise VerificationError(f"exhaustive check infeasible: {len(config)} configurable inputs")
    lanes = _lanes(len(config))
    full = (1 << (1 << len(config))) - 1
    pos = {q: i for i, q in enumerate(config)}
    live: dict[int, int] = {}
    measured: dict[int, int] = {}
    for op in build_schedule(plan, graph_after):
        node = graph_after.nodes[op.node]
        if op.kind is NodeType.INPUT:
            (w,) = op.wires
            if w in live:
                raise VerificationError(f"init on occupied wire w{w}")
            live[w] = _initial_lane(node.state, pos.get(node.qubit, -1), lanes, full)
        elif op.kind is NodeType.OUTPUT:
            (w,) = op.wires
            if w not in live:
                raise VerificationError(f"measure on idle wire w{w}")
            measured[node.qubit] = live.pop(w)
        else:
            gate = circuit.gates[node.gate]
            kind = gate_kind(gate)
            nc = len(gate.controls)
            for w in op.wires:
                if w not in live:
                    raise VerificationError(f"gate {gate.name} on idle wire w{w}")
            cw, tw = op.wires[:nc], op.wires[nc:]
            out = _apply(kind, [live[w] for w in cw], [live[w] for w in tw], full)
            for w, v in zip(tw, out):
                live[w] = v
    if live:
        raise VerificationError(f"wires left live at the end: {sorted(live)}")
    return measured


def check_functional_equivalence(circuit: Circuit, graph_after: CausalGraph, plan: RecyclePlan) -> bool:
    """Exhaustively compare the recycled schedule with the original circuit.

    Only configurable outputs are compared; garbage outputs are don't-cares.
    """
    if len(_configurable_inputs(circuit)) > MAX_EXHAUSTIVE_INPUTS:
        raise VerificationError("exhaustive check infeasible")
    reference = simulate_sliced(circuit)
    try:
        measured = run_schedule(circuit, graph_after, plan)
    except VerificationError as exc:
        if "semantics unknown" in str(exc) or "no classical value" in str(exc):
            raise
        return False
    return all(measured.get(q.id) == reference[q.id]
               for q in circuit.qubits if not q.measure.fixed)


# --------------------------------------------------------------------------
# structural soundness

@dataclass
class Violation:
    check: int
    message: str


@dataclass
class SoundnessReport:
    circuit: str
    violations: list[Violation] = field(default_factory=list)

    CHECKS = {
        1: "final graph acyclic",
        2: "each added edge legal when inserted",
        3: "per-wire lifetimes totally ordered",
        4: "wire assignment matches relabeling",
        5: "I/O qubits untouched",
    }

    @property
    def ok(self) -> bool:
        return not self.violations

    def failed_checks(self) -> set[int]:
        return {v.check for v in self.violations}

    def add(self, check: int, message: str) -> None:
        self.violations.append(Violation(check, message))

    def to_text(self) -> str:
        lines = [f"soundness report for {self.circuit}"]
        failed = self.failed_checks()
        for num, title in self.CHECKS.items():
            lines.append(f"  [{'FAIL' if num in failed else 'ok'}] ({num}) {title}")
        for v in self.violations:
            lines.append(f"    ({v.check}) {v.message}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps([dict(circuit=self.circuit, **asdict(v)) for v in self.violations])


class _ReplayGraph:
    """Plain adjacency-set DAG rebuilt from the circuit, same node numbering."""

    def __init__(self, circuit: Circuit):
        n, m = circuit.num_qubits, len(circuit.gates)
        self.size = 2 * n + m
        self.adj: list[set[int]] = [set() for _ in range(self.size)]
        self.input = list(range(n))
        self.output = [n + m + q for q in range(n)]
        prev = list(self.input)
        for idx, gate in enumerate(circuit.gates):
            for q in gate.controls + gate.targets:
                self.adj[prev[q]].add(n + idx)
                prev[q] = n + idx
        for q in range(n):
            self.adj[prev[q]].add(self.output[q])

    def reaches(self, u: int, v: int) -> bool:
        visited = 1 << u
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if y == v:
                    return True
                if not (visited >> y) & 1:
                    visited |= 1 << y
                    queue.append(y)
        return False

    def edge_set(self) -> set[tuple[int, int]]:
        return {(u, v) for u in range(self.size) for v in self.adj[u]}


def _acyclic(size: int, edges: set[tuple[int, int]]) -> bool:
    indeg = [0] * size
    adj: list[list[int]] = [[] for _ in range(size)]
    for u, v in edges:
        adj[u].append(v)
        indeg[v] += 1
    stack = [u for u in range(size) if indeg[u] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return seen == size


def check_plan_sound(circuit: Circuit, graph: CausalGraph, plan: RecyclePlan) -> SoundnessReport:
    report = SoundnessReport(circuit.name)
    n = circuit.num_qubits
    replay = _ReplayGraph(circuit)

    if len(graph) != replay.size:
        report.add(1, f"graph has {len(graph)} nodes, circuit implies {replay.size}")
        return report
    graph_edges = set(graph.edges())
    if not _acyclic(len(graph), graph_edges):
        report.add(1, "graph contains a cycle")

    out_qubit = {o: q for q, o in enumerate(replay.output)}
    in_qubit = {a: q for q, a in enumerate(replay.input)}
    next_on_wire: dict[int, int] = {}
    prev_on_wire: dict[int, int] = {}
    for o, a in plan.added_edges:
        qo, qa = out_qubit.get(o), in_qubit.get(a)
        if qo is None or not circuit.qubits[qo].output_ancilla:
            report.add(2, f"edge ({o}, {a}): source is not an ancilla output")
            continue
        if qa is None or not circuit.qubits[qa].input_ancilla:
            report.add(2, f"edge ({o}, {a}): target is not an ancilla input")
            continue
        if qo in next_on_wire or qa in prev_on_wire:
            report.add(2, f"edge ({o}, {a}): output or input already recycled")
        if replay.reaches(a, o):
            report.add(2, f"edge ({o}, {a}): input already precedes output")
        replay.adj[o].add(a)
        next_on_wire[qo] = qa
        prev_on_wire[qa] = qo
    if replay.edge_set() != graph_edges:
        report.add(2, "graph edges differ from the replayed plan")

    assignment = plan.wire_assignment
    if sorted(assignment) != list(range(n)):
        report.add(4, "wire assignment does not cover every qubit")
        return report

    # every chain starts at a qubit never spliced; its wire is that qubit's own
    expected = {}
    for q in range(n):
        head, steps = q, 0
        while head in prev_on_wire and steps <= n:
            head = prev_on_wire[head]
            steps += 1
        expected[q] = head
    for q in range(n):
        if assignment[q] != expected[q]:
            report.add(4, f"qubit {q} on wire {assignment[q]}, relabeling gives {expected[q]}")
    for node in graph.nodes:
        want = [assignment[q] for q in node.operands]
        if node.wires != want:
            report.add(4, f"node {node.id} wires {node.wires}, expected {want}")
    if len(set(assignment.values())) != n - plan.recycled_count:
        report.add(4, "final wire count differs from qubits - recycled")

    # the replay is complete now; its answers must agree with the graph's own DFS
    def reaches(u: int, v: int) -> bool:
        mine = replay.reaches(u, v)
        if mine != graph.precedes(u, v):
            report.add(3, f"reachability {u} -> {v} disagrees with the causal graph")
        return mine

    by_wire: dict[int, list[int]] = {}
    for q, w in assignment.items():
        by_wire.setdefault(w, []).append(q)
    for w, qs in sorted(by_wire.items()):
        heads = [q for q in qs if q not in prev_on_wire or assignment.get(prev_on_wire[q]) != w]
        if len(heads) != 1:
            report.add(3, f"wire {w}: {len(heads)} chain heads")
            continue
        order, q = [], heads[0]
        while q is not None and q not in order:
            order.append(q)
            q = next_on_wire.get(q)
        if sorted(order) != sorted(qs):
            report.add(3, f"wire {w}: chain {order} does not cover qubits {sorted(qs)}")
            continue
        for q1, q2 in zip(order, order[1:]):
            if not reaches(replay.input[q1], replay.output[q1]):
                report.add(3, f"wire {w}: lifetime of qubit {q1} is not a path")
            if reaches(replay.input[q2], replay.output[q1]):
                report.add(3, f"wire {w}: qubits {q1} and {q2} overlap")

    for q in circuit.qubits:
        if q.is_io:
            if q.id in next_on_wire or q.id in prev_on_wire:
                report.add(5, f"I/O qubit {q.id} appears in a recycling edge")
            if assignment[q.id] != q.id:
                report.add(5, f"I/O qubit {q.id} moved to wire {assignment[q.id]}")
    return report
