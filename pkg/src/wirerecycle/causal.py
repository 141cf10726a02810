"""Causal graph of a circuit.

Every initialization, gate and measurement becomes a node.  Edges follow each
qubit's operation chain, so ``u`` precedes ``v`` exactly when there is a
directed path from ``u`` to ``v``.

Node ids are dense and laid out as: input nodes (one per qubit, by qubit id),
then gate nodes (by gate index), then output nodes (by qubit id).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional

from .circuit import Circuit, InitState, MeasureBasis, check_valid


class GraphError(ValueError):
    pass


class NodeType(Enum):
    INPUT = "input"
    GATE = "gate"
    OUTPUT = "output"


@dataclass
class CausalNode:
    id: int
    type: NodeType
    operands: tuple[int, ...]
    """Qubit ids in operand order (controls first for gates)."""
    wires: list[int]
    """Current wire label of each operand, aligned with ``operands``."""
    qubit: Optional[int] = None
    gate: Optional[int] = None
    name: str = ""
    state: Optional[InitState] = None
    basis: Optional[MeasureBasis] = None

    @property
    def wire_set(self) -> frozenset[int]:
        return frozenset(self.wires)

    @property
    def wire(self) -> int:
        """Sole wire of an input/output node."""
        if len(self.wires) != 1:
            raise GraphError(f"node {self.id} spans {len(self.wires)} wires")
        return self.wires[0]

    def describe(self) -> str:
        if self.type is NodeType.INPUT:
            return f"input{self.qubit}"
        if self.type is NodeType.OUTPUT:
            return f"output{self.qubit}"
        return f"{self.name}{self.gate}"


class CausalGraph:
    def __init__(self, nodes: list[CausalNode], num_qubits: int):
        self.nodes = nodes
        self.num_qubits = num_qubits
        self.succ: list[list[int]] = [[] for _ in nodes]
        self.pred: list[list[int]] = [[] for _ in nodes]
        self.inputs_by_qubit: dict[int, int] = {}
        self.outputs_by_qubit: dict[int, int] = {}
        self.recycling_edges: list[tuple[int, int]] = []
        for node in nodes:
            if node.type is NodeType.INPUT:
                self.inputs_by_qubit[node.qubit] = node.id
            elif node.type is NodeType.OUTPUT:
                self.outputs_by_qubit[node.qubit] = node.id

    def __len__(self) -> int:
        return len(self.nodes)

    def add_edge(self, u: int, v: int) -> bool:
        """Insert ``u -> v``; returns False if the edge already existed."""
        if v in self.succ[u]:
            return False
        self.succ[u].append(v)
        self.pred[v].append(u)
        return True

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, vs in enumerate(self.succ):
            for v in vs:
                yield u, v

    @property
    def num_edges(self) -> int:
        return sum(len(vs) for vs in self.succ)

    def _check_id(self, u: int) -> None:
        if not (isinstance(u, int) and 0 <= u < len(self.nodes)):
            raise GraphError(f"invalid node id {u!r}")

    def descendants(self, u: int) -> set[int]:
        """All nodes reachable from ``u`` by a non-empty path."""
        self._check_id(u)
        seen = set()
        stack = list(self.succ[u])
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(self.succ[v])
        return seen

    def precedes(self, u: int, v: int) -> bool:
        """True iff a directed path ``u ~> v`` exists (false for ``u == v``)."""
        self._check_id(u)
        self._check_id(v)
        if u == v:
            return False
        seen = set()
        stack = list(self.succ[u])
        while stack:
            w = stack.pop()
            if w == v:
                return True
            if w in seen:
                continue
            seen.add(w)
            stack.extend(self.succ[w])
        return False

    def topological_order(self) -> list[int]:
        """Kahn's algorithm; ready nodes are taken smallest id first."""
        indeg = [len(p) for p in self.pred]
        ready = [u for u, d in enumerate(indeg) if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for v in self.succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        if len(order) != len(self.nodes):
            raise GraphError("causal graph contains a cycle")
        return order

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except GraphError:
            return False
        return True

    def input_nodes(self) -> list[int]:
        return [self.inputs_by_qubit[q] for q in range(self.num_qubits)]

    def output_nodes(self) -> list[int]:
        return [self.outputs_by_qubit[q] for q in range(self.num_qubits)]

    def ancilla_inputs(self) -> list[int]:
        return [n for n in self.input_nodes() if self.nodes[n].state.fixed]

    def ancilla_outputs(self) -> list[int]:
        return [n for n in self.output_nodes() if self.nodes[n].basis.fixed]

    def wire_count(self) -> int:
        return len({self.nodes[n].wire for n in self.input_nodes()})

    def to_dot(self, name: str = "causal") -> str:
        lines = [f'digraph "{name}" {{']
        for node in self.nodes:
            wires = ",".join(str(w) for w in node.wires)
            shape = "box" if node.type is NodeType.GATE else "ellipse"
            lines.append(f'  n{node.id} [label="{node.describe()}\\nw={{{wires}}}" shape={shape}];')
        recycled = set(self.recycling_edges)
        for u, v in sorted(self.edges()):
            style = " [style=dashed color=red]" if (u, v) in recycled else ""
            lines.append(f"  n{u} -> n{v}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_causal_graph(circuit: Circuit) -> CausalGraph:
    check_valid(circuit)
    n = circuit.num_qubits
    g_count = len(circuit.gates)
    nodes = []
    for q in circuit.qubits:
        nodes.append(CausalNode(q.id, NodeType.INPUT, (q.id,), [q.id], qubit=q.id,
                                name="init", state=q.init))
    for idx, gate in enumerate(circuit.gates):
        ops = gate.operands
        nodes.append(CausalNode(n + idx, NodeType.GATE, ops, list(ops), gate=idx, name=gate.name))
    for q in circuit.qubits:
        nodes.append(CausalNode(n + g_count + q.id, NodeType.OUTPUT, (q.id,), [q.id], qubit=q.id,
                                name="measure", basis=q.measure))
    graph = CausalGraph(nodes, n)

    last = list(range(n))  # most recent node on each qubit's chain
    for idx, gate in enumerate(circuit.gates):
        node = n + idx
        for q in gate.operands:
            graph.add_edge(last[q], node)
            last[q] = node
    for q in range(n):
        graph.add_edge(last[q], n + g_count + q)
    return graph


def count_preceded_outputs(g: CausalGraph, a: int, outputs: Iterable[int]) -> int:
    """Number of nodes in ``outputs`` reachable from ancilla input ``a``."""
    g._check_id(a)
    node = g.nodes[a]
    if node.type is not NodeType.INPUT or not node.state.fixed:
        raise GraphError(f"node {a} is not an ancilla input")
    reach = g.descendants(a)
    return sum(1 for o in outputs if o in reach)
