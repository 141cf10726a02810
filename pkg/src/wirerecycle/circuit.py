"""Circuit intermediate representation.

A :class:`Circuit` is a list of qubits plus a time-ordered list of gates.
Initialization and measurement are not gates: they live on the qubit as
``init`` / ``measure`` tags and only become operations once the causal graph
is built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence


class CircuitError(ValueError):
    """Raised when a circuit violates its structural invariants."""


class InitState(Enum):
    ZERO = "0"
    ONE = "1"
    PLUS = "+"
    Y = "Y"
    A = "A"
    CONFIGURABLE = "io"

    @property
    def fixed(self) -> bool:
        return self is not InitState.CONFIGURABLE


class MeasureBasis(Enum):
    Z = "Z"
    X = "X"
    CONFIGURABLE = "io"

    @property
    def fixed(self) -> bool:
        return self is not MeasureBasis.CONFIGURABLE


@dataclass(frozen=True)
class Qubit:
    id: int
    label: str
    init: InitState = InitState.CONFIGURABLE
    measure: MeasureBasis = MeasureBasis.CONFIGURABLE

    @property
    def input_ancilla(self) -> bool:
        return self.init.fixed

    @property
    def output_ancilla(self) -> bool:
        return self.measure.fixed

    @property
    def is_io(self) -> bool:
        """True for qubits that are neither kind of ancilla."""
        return not (self.input_ancilla or self.output_ancilla)


@dataclass(frozen=True)
class GateOp:
    name: str
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()

    @property
    def operands(self) -> tuple[int, ...]:
        """Controls followed by targets."""
        return self.controls + self.targets


@dataclass(frozen=True)
class Lifetime:
    qubit: int
    first_gate: Optional[int] = None
    last_gate: Optional[int] = None

    @property
    def touched(self) -> bool:
        return self.first_gate is not None


@dataclass(frozen=True)
class Circuit:
    name: str
    qubits: tuple[Qubit, ...] = ()
    gates: tuple[GateOp, ...] = field(default=())

    def __post_init__(self):
        # accept lists from callers; store tuples so the value stays immutable
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "gates", tuple(self.gates))

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    def qubit_by_label(self, label: str) -> Qubit:
        for q in self.qubits:
            if q.label == label:
                return q
        raise KeyError(label)


def build_circuit(name: str,
                  qubits: Sequence[tuple[str, InitState, MeasureBasis]],
                  gates: Sequence[tuple[str, Sequence[int], Sequence[int]]]) -> Circuit:
    """Convenience constructor: qubit ids are assigned by position."""
    qs = tuple(Qubit(i, label, init, meas) for i, (label, init, meas) in enumerate(qubits))
    gs = tuple(GateOp(n, tuple(c), tuple(t)) for n, c, t in gates)
    return Circuit(name, qs, gs)


def classify_ancillae(circuit: Circuit) -> tuple[set[int], set[int]]:
    """Return ``(input_ancillae, output_ancillae)`` as sets of qubit ids."""
    ia = {q.id for q in circuit.qubits if q.input_ancilla}
    oa = {q.id for q in circuit.qubits if q.output_ancilla}
    return ia, oa


def lifetime(circuit: Circuit, q: int) -> Lifetime:
    if not 0 <= q < circuit.num_qubits:
        raise CircuitError(f"unknown qubit id {q}")
    first = last = None
    for idx, gate in enumerate(circuit.gates):
        if q in gate.controls or q in gate.targets:
            if first is None:
                first = idx
            last = idx
    return Lifetime(q, first, last)


def validate(circuit: Circuit) -> list[str]:
    """Return every invariant violation found; an empty list means valid."""
    errors = []
    n = circuit.num_qubits
    seen_ids = set()
    seen_labels = set()
    for pos, q in enumerate(circuit.qubits):
        if q.id in seen_ids:
            errors.append(f"duplicate qubit id {q.id}")
        seen_ids.add(q.id)
        if q.id != pos:
            errors.append(f"qubit ids must be contiguous from 0: position {pos} has id {q.id}")
        if q.label in seen_labels:
            errors.append(f"duplicate qubit label {q.label!r}")
        seen_labels.add(q.label)
    for idx, gate in enumerate(circuit.gates):
        ops = gate.operands
        if not ops:
            errors.append(f"gate {idx} ({gate.name}): touches no qubit")
        for qid in ops:
            if not 0 <= qid < n:
                errors.append(f"gate {idx} ({gate.name}): undeclared qubit {qid}")
        if set(gate.controls) & set(gate.targets):
            errors.append(f"gate {idx} ({gate.name}): control equals target")
        if len(set(gate.controls)) != len(gate.controls) or len(set(gate.targets)) != len(gate.targets):
            errors.append(f"gate {idx} ({gate.name}): repeated operand")
    return errors


def check_valid(circuit: Circuit) -> None:
    errors = validate(circuit)
    if errors:
        raise CircuitError(f"invalid circuit {circuit.name!r}: " + "; ".join(errors))
