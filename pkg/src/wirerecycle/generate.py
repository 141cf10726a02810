"""Random circuit generators for property tests and stress runs."""
from __future__ import annotations

import random

from .circuit import Circuit, GateOp, InitState, MeasureBasis, Qubit

_CLASSICAL_INITS = (InitState.ZERO, InitState.ONE, InitState.CONFIGURABLE)
_ICM_INITS = (InitState.ZERO, InitState.PLUS, InitState.Y, InitState.A, InitState.CONFIGURABLE)


def random_reversible(rng: random.Random, max_qubits: int = 12, max_gates: int = 20,
                      max_arity: int = 4) -> Circuit:
    """Random t/f-gate circuit with random constant and garbage lines."""
    n = rng.randint(1, max_qubits)
    qubits = tuple(
        Qubit(i, f"q{i}", rng.choice(_CLASSICAL_INITS),
              rng.choice((MeasureBasis.Z, MeasureBasis.CONFIGURABLE)))
        for i in range(n)
    )
    gates = []
    for _ in range(rng.randint(0, max_gates)):
        if n >= 2 and rng.random() < 0.2:
            k = rng.randint(2, min(n, max_arity))
            ops = rng.sample(range(n), k)
            gates.append(GateOp(f"f{k}", tuple(ops[:-2]), tuple(ops[-2:])))
        else:
            k = rng.randint(1, min(n, max_arity))
            ops = rng.sample(range(n), k)
            gates.append(GateOp(f"t{k}", tuple(ops[:-1]), (ops[-1],)))
    return Circuit(f"rand{n}x{len(gates)}", qubits, tuple(gates))


def random_icm(rng: random.Random, max_qubits: int = 12, max_gates: int = 20) -> Circuit:
    n = rng.randint(2, max_qubits)
    qubits = tuple(
        Qubit(i, f"q{i}", rng.choice(_ICM_INITS),
              rng.choice((MeasureBasis.Z, MeasureBasis.X, MeasureBasis.CONFIGURABLE)))
        for i in range(n)
    )
    gates = []
    for _ in range(rng.randint(0, max_gates)):
        c, t = rng.sample(range(n), 2)
        gates.append(GateOp("cnot", (c,), (t,)))
    return Circuit(f"icm{n}x{len(gates)}", qubits, tuple(gates))
