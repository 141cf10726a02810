"""Ancilla wire recycling for quantum and reversible circuits."""
from .causal import CausalGraph, build_causal_graph
from .circuit import Circuit, GateOp, InitState, MeasureBasis, Qubit, classify_ancillae, lifetime, validate
from .formats import Stats, emit_schedule, emit_stats_json, load_circuit, parse_icm, parse_real
from .recycle import Heuristic, M1Mode, RecyclePlan, apply_transformation, recycle
from .verify import check_functional_equivalence, check_plan_sound, simulate_reversible

__all__ = [
    "CausalGraph", "build_causal_graph",
    "Circuit", "GateOp", "InitState", "MeasureBasis", "Qubit", "classify_ancillae", "lifetime", "validate",
    "Stats", "emit_schedule", "emit_stats_json", "load_circuit", "parse_icm", "parse_real",
    "Heuristic", "M1Mode", "RecyclePlan", "apply_transformation", "recycle",
    "check_functional_equivalence", "check_plan_sound", "simulate_reversible",
]
