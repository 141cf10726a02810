"""Acceptance gate.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary ends with
one PASS/FAIL/SKIP line per criterion.  Criteria 4 and 5 need the RevLib
corpus (see README) and skip when it is not installed.
"""
import io
import random
import time

import pytest

from wirerecycle.causal import build_causal_graph
from wirerecycle.cli import RunConfig, run
from wirerecycle.formats import Stats, emit_stats_json, load_circuit
from wirerecycle.generate import random_reversible
from wirerecycle.recycle import Heuristic, M1Mode, recycle
from wirerecycle.regress import classify, find_circuit, load_expected
from wirerecycle.verify import MAX_EXHAUSTIVE_INPUTS, check_functional_equivalence, check_plan_sound

from conftest import DATA, revlib_corpus

CAMPAIGN_SIZE = 10_000
CAMPAIGN_SEED = 20240601
ADDERS = {"add8_172": 7, "add16_174": 15, "add32_183": 31, "add64_184": 63}


def _pipeline(circuit, h):
    graph = build_causal_graph(circuit)
    plan = recycle(graph, h)
    return graph, plan


@pytest.mark.criterion(1, "three-qubit golden case under M1 and M2")
@pytest.mark.parametrize("h", list(Heuristic))
def test_criterion_1_golden_three_qubit(fig2, h, record_property):
    timings = []
    for _ in range(5):
        start = time.perf_counter()
        graph, plan = _pipeline(fig2, h)
        ok = check_functional_equivalence(fig2, graph, plan)
        timings.append(time.perf_counter() - start)
    a0, a2 = fig2.qubit_by_label("a0").id, fig2.qubit_by_label("a2").id
    assert plan.recycled_count == 1
    assert plan.added_edges == [(graph.outputs_by_qubit[a0], graph.inputs_by_qubit[a2])]
    assert plan.final_wires == 2
    assert check_plan_sound(fig2, graph, plan).ok
    assert ok
    assert min(timings) < 0.010
    record_property("detail", f"edge output(a0)->input(a2), 3->2 wires, {min(timings) * 1e3:.2f} ms")


@pytest.mark.criterion(2, "six-wire staircase splices")
@pytest.mark.parametrize("h", list(Heuristic))
def test_criterion_2_staircase_splices(fig5, h, record_property):
    graph, plan = _pipeline(fig5, h)
    pairs = {(graph.nodes[o].qubit, graph.nodes[a].qubit) for o, a in plan.added_edges}
    assert len(plan.added_edges) == 3
    assert pairs == {(1, 5), (0, 4), (2, 3)}
    assert (fig5.num_qubits, plan.final_wires) == (6, 3)
    assert check_plan_sound(fig5, graph, plan).ok
    record_property("detail", f"{sorted(pairs)} 6->3 wires")


def _campaign():
    rng = random.Random(CAMPAIGN_SEED)
    for _ in range(CAMPAIGN_SIZE):
        yield random_reversible(rng, max_qubits=12, max_gates=20)


@pytest.mark.criterion(3, "soundness campaign on 10,000 random classical circuits")
def test_criterion_3_soundness_campaign(record_property):
    start = time.perf_counter()
    violations, inequivalent, functional_runs, recycled = [], [], 0, 0
    for i, circuit in enumerate(_campaign()):
        for h in Heuristic:
            graph, plan = _pipeline(circuit, h)
            recycled += plan.recycled_count
            report = check_plan_sound(circuit, graph, plan)
            if not report.ok:
                violations.append((i, h.value, report.to_text()))
            if sum(not q.init.fixed for q in circuit.qubits) <= MAX_EXHAUSTIVE_INPUTS:
                functional_runs += 1
                if not check_functional_equivalence(circuit, graph, plan):
                    inequivalent.append((i, h.value))
    elapsed = time.perf_counter() - start
    assert not violations, violations[:3]
    assert not inequivalent, inequivalent[:10]
    assert functional_runs == 2 * CAMPAIGN_SIZE
    assert elapsed < 300
    record_property("detail", f"{2 * CAMPAIGN_SIZE} plans, {recycled} wires recycled, "
                              f"0 violations, {elapsed:.1f} s")


@pytest.fixture
def corpus():
    path = revlib_corpus()
    if path is None:
        pytest.skip("RevLib corpus not installed")
    return path


@pytest.mark.criterion(4, "RevLib table regression")
def test_criterion_4_table_regression(corpus, record_property):
    start = time.perf_counter()
    found, problems, logged = 0, [], []
    for row in load_expected():
        path = find_circuit(corpus, row.circuit)
        if path is None:
            continue
        found += 1
        circuit = load_circuit(path)
        m1 = recycle(build_causal_graph(circuit), Heuristic.M1).recycled_count
        if circuit.num_qubits != row.qubits:
            problems.append(f"{row.circuit}: {circuit.num_qubits} qubits, table {row.qubits}")
        if row.m1 >= 1 and m1 < 1:
            problems.append(f"{row.circuit}: M1 recycled nothing, table {row.m1}")
        if m1 != row.m1:
            signed = recycle(build_causal_graph(circuit), Heuristic.M1, M1Mode.SIGNED).recycled_count
            winner = "signed" if abs(signed - row.m1) < abs(m1 - row.m1) else "absolute"
            logged.append(f"{row.circuit} M1 {m1} (signed {signed}) vs {row.m1}, closer: {winner}")
        if row.circuit in ADDERS and classify(m1, ADDERS[row.circuit]) == "deviation":
            problems.append(f"{row.circuit}: M1 {m1} outside +-10% of {ADDERS[row.circuit]}")
    elapsed = time.perf_counter() - start
    for line in logged:
        print("deviation:", line)
    if found == 0:
        pytest.skip("no table circuit present in the corpus")
    assert not problems, problems
    assert elapsed < 60
    record_property("detail", f"{found} circuits, {len(logged)} inexact M1 cells, {elapsed:.1f} s")


@pytest.mark.criterion(5, "619-qubit circuit under M1")
def test_criterion_5_large_circuit(corpus, record_property):
    path = find_circuit(corpus, "pdc_307")
    if path is None:
        pytest.skip("pdc_307 not in corpus")
    circuit = load_circuit(path)
    start = time.perf_counter()
    graph, plan = _pipeline(circuit, Heuristic.M1)
    elapsed = time.perf_counter() - start
    stats = Stats.from_plan(circuit, plan)
    assert circuit.num_qubits == 619
    assert elapsed < 10
    assert plan.recycled_count / circuit.num_qubits >= 0.60
    record_property("detail", f"{plan.recycled_count}/619 recycled ({stats.percent}%), {elapsed:.2f} s")


@pytest.mark.criterion(6, "20-qubit ICM substitute under M1")
def test_criterion_6_icm_substitute(icm20, record_property):
    graph, plan = _pipeline(icm20, Heuristic.M1)
    report = check_plan_sound(icm20, graph, plan)
    assert report.ok, report.to_text()
    assert icm20.num_qubits == 20
    assert plan.recycled_count / icm20.num_qubits >= 0.80
    record_property("detail", f"{plan.recycled_count}/20 recycled ({Stats.from_plan(icm20, plan).percent}%)")


def _criteria_inputs():
    files = [DATA / "fig2.icm", DATA / "fig5.real", DATA / "icm20.icm"]
    corpus = revlib_corpus()
    if corpus is not None:
        files += [p for p in (find_circuit(corpus, r.circuit) for r in load_expected()) if p is not None]
    return [str(p) for p in files]


def _campaign_stats(limit=500):
    lines = []
    for circuit, _ in zip(_campaign(), range(limit)):
        for h in Heuristic:
            lines.append(emit_stats_json(Stats.from_plan(circuit, _pipeline(circuit, h)[1])))
    return "\n".join(lines)


@pytest.mark.criterion(7, "byte-identical stats across runs and job counts")
def test_criterion_7_determinism(tmp_path, record_property):
    inputs = _criteria_inputs()
    outputs = []
    for n, jobs in enumerate((1, 1, 1, 8)):
        stats = tmp_path / f"run{n}.jsonl"
        table = io.StringIO()
        assert run(RunConfig(inputs=inputs, jobs=jobs, emit_stats=str(stats)), table) == 0
        outputs.append((stats.read_bytes(), table.getvalue()))
    assert all(o == outputs[0] for o in outputs)
    campaign = {_campaign_stats() for _ in range(3)}
    assert len(campaign) == 1
    record_property("detail", f"{len(inputs)} files x 4 runs (jobs 1,1,1,8) + campaign sample x 3")
