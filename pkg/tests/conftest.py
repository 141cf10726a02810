import os
from importlib import resources
from pathlib import Path

import pytest
from hypothesis import strategies as st

from wirerecycle.circuit import Circuit, GateOp, InitState, MeasureBasis, Qubit
from wirerecycle.formats import load_circuit

DATA = Path(str(resources.files("wirerecycle").joinpath("data")))


def revlib_corpus():
    """Directory with RevLib .real files, or None when it is not installed."""
    candidates = [os.environ.get("WIRERECYCLE_REVLIB"), Path(__file__).parent / "corpus" / "revlib"]
    for c in candidates:
        if c and Path(c).is_dir() and any(Path(c).glob("*.real")):
            return Path(c)
    return None


@pytest.fixture
def fig2():
    return load_circuit(DATA / "fig2.icm")


@pytest.fixture
def fig5():
    return load_circuit(DATA / "fig5.real")


@pytest.fixture
def icm20():
    return load_circuit(DATA / "icm20.icm")


@pytest.fixture
def revlib():
    path = revlib_corpus()
    if path is None:
        pytest.skip("RevLib corpus not installed (set WIRERECYCLE_REVLIB or populate tests/corpus/revlib)")
    return path


@st.composite
def circuits(draw, max_qubits=8, max_gates=14, classical=True):
    n = draw(st.integers(1, max_qubits))
    inits = [InitState.ZERO, InitState.ONE, InitState.CONFIGURABLE]
    if not classical:
        inits += [InitState.PLUS, InitState.Y, InitState.A]
    qubits = tuple(
        Qubit(i, f"q{i}", draw(st.sampled_from(inits)),
              draw(st.sampled_from([MeasureBasis.Z, MeasureBasis.X, MeasureBasis.CONFIGURABLE]
                                   if not classical else [MeasureBasis.Z, MeasureBasis.CONFIGURABLE])))
        for i in range(n)
    )
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        ops = draw(st.permutations(range(n)))
        if n >= 2 and draw(st.booleans()) and draw(st.booleans()):
            k = draw(st.integers(2, min(n, 4)))
            gates.append(GateOp(f"f{k}", tuple(ops[:k - 2]), tuple(ops[k - 2:k])))
        else:
            k = draw(st.integers(1, min(n, 4)))
            gates.append(GateOp(f"t{k}", tuple(ops[:k - 1]), (ops[k - 1],)))
    return Circuit("hyp", qubits, tuple(gates))


# one summary line per acceptance criterion
_CRITERIA: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, title = marker.args
    entry = _CRITERIA.setdefault(num, {"title": title, "status": "PASS", "detail": ""})
    if rep.skipped:
        entry["status"] = "SKIP"
        entry["detail"] = rep.longrepr[2] if isinstance(rep.longrepr, tuple) else str(rep.longrepr)
    elif rep.failed:
        entry["status"] = "FAIL"
        crash = getattr(rep.longrepr, "reprcrash", None)
        entry["detail"] = crash.message.splitlines()[0] if crash else ""
    elif rep.when == "call":
        detail = dict(item.user_properties).get("detail")
        if detail:
            entry["detail"] = detail


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        e = _CRITERIA[num]
        line = f"criterion {num} {e['status']:4s} {e['title']}"
        if e["detail"]:
            line += f" -- {e['detail']}"
        terminalreporter.write_line(line)
