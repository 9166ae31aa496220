from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qlzoc import analyzer as an
from qlzoc import generators as gen
from qlzoc.decompositions import to_clifford_t
from qlzoc.gate_ir import GateKind as G, Role, new_circuit
from qlzoc.simulator import WrongLevelError, run_batch


def one_gate(kind, controls, target):
    b = new_circuit("one", 2)
    b.add(kind, controls, target)
    return b.build()


def test_trivial_depths():
    empty = new_circuit("e", 2).build()
    assert an.depth_width(empty) == (0, empty.n_qubits, empty.n_qubits)
    assert an.total_depth(one_gate(G.CX, (0,), 1)) == 1
    assert an.t_metrics(empty) == (0, 0)


def test_single_amy_toffoli():
    c = to_clifford_t(one_gate(G.CCX, (0, 1), 2))
    assert an.t_metrics(c) == (7, 3)


def test_macro_gates_rejected():
    with pytest.raises(WrongLevelError):
        an.t_metrics(one_gate(G.CCX, (0, 1), 2))
    with pytest.raises(WrongLevelError):
        an.depth_width(gen.build("ta-op-qlzc", 3))


def test_asap_parallel_and_serial():
    b = new_circuit("p", 4)
    b.add(G.T, (), 0)
    b.add(G.T, (), 1)
    b.add(G.CX, (0,), 1)
    b.add(G.T, (), 1)
    b.add(G.H, (), 3)
    c = b.build()
    assert an.asap_layers(c.gates) == [1, 1, 2, 3, 1]
    assert an.t_metrics(c) == (3, 2)


def test_classical_bits_order_gates():
    b = new_circuit("m", 2)
    k = b.new_cbit()
    b.add(G.MEASURE, (), 0, cbit=k)
    b.add(G.IF_X, (), 1, cbit=k)
    assert an.asap_layers(b.build().gates) == [1, 2]


DESIGNS = [("p-op-4qlzc", 4), ("ta-p-op-4qlzc", 4), ("ta-op-qlzc", 7), ("ta-op-pqlzc", 16),
           ("fo-ta-op-pqlzc", 16), ("reconfigurable", 5), ("qlzc", 5)]


@pytest.mark.parametrize("design,m", DESIGNS)
def test_layering_is_tight(design, m):
    c = to_clifford_t(gen.build(design, m))
    w = lambda g: 1 if g.kind in an.T_TYPE else 0
    assert an.asap_is_tight(c.gates, an.asap_layers(c.gates))
    assert an.asap_is_tight(c.gates, an.asap_layers(c.gates, weight=w), weight=w)
    layers = an.asap_layers(c.gates)
    layers[-1] += 1
    assert not an.asap_is_tight(c.gates, layers)


@pytest.mark.parametrize("design,m", DESIGNS)
def test_t_count_tally_and_dominance(design, m):
    c = gen.build(design, m)
    t_count, t_depth = an.t_metrics(to_clifford_t(c))
    assert t_count == 7 * c.count(G.CCX) + 4 * c.count(G.TAND) == an.macro_t_count(c)
    assert t_depth <= an.serial_t_depth(c)


@pytest.mark.parametrize("m", [8, 16, 32])
def test_fanout_adds_no_t(m):
    a = an.t_metrics(to_clifford_t(gen.build("ta-op-pqlzc", m)))[0]
    b = an.t_metrics(to_clifford_t(gen.build("fo-ta-op-pqlzc", m)))[0]
    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40))
def test_sequential_scaling(m):
    t_count, t_depth = an.t_metrics(to_clifford_t(gen.build("ta-op-qlzc", m)))
    assert t_count == 4 * m - 4 and t_depth == m


@pytest.mark.parametrize("design,m,expected", [
    ("ta-op-qlzc", 8, (8, 0)), ("ta-op-pqlzc", 8, (2, 3)), ("fo-ta-op-pqlzc", 8, (4, 3)),
])
def test_ancilla_classes(design, m, expected):
    c = gen.build(design, m)
    classes = an.ancilla_classes(c, an.simulation_evidence(c))
    assert (classes.reusable, classes.garbage) == expected and not classes.flags
    assert classes.t_state == c.count(G.TAND)


def test_ancilla_classes_flags_and_evidence():
    b = new_circuit("g", 1)
    b.alloc(Role.GARBAGE)  # never touched: always 0
    c = b.build()
    classes = an.ancilla_classes(c, run_batch(c, [0, 1]))
    assert classes.reusable == 1 and classes.flags
    with pytest.raises(an.EvidenceError):
        an.ancilla_classes(c, run_batch(c, []))


def test_closed_forms_examples():
    f = an.closed_forms("ta-op-qlzc", 8)
    assert f["t_count"].value == 28 and f["total_depth"].value == 114 and f["width_total"].value == 20
    f = an.closed_forms("fo-ta-op-pqlzc", 8)
    assert f["t_depth"].value == 7 and f["total_depth"].value == 46 and f["width_total"].value == 19
    f = an.closed_forms("ta-op-pqlzc", 8)
    assert f["t_count"].value == Fraction(91, 2) and not f["t_count"].integral
    assert f["t_depth"].value == Fraction(25, 2) and f["total_depth"].value == 62
    assert an.closed_forms("qlzc", 8) == {}
    assert not an.closed_forms("fo-ta-op-pqlzc", 16)["total_depth"].integral


@pytest.mark.parametrize("metric,gen_v,published,formula,status", [
    ("t_count", 12, 12, None, "Match"),
    ("t_depth", 3, 4, None, "BetterThanPaper"),
    ("t_depth", 5, 4, None, "Mismatch"),
    ("total_depth", 30, 32, None, "Mismatch"),
    ("t_count", 42, 42, an.FormulaValue(Fraction(91, 2), ""), "Mismatch"),
    ("total_depth", 103, 103, an.FormulaValue(Fraction(114), ""), "Mismatch"),
    ("t_count", 28, None, an.FormulaValue(Fraction(28), ""), "Match"),
    ("t_count", 5, None, None, "NoClaim"),
])
def test_row_status(metric, gen_v, published, formula, status):
    assert an.row_status(metric, gen_v, published, formula) == status


def rows_for(design, m):
    return an.compare(an.analyze_design(design, m))


def test_compare_examples():
    rows = rows_for("ta-p-op-4qlzc", 4)
    t = [r for r in rows if r.metric == "t_count"][0]
    assert (t.generated, t.published, t.status) == (12, 12, "Match")
    assert not an.strict_failures(rows)
    depth = [r for r in rows_for("ta-op-qlzc", 8) if r.metric == "total_depth" and r.source == "scaling"][0]
    assert (depth.published, depth.closed_form.value, depth.status) == (103, 114, "Mismatch")
    assert {r.status for r in rows_for("qlzc", 4)} == {"NoClaim"}


def test_report_fields():
    r = an.analyze_design("fo-ta-op-pqlzc", 8)
    assert (r.t_count, r.t_depth, r.ancilla, r.ancilla_garbage) == (42, 7, 7, 3)
    assert r.width_total == 19 and r.width_excl_input == 11 and r.width_excl_reusable == 15
    text = r.to_text()
    assert "t_count=42\n" in text and "ancilla=7\n" in text


def test_formatting():
    rows = rows_for("ta-op-pqlzc", 8)
    table = an.format_rows(rows)
    lines = table.splitlines()
    assert lines[0].split()[:3] == ["design", "m", "metric"] and len(lines) == len(rows) + 2
    records = an.rows_to_records(rows).splitlines()
    assert len(records) == len(rows)
    assert all("status=" in line for line in records)
