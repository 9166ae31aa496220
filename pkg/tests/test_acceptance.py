"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""
import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from qlzoc import analyzer as an
from qlzoc import fixtures as fx
from qlzoc import generators as gen
from qlzoc.cli import main
from qlzoc.decompositions import expand_ccx_amy, expand_ix, expand_tand_compute, expand_tand_uncompute, to_clifford_t
from qlzoc.gate_ir import new_circuit
from qlzoc.generators import Design, build_fanout, inverse_fanout
from qlzoc.oracle import flip_masks
from qlzoc.simulator import evaluate_vector, exhaustive_verify, run_batch, run_statevector, unitary


def record(n: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"C{n:<2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def t_metrics_of(design, m):
    return an.t_metrics(to_clifford_t(gen.build(design, m)))


def test_c1_functional_correctness_exhaustive():
    grid = [(d, m) for d in ("qloc", "qlzc", "ta-op-qloc", "ta-op-qlzc") for m in range(1, 13)]
    grid += [("p-op-4qlzc", 4), ("ta-p-op-4qlzc", 4)]
    grid += [(d, m) for d in ("ta-op-pqlzc", "fo-ta-op-pqlzc") for m in (8, 16)]
    grid += [("reconfigurable", m) for m in (4, 8)]
    start = time.perf_counter()
    failures, cases = [], 0
    for design, m in grid:
        r = exhaustive_verify(design, m, mode="exhaustive")
        cases += r.cases
        if not r.passed:
            failures.append(f"{design}@{m}")
    elapsed = time.perf_counter() - start
    record(1, "exhaustive functional correctness", not failures and elapsed < 120,
           f"{len(grid)} cells, {cases} cases, {elapsed:.1f}s, failures={failures or 0}")


def test_c2_published_test_vectors():
    bad, n_checks = [], 0
    for count, vectors, families in fx.tables():
        for v in vectors:
            for design, mode_bit in families:
                r = evaluate_vector(design, v.n, v.word, mode_bit)
                n_checks += 1
                if not (r.passed and r.gamma == v.expected):
                    bad.append(f"{count} n={v.n} {design}: {r.gamma} != {v.expected}")
    inconsistent = [v.n for _, vs, _ in fx.tables() for v in vs if not v.decimal_consistent]
    record(2, "zero- and one-count vectors across four families", not bad,
           f"{n_checks} checks; decimal/bit mismatch in published rows n={inconsistent}, bit pattern used")


T_COUNTS = [("p-op-4qlzc", 4, 28), ("ta-p-op-4qlzc", 4, 12), ("ta-op-qlzc", 4, 12),
            ("ta-op-qlzc", 8, 28), ("ta-op-pqlzc", 8, 42), ("fo-ta-op-pqlzc", 8, 42)]


def test_c3_t_count():
    got = [(d, m, t_metrics_of(d, m)[0], want) for d, m, want in T_COUNTS]
    bad = [g for g in got if g[2] != g[3]]
    record(3, "T-count matches the 4- and 8-qubit tables", not bad, ", ".join(f"{d}@{m}={c}" for d, m, c, _ in got))


T_DEPTHS = [("p-op-4qlzc", 4, 12), ("ta-p-op-4qlzc", 4, 4), ("ta-op-qlzc", 4, 4),
            ("ta-op-qlzc", 8, 8), ("ta-op-pqlzc", 8, 11), ("fo-ta-op-pqlzc", 8, 7)]


def test_c4_t_depth():
    detail, ok = [], True
    for d, m, want in T_DEPTHS:
        got = t_metrics_of(d, m)[1]
        status = an.row_status("t_depth", got, want, None)
        ok &= status in ("Match", "BetterThanPaper")
        detail.append(f"{d}@{m}={got}({status})")
    record(4, "ASAP T-depth matches the 4- and 8-qubit tables", ok, ", ".join(detail))


def test_c5_closed_form_scaling():
    start = time.perf_counter()
    bad = [m for m in range(2, 65) if t_metrics_of("ta-op-qlzc", m)[0] != 4 * m - 4]
    bad += [("depth", m) for m in (4, 8, 16) if t_metrics_of("ta-op-qlzc", m)[1] != m]
    bad += [("fo", m) for m in (8, 16, 32) if t_metrics_of("fo-ta-op-pqlzc", m)[1] != 3 * int(math.log2(m)) - 2]
    elapsed = time.perf_counter() - start
    record(5, "closed-form scaling 4m-4, m, 3 lg m - 2", not bad and elapsed < 60,
           f"{elapsed:.1f}s, failures={bad or 0}")


def test_c6_fanout_properties():
    rng = np.random.default_rng(0)
    bad = []
    for n in range(1, 65):
        b = new_circuit("fo", 1)
        ancs = [b.alloc() for _ in range(n)]
        gates = build_fanout(b.x[0], ancs)
        b.extend(gates)
        out = run_batch(b.build(), exhaustive=True)
        copies_ok = all(list(out.bits(a)) == [False, True] for a in ancs)
        depth_ok = max(an.asap_layers(gates)) == math.ceil(math.log2(n + 1))
        # FO^-1 . FO on arbitrary ancilla contents: treat control and ancillas as one input word
        r = new_circuit("round", n + 1)
        r.extend(build_fanout(r.x[0], r.x[1:]))
        r.extend(inverse_fanout(r.x[0], r.x[1:]))
        words = [int(w) for w in rng.integers(0, 2 ** 62, size=64)] + [0, (1 << (n + 1)) - 1]
        words = [w & ((1 << (n + 1)) - 1) for w in words]
        inverse_ok = run_batch(r.build(), words).input_restored().all()
        if not (copies_ok and depth_ok and inverse_ok):
            bad.append(n)
    record(6, "fan-out copies, depth ceil(lg(n+1)), inverse", not bad, f"n=1..64, failures={bad or 0}")


def test_c7_decomposition_unitaries():
    toffoli = np.zeros((8, 8))
    for k in range(8):
        toffoli[k ^ ((k & 1) & (k >> 1 & 1)) << 2, k] = 1
    amy_ok = np.allclose(unitary(expand_ccx_amy(0, 1, 2), 3), toffoli, atol=1e-12)
    ix_expected = toffoli @ np.diag([1j if k & 3 == 3 else 1 for k in range(8)])
    ix_ok = np.allclose(unitary(expand_ix(0, 1, 2), 3), ix_expected, atol=1e-12)
    seq = expand_tand_compute(0, 1, 2) + expand_tand_uncompute(0, 1, 2, 0)
    tand_ok = True
    for k in range(4):
        psi = np.zeros(8, complex)
        psi[k] = 1
        branches = run_statevector(seq, 3, psi)
        tand_ok &= all(np.allclose(b.state, psi, atol=1e-12) for b in branches)
        tand_ok &= np.isclose(sum(b.prob for b in branches), 1)
    sup = np.zeros(8, complex)
    sup[:4] = [0.5, 0.5j, -0.5, 0.5]
    both = run_statevector(seq, 3, sup)
    tand_ok &= len(both) == 2 and all(np.allclose(b.state, sup, atol=1e-12) for b in both)
    record(7, "Amy CCX, iX, T-AND pair unitaries", amy_ok and ix_ok and tand_ok,
           f"amy={amy_ok} ix={ix_ok} tand={tand_ok}")


def test_c8_flip_mask_identity():
    start = time.perf_counter()
    i = np.arange(1, (1 << 20) + 1, dtype=np.int64)
    n = flip_masks(i)
    ok = bool(np.all(((i - 1) ^ i) == (1 << n) - 1) and np.all(i % (1 << n) == 1 << (n - 1)))
    elapsed = time.perf_counter() - start
    record(8, "flip-mask identity for i in [1, 2^20]", ok and elapsed < 1, f"{elapsed * 1000:.0f} ms")


def test_c9_ancilla_accounting():
    expected = {"ta-op-qlzc": (8, 0), "ta-op-pqlzc": (5, 3), "fo-ta-op-pqlzc": (7, 3)}
    detail, ok = [], True
    for design, (anc, garb) in expected.items():
        rows = an.compare(an.analyze_design(design, 8))
        table = {r.metric: r for r in rows if r.source == "8-qubit"}
        ok &= table["ancilla"].generated == anc and table["garbage"].generated == garb
        ok &= table["ancilla"].status == table["garbage"].status == "Match"
        alt = table["ancilla_with_t_state"]
        ok &= not alt.asserted and alt.note != ""
        detail.append(f"{design}=({table['ancilla'].generated},{table['garbage'].generated}) "
                      f"alt={alt.generated}:{alt.status}")
    record(9, "#Ancilla/#Garbage = (8,0), (5,3), (7,3)", ok, "; ".join(detail))


def test_c10_known_non_reproducibles_flagged():
    cells = [(Design.P_OP_4QLZC, 4), (Design.TA_P_OP_4QLZC, 4), (Design.TA_OP_QLZC, 4),
             (Design.TA_OP_QLZC, 8), (Design.TA_OP_PQLZC, 8), (Design.FO_TA_OP_PQLZC, 8)]
    rows = {(d, m): an.compare(an.analyze_design(d, m)) for d, m in cells}
    ok, depth_status = True, []
    for (d, m), rs in rows.items():
        depth = [r for r in rs if r.metric == "total_depth" and r.source in ("4-qubit", "8-qubit")]
        ok &= len(depth) == 1 and not depth[0].asserted
        depth_status.append(f"{d.value}@{m}:{depth[0].generated}/{depth[0].published}={depth[0].status}")
    conflicts = [(Design.TA_OP_PQLZC, 8, "t_count"), (Design.TA_OP_PQLZC, 8, "t_depth"),
                 (Design.TA_OP_QLZC, 8, "total_depth"), (Design.TA_OP_QLZC, 4, "total_depth"),
                 (Design.TA_OP_QLZC, 4, "width_total")]
    for d, m, metric in conflicts:
        r = [r for r in rows[d, m] if r.metric == metric and r.source == "scaling"]
        ok &= len(r) == 1 and r[0].status == "Mismatch" and not r[0].asserted
    for d, m in cells:
        ok &= main(["compare", "--design", d.value, "--m", str(m), "--strict", "--out", "/dev/null"]) == 0
    record(10, "depth cells and formula conflicts reported, not asserted", ok, "; ".join(depth_status))
