import itertools

import numpy as np
import pytest

from qlzoc import generators as gen
from qlzoc.analyzer import asap_layers, t_metrics
from qlzoc.decompositions import (
    DecompositionPolicy, expand_ccx_amy, expand_ccx_jones, expand_ix, expand_mcx_ladder,
    expand_tand_compute, expand_tand_uncompute, lower_mcx, to_clifford_t,
)
from qlzoc.gate_ir import AllocationError, GateKind as G, MalformedGateError, Role, T_TYPE, new_circuit
from qlzoc.simulator import run_batch, run_statevector, unitary


def toffoli_matrix(n=3, c0=0, c1=1, t=2):
    dim = 1 << n
    u = np.zeros((dim, dim))
    for k in range(dim):
        flip = ((k >> c0) & 1) & ((k >> c1) & 1)
        u[k ^ (flip << t), k] = 1
    return u


def t_layers(gates):
    return max(asap_layers(gates, weight=lambda g: 1 if g.kind in T_TYPE else 0))


def test_amy_is_toffoli():
    u = unitary(expand_ccx_amy(0, 1, 2), 3)
    assert np.allclose(u, toffoli_matrix(), atol=1e-12)


@pytest.mark.parametrize("perm", list(itertools.permutations(range(3))))
def test_amy_any_wiring(perm):
    a, b, c = perm
    u = unitary(expand_ccx_amy(a, b, c), 3)
    assert np.allclose(u, toffoli_matrix(3, a, b, c), atol=1e-12)


def test_amy_costs():
    seq = expand_ccx_amy(0, 1, 2)
    assert sum(g.kind in T_TYPE for g in seq) == 7
    assert t_layers(seq) == 3


def test_ix_phase():
    u = unitary(expand_ix(0, 1, 2), 3)
    phase = np.diag([1j if k & 3 == 3 else 1 for k in range(8)])
    assert np.allclose(u, toffoli_matrix() @ phase, atol=1e-12)
    # |q0=1, q1=1, y=0> -> i |1 1 1>
    out = run_statevector(expand_ix(0, 1, 2), 3, 0b011)[0].state
    assert np.isclose(out[0b111], 1j)
    seq = expand_ix(0, 1, 2)
    assert sum(g.kind in T_TYPE for g in seq) == 4 and t_layers(seq) == 2


@pytest.mark.parametrize("t_state", [None, 3])
def test_tand_compute_on_zero_target(t_state):
    n = 3 if t_state is None else 4
    u = unitary(expand_tand_compute(0, 1, 2, t_state), n)
    ref = toffoli_matrix(n)
    for k in range(4):  # target and t_state start at 0
        assert np.allclose(u[:, k], ref[:, k], atol=1e-12)


def test_tand_compute_rejects_overlap():
    with pytest.raises(MalformedGateError):
        expand_tand_compute(0, 1, 1)


def test_tand_pair_is_identity_in_both_branches():
    rng = np.random.default_rng(7)
    amp = rng.normal(size=4) + 1j * rng.normal(size=4)
    amp /= np.linalg.norm(amp)
    psi = np.zeros(8, complex)
    psi[:4] = amp
    seq = expand_tand_compute(0, 1, 2) + expand_tand_uncompute(0, 1, 2, 0)
    branches = run_statevector(seq, 3, psi)
    assert sorted(b.cbits[0] for b in branches) == [0, 1]
    assert np.isclose(sum(b.prob for b in branches), 1)
    for b in branches:
        assert np.allclose(b.state, psi, atol=1e-12)


def test_jones_toffoli():
    seq = expand_ccx_jones(0, 1, 2, 3, 0)
    assert sum(g.kind in T_TYPE for g in seq) == 4
    for k in range(8):
        for br in run_statevector(seq, 4, k):
            expect = k ^ ((k & 1) & (k >> 1) & 1) << 2
            assert np.isclose(abs(br.state[expect]), 1)


def ladder_circuit(k, use_tand):
    b = new_circuit("mcx", k)
    seq = expand_mcx_ladder(b.x, b.gamma[0], b.alloc, b.release, use_tand=use_tand)
    b.extend(seq)
    return b.build()


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("use_tand", [False, True])
def test_mcx_ladder_truth_table(k, use_tand):
    c = ladder_circuit(k, use_tand)
    out = run_batch(c, exhaustive=True)
    expected = (np.arange(1 << k) == (1 << k) - 1).astype(int)
    assert list(out.bits(c.outputs.bits[0])) == list(expected)
    assert out.ancillas_clean().all() and not out.violations


def test_mcx_ladder_rejects_empty():
    with pytest.raises(MalformedGateError):
        expand_mcx_ladder((), 0, lambda: 1)


def test_lower_mcx_budget():
    b = new_circuit("mcx", 5)
    b.add(G.MCX, b.x, b.gamma[0])
    c = b.build()
    lowered = lower_mcx(c)
    assert lowered.count(G.MCX) == 0 and lowered.count(G.CCX) == 7
    assert len(lowered.qubits_with_role(Role.ANCILLA)) == 3
    with pytest.raises(AllocationError):
        lower_mcx(c, max_ancillas=2)
    out = run_batch(lowered, exhaustive=True)
    assert list(out.gamma) == [int(x == 31) for x in range(32)]


@pytest.mark.parametrize("design,m,expected", [
    ("p-op-4qlzc", 4, (28, 12)), ("ta-p-op-4qlzc", 4, (12, 4)), ("ta-op-qlzc", 4, (12, 4)),
    ("ta-op-qlzc", 8, (28, 8)), ("ta-op-pqlzc", 8, (42, 11)), ("fo-ta-op-pqlzc", 8, (42, 7)),
])
def test_expanded_t_metrics(design, m, expected):
    assert t_metrics(to_clifford_t(gen.build(design, m))) == expected


def test_jones_policy_cuts_t_count():
    c = gen.build("p-op-4qlzc", 4)
    amy = t_metrics(to_clifford_t(c))[0]
    jones = t_metrics(to_clifford_t(c, DecompositionPolicy(ccx_style="jones")))[0]
    assert (amy, jones) == (28, 16)


def test_expansion_leaves_no_macros():
    c = to_clifford_t(gen.build("reconfigurable", 4))
    assert not c.is_macro() and c.metadata["expanded"]
    assert to_clifford_t(gen.build("qlzc", 4), keep_ccx=True).count(G.CCX) == 6
