"""
Building counters and checking them
===================================

Each design is a macro-level circuit (CCX, T-AND pairs, CNOTs).  The bit
simulator evaluates all 2^m inputs at once, 64 per machine word.
"""
from qlzoc import fixtures, generators as gen
from qlzoc.simulator import evaluate_vector, exhaustive_verify, run_basis

for design, m in [("ta-op-qlzc", 8), ("ta-op-pqlzc", 8), ("fo-ta-op-pqlzc", 16), ("reconfigurable", 8)]:
    c = gen.build(design, m)
    report = exhaustive_verify(design, m)
    print(f"{design:16s} m={m:2d} qubits={c.n_qubits:3d} gates={len(c.gates):4d} "
          f"cases={report.cases} status={'pass' if report.passed else 'fail'}")

# one input at a time, with the mode bit selecting what is counted
c = gen.build("reconfigurable", 16)
print("mode=1 (zeros):", run_basis(c, 291, mode_bit=1).gamma)
print("mode=0 (ones): ", run_basis(c, 65475, mode_bit=0).gamma)

# parallel designs only build at 8, 16, 32, ...; shorter words are padded at the LSB end
for v in fixtures.LZC_VECTORS:
    r = evaluate_vector("fo-ta-op-pqlzc", v.n, v.word)
    print(f"n={v.n:2d} padded to {r.m_native:2d}: gamma={r.gamma:2d} (published {v.expected})")
