"""
From macro gates to Clifford+T
==============================

Toffolis become the 7-T sequence; a T-AND becomes 4 T gates plus an S-dagger,
and its uncompute is a measurement with classically controlled fix-ups.
The statevector validator follows both measurement outcomes.
"""
import numpy as np

from qlzoc import generators as gen
from qlzoc.analyzer import t_metrics
from qlzoc.decompositions import expand_ccx_amy, expand_tand_compute, expand_tand_uncompute, to_clifford_t
from qlzoc.gate_ir import Gate, GateKind
from qlzoc.simulator import run_statevector, unitary

toffoli = unitary([Gate(GateKind.CCX, (0, 1), (2,))], 3)
print("7-T Toffoli is exact:", np.allclose(unitary(expand_ccx_amy(0, 1, 2), 3), toffoli))

# T-AND then uncompute on a superposition of controls: both branches give the input back
psi = np.zeros(8, complex)
psi[:4] = [0.5, 0.5j, -0.5, 0.5]
seq = expand_tand_compute(0, 1, 2) + expand_tand_uncompute(0, 1, 2, cbit=0)
for branch in run_statevector(seq, 3, psi):
    print(f"outcome {branch.cbits[0]}: p={branch.prob:.2f} restored={np.allclose(branch.state, psi)}")

for design, m in [("p-op-4qlzc", 4), ("ta-p-op-4qlzc", 4), ("fo-ta-op-pqlzc", 8)]:
    print(design, "T-count/T-depth:", t_metrics(to_clifford_t(gen.build(design, m))))
