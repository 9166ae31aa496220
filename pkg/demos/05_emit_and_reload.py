"""
Interchange and OpenQASM 3 text
===============================

Circuits serialise to a line-per-gate interchange format and to an
OpenQASM 3 style listing; both parse back to the same circuit.
"""
from qlzoc import generators as gen
from qlzoc.gate_ir import dumps, loads
from qlzoc.qasm import emit_qasm, parse_qasm

c = gen.build("ta-p-op-4qlzc", 4)
text = dumps(c)
print(text)
print("interchange round trip:", loads(text).gates == c.gates)

qasm = emit_qasm(c)
print("\n".join(qasm.splitlines()[:24]), "\n...")
print("qasm round trip:", emit_qasm(parse_qasm(qasm)) == qasm)
