"""OpenQASM 3 style emitter and a parser for the subset it writes.

The dialect has no T-AND primitive, so T-AND and MCX gates are expanded
before emission; Toffolis are kept as ``ccx``.  Register roles and
metadata travel in ``// @`` pragma comments so a parsed file rebuilds the
same circuit.
"""
from __future__ import annotations

import re

from .decompositions import DEFAULT_POLICY, DecompositionPolicy, to_clifford_t
from .gate_ir import Circuit, Gate, GateKind, MalformedGateError, Register, Role

G = GateKind

_NAMES = {
    G.X: "x", G.CX: "cx", G.CCX: "ccx", G.H: "h", G.S: "s", G.SDG: "sdg",
    G.T: "t", G.TDG: "tdg", G.CZ: "cz",
}
_KINDS = {v: k for k, v in _NAMES.items()}


class QasmError(ValueError):
    pass


def _q(i: int) -> str:
    return f"q[{i}]"


def emit_qasm(circuit: Circuit, policy: DecompositionPolicy = DEFAULT_POLICY, *, expand_ccx: bool = False) -> str:
    c = to_clifford_t(circuit, policy, keep_ccx=not expand_ccx)
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";',
             f"// @circuit {c.name} m={c.m}"]
    lines += [f"// @meta {k}={v}" for k, v in sorted(c.metadata.items())]
    in_reg = set()
    for reg in c.registers.values():
        lines.append(f"// @reg {reg.name} {reg.role.value} " + ",".join(map(str, reg.bits)))
        in_reg.update(reg.bits)
    lines += [f"// @qubit {q} {role.value}" for q, role in enumerate(c.roles) if q not in in_reg]
    lines.append(f"qubit[{c.n_qubits}] q;")
    if c.n_cbits:
        lines.append(f"bit[{c.n_cbits}] c;")
    for g in c.gates:
        if g.kind is G.MEASURE:
            lines.append(f"c[{g.cbit}] = measure {_q(g.target)};")
        elif g.kind is G.IF_CZ:
            lines.append(f"if (c[{g.cbit}]) cz {_q(g.controls[0])}, {_q(g.target)};")
        elif g.kind is G.IF_X:
            lines.append(f"if (c[{g.cbit}]) x {_q(g.target)};")
        elif g.kind in _NAMES:
            lines.append(f"{_NAMES[g.kind]} " + ", ".join(_q(i) for i in g.qubits) + ";")
        else:  # pragma: no cover - to_clifford_t leaves only the kinds above
            raise QasmError(f"no dialect spelling for {g.kind.value}")
    return "\n".join(lines) + "\n"


_GATE = re.compile(r"^(?:if \(c\[(\d+)\]\) )?([a-z]+) (q\[\d+\](?:, q\[\d+\])*);$")
_MEASURE = re.compile(r"^c\[(\d+)\] = measure q\[(\d+)\];$")
_IDX = re.compile(r"q\[(\d+)\]")


def parse_qasm(text: str) -> Circuit:
    name, m = "", 0
    metadata: dict[str, str] = {}
    registers: dict[str, Register] = {}
    roles: dict[int, Role] = {}
    n_qubits = n_cbits = 0
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("OPENQASM", "include")):
            continue
        if line.startswith("//"):
            body = line[2:].strip()
            if body.startswith("@circuit"):
                _, name, mfield = body.split()
                m = int(mfield.split("=")[1])
            elif body.startswith("@meta"):
                k, _, v = body[6:].partition("=")
                metadata[k] = v
            elif body.startswith("@reg"):
                parts = body.split()
                bits = tuple(int(v) for v in parts[3].split(",")) if len(parts) > 3 else ()
                registers[parts[1]] = Register(parts[1], Role(parts[2]), bits)
                roles.update((q, Role(parts[2])) for q in bits)
            elif body.startswith("@qubit"):
                _, q, role = body.split()
                roles[int(q)] = Role(role)
            continue
        if mt := re.match(r"^qubit\[(\d+)\] q;$", line):
            n_qubits = int(mt.group(1))
        elif mt := re.match(r"^bit\[(\d+)\] c;$", line):
            n_cbits = int(mt.group(1))
        elif mt := _MEASURE.match(line):
            gates.append(Gate(G.MEASURE, (), (int(mt.group(2)),), int(mt.group(1))))
        elif mt := _GATE.match(line):
            cond, op, args = mt.groups()
            qs = tuple(int(i) for i in _IDX.findall(args))
            if op not in _KINDS:
                raise QasmError(f"line {lineno}: unknown gate {op!r}")
            kind = _KINDS[op]
            if cond is not None:
                kind = {G.CZ: G.IF_CZ, G.X: G.IF_X}.get(kind)
                if kind is None:
                    raise QasmError(f"line {lineno}: only cz and x may be classically controlled")
            try:
                gates.append(Gate(kind, qs[:-1], qs[-1:], None if cond is None else int(cond)))
            except MalformedGateError as e:
                raise QasmError(f"line {lineno}: {e}") from None
        else:
            raise QasmError(f"line {lineno}: cannot parse {line!r}")
    if sorted(roles) != list(range(n_qubits)):
        raise QasmError("qubit roles do not cover the declared qubit register")
    c = Circuit(name, m, tuple(gates), tuple(roles[q] for q in range(n_qubits)), registers, n_cbits, metadata)
    c.check()
    return c
