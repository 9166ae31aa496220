"""Gate vocabulary, qubit registry and the immutable circuit container.

Every generator in the package emits a :class:`Circuit` through a
:class:`CircuitBuilder`; simulators and analyzers only ever read circuits.

Registers list their qubits LSB first: ``register.bits[j]`` carries weight
``2**j``.  Qubit ids are plain integers assigned in allocation order and say
nothing about significance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence


class CircuitError(Exception):
    """Base class for circuit construction errors."""


class InvalidWidthError(CircuitError, ValueError):
    pass


class MalformedGateError(CircuitError, ValueError):
    pass


class RegistryError(CircuitError, KeyError):
    pass


class AllocationError(CircuitError):
    pass


class GateKind(str, Enum):
    X = "X"
    CX = "CX"
    CCX = "CCX"
    MCX = "MCX"
    TAND = "TAND"  # temporary logical-AND, compute half
    TAND_DG = "TAND_DG"  # temporary logical-AND, measurement-based uncompute
    H = "H"
    S = "S"
    SDG = "SDG"
    T = "T"
    TDG = "TDG"
    CZ = "CZ"
    MEASURE = "MEASURE"
    IF_CZ = "IF_CZ"  # CZ conditioned on a classical bit
    IF_X = "IF_X"  # X conditioned on a classical bit


SINGLE_QUBIT = frozenset({GateKind.X, GateKind.H, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG})
T_TYPE = frozenset({GateKind.T, GateKind.TDG})
# Gates that must be expanded before Clifford+T analysis.
MACRO = frozenset({GateKind.CCX, GateKind.MCX, GateKind.TAND, GateKind.TAND_DG})
# Gates the bit-level simulator refuses.
CLIFFORD_T_ONLY = frozenset(
    {GateKind.H, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.CZ,
     GateKind.MEASURE, GateKind.IF_CZ, GateKind.IF_X}
)

# kind -> (number of controls or None for ">= 1", number of targets)
_ARITY = {
    GateKind.X: (0, 1),
    GateKind.H: (0, 1),
    GateKind.S: (0, 1),
    GateKind.SDG: (0, 1),
    GateKind.T: (0, 1),
    GateKind.TDG: (0, 1),
    GateKind.CX: (1, 1),
    GateKind.CZ: (1, 1),
    GateKind.IF_CZ: (1, 1),
    GateKind.CCX: (2, 1),
    GateKind.TAND: (2, 1),
    GateKind.TAND_DG: (2, 1),
    GateKind.MCX: (None, 1),
    GateKind.MEASURE: (0, 1),
    GateKind.IF_X: (0, 1),
}
_NEEDS_CBIT = frozenset({GateKind.MEASURE, GateKind.IF_CZ, GateKind.IF_X})


@dataclass(frozen=True)
class Gate:
    """One circuit instruction.

    ``cbit`` names the classical bit written by ``MEASURE`` or read by the
    ``IF_*`` corrections; it is ``None`` for every other kind.
    """

    kind: GateKind
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()
    cbit: int | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        n_ctrl, n_tgt = _ARITY[kind]
        if n_ctrl is None:
            if len(self.controls) < 1:
                raise MalformedGateError(f"{kind.value} needs at least one control")
        elif len(self.controls) != n_ctrl:
            raise MalformedGateError(f"{kind.value} takes {n_ctrl} controls, got {len(self.controls)}")
        if len(self.targets) != n_tgt:
            raise MalformedGateError(f"{kind.value} takes {n_tgt} targets, got {len(self.targets)}")
        qs = self.qubits
        if len(set(qs)) != len(qs):
            raise MalformedGateError(f"{kind.value} lists a qubit twice: {qs}")
        if any(q < 0 for q in qs):
            raise MalformedGateError(f"negative qubit id in {qs}")
        if (kind in _NEEDS_CBIT) != (self.cbit is not None):
            raise MalformedGateError(f"{kind.value}: classical bit {'required' if kind in _NEEDS_CBIT else 'not allowed'}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def target(self) -> int:
        return self.targets[0]

    def __str__(self) -> str:
        return format_gate(self)


def format_gate(g: Gate) -> str:
    parts = [g.kind.value]
    if g.controls:
        parts.append("c:" + ",".join(map(str, g.controls)))
    parts.append("t:" + ",".join(map(str, g.targets)))
    if g.kind is GateKind.MEASURE:
        parts.append(f"m:{g.cbit}")
    elif g.cbit is not None:
        parts.append(f"if:{g.cbit}")
    return " ".join(parts)


class Role(str, Enum):
    INPUT = "input"
    OUTPUT = "output"
    MODE = "mode"
    ANCILLA = "ancilla"  # reusable: returned to |0> before the circuit ends
    GARBAGE = "garbage"  # not restored
    T_STATE = "t_state"  # consumed magic-state resource, never re-pooled


ANCILLA_ROLES = frozenset({Role.ANCILLA, Role.GARBAGE, Role.T_STATE})


@dataclass(frozen=True)
class Register:
    name: str
    role: Role
    bits: tuple[int, ...]  # LSB first

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def msb_first(self) -> tuple[int, ...]:
        return tuple(reversed(self.bits))


def output_width(m: int) -> int:
    """Qubits needed to hold a count in ``[0, m]``: floor(lg m) + 1."""
    if m < 1:
        raise InvalidWidthError(f"input width must be >= 1, got {m}")
    return m.bit_length()


@dataclass(frozen=True)
class Circuit:
    name: str
    m: int
    gates: tuple[Gate, ...]
    roles: tuple[Role, ...]  # roles[q] for every qubit id q
    registers: Mapping[str, Register]
    n_cbits: int = 0
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "registers", MappingProxyType(dict(self.registers)))
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))

    @property
    def n_qubits(self) -> int:
        return len(self.roles)

    @property
    def inputs(self) -> Register:
        return self.registers["x"]

    @property
    def outputs(self) -> Register:
        return self.registers["gamma"]

    @property
    def mode(self) -> Register | None:
        return self.registers.get("mode")

    def qubits_with_role(self, *roles: Role) -> tuple[int, ...]:
        return tuple(q for q, r in enumerate(self.roles) if r in roles)

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind is kind)

    def is_macro(self) -> bool:
        return any(g.kind in MACRO for g in self.gates)

    def check(self) -> None:
        """Full-scan validation of registry and T-AND pairing invariants."""
        n = self.n_qubits
        for i, g in enumerate(self.gates):
            for q in g.qubits:
                if q >= n:
                    raise RegistryError(f"gate {i} ({g}) references unregistered qubit {q}")
            if g.cbit is not None and g.cbit >= self.n_cbits:
                raise RegistryError(f"gate {i} ({g}) references unregistered classical bit {g.cbit}")
        unpaired = unpaired_tand_targets(self)
        bad = [q for q in unpaired if self.roles[q] not in (Role.OUTPUT, Role.GARBAGE)]
        if bad:
            raise CircuitError(f"T-AND computes without matching uncompute on qubits {bad}")

    def with_gates(self, gates: Iterable[Gate], **changes) -> "Circuit":
        kw = dict(name=self.name, m=self.m, gates=tuple(gates), roles=self.roles,
                  registers=self.registers, n_cbits=self.n_cbits, metadata=self.metadata)
        kw.update(changes)
        return Circuit(**kw)


def unpaired_tand_targets(circuit: Circuit) -> list[int]:
    """Targets of TAND gates that are never followed by a matching TAND_DG."""
    open_: dict[int, tuple[int, ...]] = {}
    unpaired = []
    for g in circuit.gates:
        if g.kind is GateKind.TAND:
            if g.target in open_:
                unpaired.append(g.target)
            open_[g.target] = g.controls
        elif g.kind is GateKind.TAND_DG:
            if g.target not in open_ or set(open_[g.target]) != set(g.controls):
                raise CircuitError(f"TAND_DG on {g.target} without a matching compute")
            del open_[g.target]
    return unpaired + sorted(open_)


class CircuitBuilder:
    """Append-only construction of a :class:`Circuit`.

    Reusable ancillas go back to a LIFO pool on :meth:`release`; the next
    :meth:`alloc` of role ANCILLA hands out the most recently released one.
    """

    def __init__(self, name: str, m: int, *, mode_qubit: bool = False):
        out_w = output_width(m)
        self.name = name
        self.m = m
        self._roles: list[Role] = []
        self._gates: list[Gate] = []
        self._registers: dict[str, Register] = {}
        self._pool: list[int] = []
        self._live: set[int] = set()
        self._n_cbits = 0
        self.metadata: dict[str, str] = {}
        self.add_register("x", Role.INPUT, m)
        self.add_register("gamma", Role.OUTPUT, out_w)
        if mode_qubit:
            self.add_register("mode", Role.MODE, 1)

    @classmethod
    def from_circuit(cls, circuit: Circuit) -> "CircuitBuilder":
        b = cls.__new__(cls)
        b.name, b.m = circuit.name, circuit.m
        b._roles = list(circuit.roles)
        b._gates = []
        b._registers = dict(circuit.registers)
        b._pool, b._live = [], set()
        b._n_cbits = circuit.n_cbits
        b.metadata = dict(circuit.metadata)
        return b

    # -- registry ---------------------------------------------------------
    def _new_qubit(self, role: Role) -> int:
        self._roles.append(role)
        return len(self._roles) - 1

    def add_register(self, name: str, role: Role, width: int) -> Register:
        if name in self._registers:
            raise RegistryError(f"register {name!r} already exists")
        reg = Register(name, role, tuple(self._new_qubit(role) for _ in range(width)))
        self._registers[name] = reg
        return reg

    def register(self, name: str) -> Register:
        return self._registers[name]

    @property
    def x(self) -> tuple[int, ...]:
        return self._registers["x"].bits

    @property
    def gamma(self) -> tuple[int, ...]:
        return self._registers["gamma"].bits

    def alloc(self, role: Role = Role.ANCILLA) -> int:
        if role not in ANCILLA_ROLES:
            raise AllocationError(f"{role.value} is not an ancilla role")
        if role is Role.ANCILLA and self._pool:
            q = self._pool.pop()
        else:
            q = self._new_qubit(role)
        self._live.add(q)
        return q

    def release(self, q: int) -> None:
        if q not in self._live:
            raise AllocationError(f"qubit {q} is not a live ancilla")
        if self._roles[q] is not Role.ANCILLA:
            raise AllocationError(f"qubit {q} has role {self._roles[q].value} and cannot be re-pooled")
        self._live.remove(q)
        self._pool.append(q)

    def new_cbit(self) -> int:
        self._n_cbits += 1
        return self._n_cbits - 1

    # -- gates --------------------------------------------------------------
    def append(self, gate: Gate) -> None:
        n = len(self._roles)
        for q in gate.qubits:
            if not 0 <= q < n:
                raise RegistryError(f"qubit {q} is not registered")
        if gate.cbit is not None and not 0 <= gate.cbit < self._n_cbits:
            raise RegistryError(f"classical bit {gate.cbit} is not registered")
        self._gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def add(self, kind: GateKind | str, controls: Sequence[int] = (), targets: Sequence[int] | int = (),
            cbit: int | None = None) -> None:
        if isinstance(targets, int):
            targets = (targets,)
        self.append(Gate(GateKind(kind), tuple(controls), tuple(targets), cbit))

    def build(self) -> Circuit:
        return Circuit(self.name, self.m, tuple(self._gates), tuple(self._roles),
                       self._registers, self._n_cbits, self.metadata)


def new_circuit(name: str, m: int, *, mode_qubit: bool = False) -> CircuitBuilder:
    """Builder with an m-qubit input register and a floor(lg m)+1 output register."""
    if m < 1:
        raise InvalidWidthError(f"input width must be >= 1, got {m}")
    return CircuitBuilder(name, m, mode_qubit=mode_qubit)


# -- interchange format -------------------------------------------------------

def dumps(circuit: Circuit) -> str:
    """Line-oriented text form: header lines, then one gate per line."""
    lines = [f"circuit {circuit.name} m={circuit.m}"]
    for k, v in sorted(circuit.metadata.items()):
        lines.append(f"meta {k}={v}")
    lines.append(f"qubits {circuit.n_qubits}")
    lines.append(f"cbits {circuit.n_cbits}")
    in_reg = set()
    for reg in circuit.registers.values():
        lines.append(f"reg {reg.name} {reg.role.value} {len(reg)} " + ",".join(map(str, reg.bits)))
        in_reg.update(reg.bits)
    for q, role in enumerate(circuit.roles):
        if q not in in_reg:
            lines.append(f"qubit {q} {role.value}")
    lines.extend(format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def parse_gate(line: str) -> Gate:
    head, *fields = line.split()
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()
    cbit = None
    for f in fields:
        key, _, val = f.partition(":")
        ids = tuple(int(v) for v in val.split(",") if v)
        if key == "c":
            controls = ids
        elif key == "t":
            targets = ids
        elif key in ("m", "if"):
            cbit = ids[0]
        else:
            raise MalformedGateError(f"unknown field {f!r} in {line!r}")
    try:
        kind = GateKind(head)
    except ValueError:
        raise MalformedGateError(f"unknown gate kind {head!r}") from None
    return Gate(kind, controls, targets, cbit)


def loads(text: str) -> Circuit:
    name, m = "", 0
    n_qubits = n_cbits = 0
    roles: dict[int, Role] = {}
    registers: dict[str, Register] = {}
    metadata: dict[str, str] = {}
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word = line.split()[0]
        if word == "circuit":
            _, name, mfield = line.split()
            m = int(mfield.split("=")[1])
        elif word == "meta":
            k, _, v = line[5:].partition("=")
            metadata[k] = v
        elif word == "qubits":
            n_qubits = int(line.split()[1])
        elif word == "cbits":
            n_cbits = int(line.split()[1])
        elif word == "reg":
            parts = line.split()
            rname, role, width = parts[1], Role(parts[2]), int(parts[3])
            bits = tuple(int(v) for v in parts[4].split(",")) if width else ()
            registers[rname] = Register(rname, role, bits)
            roles.update((q, role) for q in bits)
        elif word == "qubit":
            _, q, role = line.split()
            roles[int(q)] = Role(role)
        else:
            gates.append(parse_gate(line))
    if sorted(roles) != list(range(n_qubits)):
        raise RegistryError("qubit roles do not cover the declared qubit count")
    c = Circuit(name, m, tuple(gates), tuple(roles[q] for q in range(n_qubits)),
                registers, n_cbits, metadata)
    c.check()
    return c
