"""Circuit verification.

Two simulators live here:

* a bit-level simulator for macro circuits on computational-basis inputs.
  Each qubit holds a packed ``uint64`` array with one bit per input case, so
  a single pass over the gate list evaluates 64 inputs per machine word;
* a small statevector validator (at most 12 qubits) for expanded
  Clifford+T sequences, which enumerates both outcomes of every measurement.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gate_ir import CLIFFORD_T_ONLY, Circuit, Gate, GateKind, Role
from .oracle import BitWord
from . import generators as gen

G = GateKind
MAX_STATEVECTOR_QUBITS = 12
_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


class WrongLevelError(ValueError):
    """Gate kind not handled at this abstraction level."""


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    gate_index: int
    gate: Gate
    kind: str  # 'compute-target-nonzero' or 'uncompute-mismatch'
    n_cases: int
    first_case: int


# -- packed bit lanes ---------------------------------------------------------------

def _pack(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=bool)
    n_words = max(1, -(-len(bits) // 64))
    padded = np.zeros(n_words * 64, dtype=bool)
    padded[: len(bits)] = bits
    return np.packbits(padded, bitorder="little").view(np.uint64)


def _unpack(words: np.ndarray, n: int) -> np.ndarray:
    return np.unpackbits(words.view(np.uint8), bitorder="little")[:n].astype(bool)


def _input_columns(xs: Sequence[int] | None, m: int, n_cases: int) -> list[np.ndarray]:
    if xs is None:  # exhaustive: case k is input k
        idx = np.arange(n_cases, dtype=np.int64)
        return [_pack((idx >> j) & 1) for j in range(m)]
    if m <= 62:
        arr = np.asarray(xs, dtype=np.int64)
        return [_pack((arr >> j) & 1) for j in range(m)]
    return [_pack(np.fromiter(((x >> j) & 1 for x in xs), dtype=bool, count=n_cases)) for j in range(m)]


@dataclass
class BatchOutcome:
    """Final basis states of a batch of simulated inputs."""

    circuit: Circuit
    n_cases: int
    state: np.ndarray  # (n_qubits, n_words) packed lanes
    initial_inputs: np.ndarray  # (m, n_words)
    violations: list[Violation] = field(default_factory=list)
    initial_mode: np.ndarray | None = None
    violation_lanes: np.ndarray | None = None  # packed OR of all violating lanes

    def bits(self, q: int) -> np.ndarray:
        return _unpack(self.state[q], self.n_cases)

    def values(self, qubits: Sequence[int]) -> np.ndarray:
        """Integer value per case of ``qubits`` read LSB first (width <= 62)."""
        out = np.zeros(self.n_cases, dtype=np.int64)
        for j, q in enumerate(qubits):
            out |= self.bits(q).astype(np.int64) << j
        return out

    @property
    def gamma(self) -> np.ndarray:
        return self.values(self.circuit.outputs.bits)

    def _valid(self) -> np.ndarray:
        return _pack(np.ones(self.n_cases, dtype=bool))

    def input_restored(self) -> np.ndarray:
        diff = np.zeros_like(self.state[0])
        for j, q in enumerate(self.circuit.inputs.bits):
            diff |= self.state[q] ^ self.initial_inputs[j]
        if self.initial_mode is not None:
            diff |= self.state[self.circuit.mode.bits[0]] ^ self.initial_mode
        return ~_unpack(diff & self._valid(), self.n_cases)

    def zero(self, q: int) -> np.ndarray:
        return ~self.bits(q)

    def violated(self) -> np.ndarray:
        if self.violation_lanes is None:
            return np.zeros(self.n_cases, dtype=bool)
        return _unpack(self.violation_lanes, self.n_cases)

    def ancillas_clean(self) -> np.ndarray:
        ok = np.ones(self.n_cases, dtype=bool)
        for q in self.circuit.qubits_with_role(Role.ANCILLA, Role.T_STATE):
            ok &= self.zero(q)
        return ok


def run_batch(circuit: Circuit, xs: Sequence[int] | None = None, mode_bits: Sequence[int] | int | None = None,
              *, exhaustive: bool = False) -> BatchOutcome:
    """Simulate every input in ``xs`` (or all 2**m inputs) in one gate pass."""
    m = circuit.m
    if exhaustive:
        if m > 24:
            raise CapacityError(f"exhaustive sweep of {m} bits is too large")
        n_cases, xs = 1 << m, None
    else:
        xs = list(xs)
        n_cases = len(xs)
    n_words = max(1, -(-n_cases // 64))
    state = np.zeros((circuit.n_qubits, n_words), dtype=np.uint64)
    cols = _input_columns(xs, m, n_cases)
    for j, q in enumerate(circuit.inputs.bits):
        state[q] = cols[j]
    initial_mode = None
    if circuit.mode is not None:
        if mode_bits is None:
            raise ValueError("circuit has a mode qubit; pass mode_bits")
        if np.isscalar(mode_bits):
            mode_bits = [int(mode_bits)] * n_cases
        initial_mode = _pack(np.asarray(mode_bits, dtype=bool))
        state[circuit.mode.bits[0]] = initial_mode
    valid = _pack(np.ones(n_cases, dtype=bool))
    violations: list[Violation] = []
    bad_lanes = np.zeros(n_words, dtype=np.uint64)

    def flag(i: int, g: Gate, kind: str, bad: np.ndarray) -> None:
        nonlocal bad_lanes
        bad = bad & valid
        if bad.any():
            bad_lanes = bad_lanes | bad
            lanes = _unpack(bad, n_cases)
            violations.append(Violation(i, g, kind, int(lanes.sum()), int(np.argmax(lanes))))

    for i, g in enumerate(circuit.gates):
        k = g.kind
        if k is G.X:
            state[g.target] ^= _ONES
        elif k is G.CX:
            state[g.target] ^= state[g.controls[0]]
        elif k is G.CCX:
            state[g.target] ^= state[g.controls[0]] & state[g.controls[1]]
        elif k is G.MCX:
            acc = state[g.controls[0]].copy()
            for c in g.controls[1:]:
                acc &= state[c]
            state[g.target] ^= acc
        elif k is G.TAND:
            flag(i, g, "compute-target-nonzero", state[g.target])
            state[g.target] = state[g.controls[0]] & state[g.controls[1]]
        elif k is G.TAND_DG:
            flag(i, g, "uncompute-mismatch", state[g.target] ^ (state[g.controls[0]] & state[g.controls[1]]))
            state[g.target] = 0
        elif k in CLIFFORD_T_ONLY:
            raise WrongLevelError(f"gate {i} ({g}) is Clifford+T level; simulate the macro circuit")
        else:
            raise WrongLevelError(f"unsupported gate {g}")
    return BatchOutcome(circuit, n_cases, state, np.array(cols), violations, initial_mode, bad_lanes)


@dataclass(frozen=True)
class SimOutcome:
    input_value: int
    gamma: int
    ancilla_bits: dict[int, int]
    violations: tuple[Violation, ...]
    mode_bit: int | None = None


def run_basis(circuit: Circuit, x: int | BitWord, mode_bit: int | None = None) -> SimOutcome:
    """Simulate one basis input."""
    if isinstance(x, BitWord):
        if x.width != circuit.m:
            raise ValueError(f"input width {x.width} != circuit width {circuit.m}")
        x = x.value
    if not 0 <= x < (1 << circuit.m):
        raise ValueError(f"{x} does not fit the {circuit.m}-qubit input register")
    out = run_batch(circuit, [x], None if mode_bit is None else [mode_bit])
    value = sum(int(out.bits(q)[0]) << j for j, q in enumerate(circuit.inputs.bits))
    anc = {q: int(out.bits(q)[0]) for q in circuit.qubits_with_role(Role.ANCILLA, Role.GARBAGE, Role.T_STATE)}
    mode = None if circuit.mode is None else int(out.bits(circuit.mode.bits[0])[0])
    return SimOutcome(value, int(out.gamma[0]), anc, tuple(out.violations), mode)


# -- statevector validator --------------------------------------------------------------

_W = np.exp(1j * np.pi / 4)
_ONE_QUBIT = {
    G.X: np.array([[0, 1], [1, 0]], dtype=complex),
    G.H: np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    G.S: np.diag([1, 1j]),
    G.SDG: np.diag([1, -1j]),
    G.T: np.diag([1, _W]),
    G.TDG: np.diag([1, np.conj(_W)]),
}


@dataclass
class Branch:
    prob: float
    state: np.ndarray  # flat amplitudes; bit q of the index is qubit q
    cbits: dict[int, int]


def _axis(n: int, q: int) -> int:
    return n - 1 - q


def _apply(psi: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Apply a unitary gate to psi of shape (2,)*n."""
    k = g.kind
    if k in _ONE_QUBIT:
        ax = _axis(n, g.target)
        psi = np.tensordot(_ONE_QUBIT[k], psi, axes=([1], [ax]))
        return np.moveaxis(psi, 0, ax)
    psi = psi.copy()
    sel = [slice(None)] * n
    for c in g.controls:
        sel[_axis(n, c)] = 1
    if k in (G.CZ, G.IF_CZ):
        sel[_axis(n, g.target)] = 1
        psi[tuple(sel)] *= -1
        return psi
    if k in (G.CX, G.CCX, G.MCX, G.IF_X):
        t = _axis(n, g.target)
        s0, s1 = list(sel), list(sel)
        s0[t], s1[t] = 0, 1
        a = psi[tuple(s0)].copy()
        psi[tuple(s0)] = psi[tuple(s1)]
        psi[tuple(s1)] = a
        return psi
    raise WrongLevelError(f"statevector validator does not handle {k.value}; expand TAND gates first")


def run_statevector(gates: Iterable[Gate], n_qubits: int, basis_state: int | np.ndarray = 0,
                    *, tol: float = 1e-12) -> list[Branch]:
    """Evolve a basis state (or given amplitudes), forking at each measurement."""
    if n_qubits > MAX_STATEVECTOR_QUBITS:
        raise CapacityError(f"{n_qubits} qubits exceeds the {MAX_STATEVECTOR_QUBITS}-qubit validator")
    if isinstance(basis_state, (int, np.integer)):
        psi = np.zeros(1 << n_qubits, dtype=complex)
        psi[int(basis_state)] = 1
    else:
        psi = np.asarray(basis_state, dtype=complex).copy()
    branches = [Branch(1.0, psi.reshape((2,) * n_qubits), {})]
    for g in gates:
        nxt = []
        for br in branches:
            if g.kind is G.MEASURE:
                ax = _axis(n_qubits, g.target)
                for z in (0, 1):
                    proj = br.state.copy()
                    sel = [slice(None)] * n_qubits
                    sel[ax] = 1 - z
                    proj[tuple(sel)] = 0
                    p = float(np.sum(np.abs(proj) ** 2))
                    if p > tol:
                        nxt.append(Branch(br.prob * p, proj / np.sqrt(p), {**br.cbits, g.cbit: z}))
            elif g.kind in (G.IF_CZ, G.IF_X):
                if br.cbits.get(g.cbit, 0):
                    br.state = _apply(br.state, g, n_qubits)
                nxt.append(br)
            else:
                br.state = _apply(br.state, g, n_qubits)
                nxt.append(br)
        branches = nxt
    for br in branches:
        br.state = br.state.reshape(-1)
    return branches


def unitary(gates: Sequence[Gate], n_qubits: int) -> np.ndarray:
    """Matrix of a measurement-free gate list; column k is the image of |k>."""
    if any(g.kind in (G.MEASURE, G.IF_CZ, G.IF_X) for g in gates):
        raise WrongLevelError("unitary() needs a measurement-free sequence")
    dim = 1 << n_qubits
    cols = [run_statevector(gates, n_qubits, k)[0].state for k in range(dim)]
    return np.stack(cols, axis=1)


def compact(gates: Sequence[Gate]) -> tuple[list[Gate], list[int]]:
    """Relabel the qubits of a gate list to 0..k-1; returns (gates, old ids)."""
    ids = sorted({q for g in gates for q in g.qubits})
    pos = {q: i for i, q in enumerate(ids)}
    cbits = sorted({g.cbit for g in gates if g.cbit is not None})
    cpos = {c: i for i, c in enumerate(cbits)}
    out = [Gate(g.kind, tuple(pos[q] for q in g.controls), tuple(pos[q] for q in g.targets),
                None if g.cbit is None else cpos[g.cbit]) for g in gates]
    return out, ids


# -- verification -----------------------------------------------------------------------

@dataclass
class VerificationReport:
    design: str
    m: int
    mode: str  # 'exhaustive' or 'sample'
    cases: int = 0
    failures: int = 0
    counterexample: dict | None = None
    m_native: int | None = None

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.failures == 0

    def to_text(self) -> str:
        lines = [f"design={self.design}", f"m={self.m}"]
        if self.m_native and self.m_native != self.m:
            lines.append(f"m_native={self.m_native}")
        lines += [f"mode={self.mode}", f"cases={self.cases}", f"failures={self.failures}",
                  f"status={'pass' if self.passed else 'fail'}"]
        if self.counterexample:
            lines += [f"counterexample.{k}={v}" for k, v in self.counterexample.items()]
        return "\n".join(lines) + "\n"


def stratified_samples(m: int, n_samples: int, seed: int = 0, count: str = "lzc") -> list[int]:
    """Words covering every count in [0, m], topped up with uniform random words."""
    rng = random.Random(seed)
    words = []
    for k in range(m + 1):
        for _ in range(max(1, n_samples // (4 * (m + 1)))):
            if k == m:
                w = 0
            else:
                rest = m - k - 1
                w = (1 << rest) | (rng.getrandbits(rest) if rest else 0)
            words.append(w if count == "lzc" else w ^ ((1 << m) - 1))
    while len(words) < n_samples:
        words.append(rng.getrandbits(m))
    return words


def check_batch(circuit: Circuit, design: gen.Design, xs: Sequence[int] | None, mode_bit: int | None,
                report: VerificationReport, *, width: int | None = None, pad_mode: str | None = None) -> None:
    """Run one batch and fold its failures into ``report``.

    ``width``/``pad_mode`` describe padded runs: ``xs`` are the original
    words of ``width`` bits, and reported counts are clamped to ``width``.
    """
    m = circuit.m
    exhaustive = xs is None
    orig_w = width or m
    if pad_mode:
        run_xs = [gen.pad_input(BitWord(x, orig_w), m, pad_mode).value for x in xs]
    else:
        run_xs = xs
    out = run_batch(circuit, run_xs, mode_bit, exhaustive=exhaustive)
    n = out.n_cases
    inputs = np.arange(n) if exhaustive else None
    got = out.gamma
    if pad_mode:
        got = np.minimum(got, orig_w)
    expected = np.array([gen.expected_count(design, int(x), orig_w, mode_bit)
                         for x in (inputs if exhaustive else xs)], dtype=np.int64)
    ok = (got == expected) & out.input_restored() & out.ancillas_clean() & ~out.violated()
    report.cases += n
    report.failures += int((~ok).sum())
    if report.counterexample is None and not ok.all():
        k = int(np.argmax(~ok))
        x = int(inputs[k]) if exhaustive else int(xs[k])
        report.counterexample = {
            "x": x, "mode_bit": mode_bit, "gamma": int(got[k]), "expected": int(expected[k]),
            "input_restored": bool(out.input_restored()[k]), "ancillas_clean": bool(out.ancillas_clean()[k]),
            "violations": len(out.violations),
        }


def exhaustive_verify(design: str | gen.Design, m: int, *, mode: str = "auto", n_samples: int = 10_000,
                      seed: int = 0, mode_bits: Sequence[int] | None = None, pad: bool = False,
                      circuit: Circuit | None = None) -> VerificationReport:
    """Check a design against its oracle on all 2**m inputs (or a stratified sample).

    ``mode='auto'`` sweeps exhaustively up to m = 16 and samples above.  With
    ``pad`` a non-native width is verified on the padded native circuit.
    """
    design = gen.parse_design(design)
    m_native = gen.native_width(design, m) if pad else m
    if circuit is None:
        circuit = gen.build(design, m_native)
    if mode == "auto":
        mode = "exhaustive" if m <= 16 else "sample"
    report = VerificationReport(design.value, m, mode, m_native=m_native)
    if design.counts == "mode":
        mode_bits = (0, 1) if mode_bits is None else tuple(mode_bits)
    else:
        mode_bits = (None,)
    for mb in mode_bits:
        count = design.counts if design.counts != "mode" else ("lzc" if mb else "loc")
        padded = m_native != m
        if mode == "exhaustive":
            if padded:
                xs = list(range(1 << m))
                check_batch(circuit, design, xs, mb, report, width=m, pad_mode=count)
            else:
                check_batch(circuit, design, None, mb, report)
        else:
            xs = stratified_samples(m, n_samples, seed, count)
            if padded:
                check_batch(circuit, design, xs, mb, report, width=m, pad_mode=count)
            else:
                check_batch(circuit, design, xs, mb, report)
    return report


@dataclass(frozen=True)
class VectorResult:
    design: str
    n: int
    x: int
    mode_bit: int | None
    gamma: int
    expected: int
    m_native: int
    clean: bool  # input restored, ancillas zero, no T-AND contract violations

    @property
    def passed(self) -> bool:
        return self.clean and self.gamma == self.expected

    def to_text(self) -> str:
        mode = "-" if self.mode_bit is None else self.mode_bit
        return (f"design={self.design}\tn={self.n}\tx={self.x}\tmode_bit={mode}\tm_native={self.m_native}"
                f"\tgamma={self.gamma}\texpected={self.expected}\tstatus={'pass' if self.passed else 'fail'}")


def evaluate_vector(design: str | gen.Design, n: int, x: int, mode_bit: int | None = None, *,
                    pad: bool = True, circuit: Circuit | None = None) -> VectorResult:
    """Count for one n-bit word, padding to the design's native width when needed."""
    design = gen.parse_design(design)
    m_native = gen.native_width(design, n) if pad else n
    if circuit is None:
        circuit = gen.build(design, m_native)
    count = design.counts if design.counts != "mode" else ("lzc" if mode_bit else "loc")
    word = gen.pad_input(BitWord(x, n), m_native, count)
    out = run_batch(circuit, [word.value], None if circuit.mode is None else [mode_bit])
    gamma = min(int(out.gamma[0]), n)
    clean = bool(out.input_restored()[0] and out.ancillas_clean()[0] and not out.violations)
    return VectorResult(design.value, n, x, mode_bit, gamma, gen.expected_count(design, x, n, mode_bit),
                        m_native, clean)
