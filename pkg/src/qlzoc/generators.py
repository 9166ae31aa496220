"""Circuit constructions for the leading-zero/one counter family.

All cores count leading ONES of the input register; the zero-counting
designs complement the input with an X layer before and after the core, and
the reconfigurable design does the same with CX gates driven by a mode qubit.

Naming follows the design labels used in the resource tables:

* ``ta-op``  - all-one flags computed with temporary logical-AND gates
* ``p-op``   - power-of-two stages store their flag in the output bit itself
* ``pqlzc``  - tree of 4-qubit blocks combined by merge circuits
* ``fo``     - the merge control is fanned out so merge gates run in parallel
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from .gate_ir import (
    Circuit, CircuitBuilder, CircuitError, Gate, GateKind, Role, new_circuit,
)
from .oracle import BitWord, flip_mask, loc, lzc

G = GateKind


class ShapeError(CircuitError, ValueError):
    """Width not supported natively by a design."""


class VariantError(CircuitError, ValueError):
    pass


class Design(str, Enum):
    QLOC = "qloc"
    QLZC = "qlzc"
    TA_OP_QLOC = "ta-op-qloc"
    TA_OP_QLZC = "ta-op-qlzc"
    P_OP_4QLZC = "p-op-4qlzc"
    TA_P_OP_4QLZC = "ta-p-op-4qlzc"
    TA_OP_PQLZC = "ta-op-pqlzc"
    FO_TA_OP_PQLZC = "fo-ta-op-pqlzc"
    TA_OP_PQLOC = "ta-op-pqloc"
    FO_TA_OP_PQLOC = "fo-ta-op-pqloc"
    RECONFIGURABLE = "reconfigurable"

    @property
    def counts(self) -> str:
        """'lzc', 'loc', or 'mode' (selected at run time by the mode qubit)."""
        if self is Design.RECONFIGURABLE:
            return "mode"
        return "loc" if self.value.endswith("loc") else "lzc"

    @property
    def parallel(self) -> bool:
        return "pqlo" in self.value or "pqlz" in self.value

    @property
    def fixed_width(self) -> int | None:
        return 4 if self in (Design.P_OP_4QLZC, Design.TA_P_OP_4QLZC) else None

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    Design.QLOC: "QLOC", Design.QLZC: "QLZC",
    Design.TA_OP_QLOC: "TA-OP QLOC", Design.TA_OP_QLZC: "TA-OP QLZC",
    Design.P_OP_4QLZC: "P-OP 4-QLZC", Design.TA_P_OP_4QLZC: "TA-P-OP 4-QLZC",
    Design.TA_OP_PQLZC: "TA-OP PQLZC", Design.FO_TA_OP_PQLZC: "FO-TA-OP PQLZC",
    Design.TA_OP_PQLOC: "TA-OP PQLOC", Design.FO_TA_OP_PQLOC: "FO-TA-OP PQLOC",
    Design.RECONFIGURABLE: "reconfigurable QLZOC",
}

ALIASES = {
    "pqlzc": Design.TA_OP_PQLZC,
    "fo-pqlzc": Design.FO_TA_OP_PQLZC,
    "pqloc": Design.TA_OP_PQLOC,
    "fo-pqloc": Design.FO_TA_OP_PQLOC,
    "reconfigurable-qlzoc": Design.RECONFIGURABLE,
}


def parse_design(name: str | Design) -> Design:
    if isinstance(name, Design):
        return name
    key = name.strip().lower()
    if key in ALIASES:
        return ALIASES[key]
    try:
        return Design(key)
    except ValueError:
        raise ValueError(f"unknown design {name!r}") from None


def is_parallel_width(m: int) -> bool:
    """m = 4 * 2**p with p >= 1."""
    return m >= 8 and m & (m - 1) == 0


def native_width(design: Design, m: int) -> int:
    """Smallest width >= m the design builds without padding."""
    design = parse_design(design)
    if design.fixed_width:
        if m > design.fixed_width:
            raise ShapeError(f"{design.label} is a fixed {design.fixed_width}-qubit design")
        return design.fixed_width
    if design.parallel:
        return max(8, 1 << (m - 1).bit_length())
    return m


def check_width(design: Design, m: int) -> None:
    design = parse_design(design)
    if m < 1:
        raise ShapeError(f"width must be >= 1, got {m}")
    if design.fixed_width and m != design.fixed_width:
        raise ShapeError(f"{design.label} requires m = {design.fixed_width}, got {m}")
    if design.parallel and not is_parallel_width(m):
        raise ShapeError(
            f"{design.label} natively supports m = 4*2^p with p >= 1 (8, 16, 32, ...); "
            f"got {m}; use --pad to pad the input to m = {native_width(design, m)}")


# -- small building blocks ------------------------------------------------------

def _and(b: CircuitBuilder, c0: int, c1: int, t: int, tand: bool) -> None:
    b.add(G.TAND if tand else G.CCX, (c0, c1), t)


def _unand(b: CircuitBuilder, c0: int, c1: int, t: int, tand: bool) -> None:
    b.add(G.TAND_DG if tand else G.CCX, (c0, c1), t)


def _mcx(b: CircuitBuilder, controls: Sequence[int], t: int) -> None:
    kind = {1: G.CX, 2: G.CCX}.get(len(controls), G.MCX)
    b.add(kind, controls, t)


class IMcxnVariant(str, Enum):
    ORIGINAL = "original"
    ANCILLA_ASSISTED = "ancilla"
    POWER_OF_TWO_IN_PLACE = "pow2"


@dataclass(frozen=True)
class IMcxnSpec:
    """Stage i of the counter: flip the n low output bits when the top i inputs are all 1."""

    i: int
    variant: IMcxnVariant = IMcxnVariant.ORIGINAL

    def __post_init__(self):
        if self.i < 1:
            raise ValueError(f"stage index must be >= 1, got {self.i}")
        object.__setattr__(self, "variant", IMcxnVariant(self.variant))
        if self.variant is IMcxnVariant.POWER_OF_TWO_IN_PLACE and self.i & (self.i - 1):
            raise VariantError(f"in-place variant needs i = 2^p, got i = {self.i}")

    @property
    def n(self) -> int:
        return flip_mask(self.i).n


def build_imcxn(b: CircuitBuilder, spec: IMcxnSpec, controls: Sequence[int],
                gamma: Sequence[int], alloc: Callable[[], int] | None = None) -> None:
    """Emit one i-MCXn stage.

    ``controls`` are the i most significant input qubits, ``gamma`` the
    count register LSB first.
    """
    if len(controls) != spec.i:
        raise VariantError(f"stage {spec.i} needs {spec.i} controls, got {len(controls)}")
    n = spec.n
    if n > len(gamma):
        raise VariantError(f"stage {spec.i} flips {n} bits but gamma has {len(gamma)}")
    if spec.variant is IMcxnVariant.ORIGINAL:
        for j in range(n):
            _mcx(b, controls, gamma[j])
    elif spec.variant is IMcxnVariant.ANCILLA_ASSISTED:
        a = (alloc or b.alloc)()
        _mcx(b, controls, a)
        for j in range(n):
            b.add(G.CX, (a,), gamma[j])
        _mcx(b, controls, a)
        b.release(a)
    else:
        p = n - 1
        _mcx(b, controls, gamma[p])  # gamma_p is still 0: earlier stages only reach bits < p
        for j in range(p):
            b.add(G.CX, (gamma[p],), gamma[j])


def _sequential_loc(b: CircuitBuilder, xs: Sequence[int], gamma: Sequence[int], *,
                    tand: bool, variant: str = "ladder") -> None:
    """Leading-one count of ``xs`` (LSB first) into zeroed ``gamma``.

    ``ladder`` keeps one flag ancilla per stage: flag_1 is a CNOT copy of
    the MSB and flag_i = flag_{i-1} AND x_{m-i}; each stage drives its flips
    with CNOTs from its flag and all flags are uncomputed in reverse order.
    """
    m = len(xs)
    msb_first = list(reversed(xs))
    if variant != "ladder":
        if tand:
            raise VariantError("T-AND designs use the flag ladder")
        for i in range(1, m + 1):
            v = IMcxnVariant.ORIGINAL if variant == "original" else IMcxnVariant.ANCILLA_ASSISTED
            if variant == "pow2" and i & (i - 1) == 0:
                v = IMcxnVariant.POWER_OF_TWO_IN_PLACE
            build_imcxn(b, IMcxnSpec(i, v), msb_first[:i], gamma)
        return
    flags = [b.alloc(Role.ANCILLA)]
    b.add(G.CX, (msb_first[0],), flags[0])
    b.add(G.CX, (flags[0],), gamma[0])
    for i in range(2, m + 1):
        f = b.alloc(Role.ANCILLA)
        _and(b, flags[-1], msb_first[i - 1], f, tand)
        flags.append(f)
        for j in range(flip_mask(i).n):
            b.add(G.CX, (f,), gamma[j])
    for i in range(m, 1, -1):
        _unand(b, flags[i - 2], msb_first[i - 1], flags[i - 1], tand)
    b.add(G.CX, (msb_first[0],), flags[0])
    for f in reversed(flags):
        b.release(f)


def _block4_loc(b: CircuitBuilder, xs: Sequence[int], gamma: Sequence[int], *,
                tand: bool, anc: int) -> None:
    """4-qubit leading-one count using in-place power-of-two stages and one ancilla.

    Stages 1, 2 and 4 write their flag straight into gamma_0, gamma_1 and
    gamma_2; stage 3 needs ``anc``.  The stage-3 uncompute reads gamma_1 and
    therefore has to come before stage 4 flips gamma_1.
    """
    x0, x1, x2, x3 = xs
    g0, g1, g2 = gamma
    b.add(G.CX, (x3,), g0)                  # i=1
    _and(b, x3, x2, g1, tand)               # i=2: flag_2 lives in gamma_1
    b.add(G.CX, (g1,), g0)
    _and(b, g1, x1, anc, tand)              # i=3: flag_3 in the ancilla
    b.add(G.CX, (anc,), g0)
    _and(b, anc, x0, g2, tand)              # i=4: flag_4 lives in gamma_2
    _unand(b, g1, x1, anc, tand)            # stage-3 reuse logic ...
    b.add(G.CX, (g2,), g1)                  # ... before the stage-4 flips
    b.add(G.CX, (g2,), g0)


def _complement_layer(b: CircuitBuilder, xs: Sequence[int], mode: int | None) -> None:
    for q in xs:
        if mode is None:
            b.add(G.X, (), q)
        else:
            b.add(G.CX, (mode,), q)


# -- fan-out and merge ------------------------------------------------------------

def build_fanout(ctrl: int, ancillas: Sequence[int]) -> list[Gate]:
    """Binary-tree copy of ``ctrl`` onto zeroed ``ancillas`` in ceil(lg(n+1)) CX layers.

    Round r copies from each of the first 2**r holders to the holder 2**r
    positions further along ``[ctrl, *ancillas]``.
    """
    q = [ctrl, *ancillas]
    n = len(ancillas)
    gates = []
    step = 1
    while step <= n:
        for j in range(step):
            if j + step <= n:
                gates.append(Gate(G.CX, (q[j],), (q[j + step],)))
        step *= 2
    return gates


def inverse_fanout(ctrl: int, ancillas: Sequence[int]) -> list[Gate]:
    return build_fanout(ctrl, ancillas)[::-1]


@dataclass(frozen=True)
class MergeGroup:
    high: tuple[int, ...]  # count register of the high half, LSB first
    low: tuple[int, ...]
    top: int  # fresh zero qubit that becomes the new MSB


def merge_gates(group: MergeGroup, copies: Sequence[int] | None = None) -> tuple[list[Gate], Gate]:
    """Merge of two saturating counts; returns (AND/select gates, final CX).

    With the high half's MSB as select bit s: top = s AND low_msb, each lower
    high bit picks up s AND low_bit, then CX(top -> s).  ``copies`` supplies
    one copy of s per AND gate (fan-out); by default every gate reads s.
    """
    high, low, top = group.high, group.low, group.top
    if len(high) != len(low) or len(high) < 2 or (1 << (len(high) - 1)) & ((1 << (len(high) - 1)) - 1):
        raise ShapeError("merge needs two equal count registers of a power-of-two width")
    s = high[-1]
    k = len(high) - 1  # lg of the half width
    copies = list(copies) if copies is not None else [s] * (k + 1)
    if len(copies) != k + 1:
        raise ShapeError(f"merge of {k}-bit halves needs {k + 1} select copies")
    gates = [Gate(G.TAND, (copies[0], low[-1]), (top,))]
    gates += [Gate(G.CCX, (copies[i + 1], low[i]), (high[i],)) for i in range(k)]
    return gates, Gate(G.CX, (top,), (s,))


def build_merge(b: CircuitBuilder, group: MergeGroup, fo: bool = False) -> None:
    """Emit one merge, optionally with the select bit fanned out."""
    k = len(group.high) - 1
    if not fo:
        gates, final = merge_gates(group)
        b.extend(gates)
        b.append(final)
        return
    ancs = [b.alloc(Role.ANCILLA) for _ in range(k)]
    s = group.high[-1]
    b.extend(build_fanout(s, ancs))
    gates, final = merge_gates(group, [s, *ancs])
    b.extend(gates)
    b.extend(inverse_fanout(s, ancs))
    for a in reversed(ancs):
        b.release(a)
    b.append(final)


def _parallel_loc(b: CircuitBuilder, xs: Sequence[int], out: Sequence[int], *, fo: bool) -> None:
    """Tree of TA-P-OP 4-qubit blocks merged pairwise, one round per tree level.

    Blocks each keep their own ancilla so all of them run side by side.
    Within a round every group's fan-out copies are live at once; they go
    back to the pool after the round's inverse fan-outs and are reused by
    the next round.
    """
    leaves: list[tuple[Sequence[int], Sequence[int]]] = []
    rounds: dict[int, list[MergeGroup]] = {}

    def split(xs: Sequence[int], out: Sequence[int], level: int) -> None:
        if len(xs) == 4:
            leaves.append((xs, out))
            return
        half = len(xs) // 2
        low_out = [b.alloc(Role.GARBAGE) for _ in range(half.bit_length())]
        split(xs[half:], out[:-1], level - 1)
        split(xs[:half], low_out, level - 1)
        rounds.setdefault(level, []).append(MergeGroup(tuple(out[:-1]), tuple(low_out), out[-1]))

    levels = (len(xs) // 4).bit_length() - 1
    split(list(xs), list(out), levels)
    for leaf_x, leaf_out in leaves:
        _block4_loc(b, leaf_x, leaf_out, tand=True, anc=b.alloc(Role.ANCILLA))
    for r in range(1, levels + 1):
        groups = rounds[r]
        if not fo:
            for grp in groups:
                build_merge(b, grp)
            continue
        k = len(groups[0].high) - 1
        ancs = [[b.alloc(Role.ANCILLA) for _ in range(k)] for _ in groups]
        for grp, a in zip(groups, ancs):
            b.extend(build_fanout(grp.high[-1], a))
        finals = []
        for grp, a in zip(groups, ancs):
            gates, final = merge_gates(grp, [grp.high[-1], *a])
            b.extend(gates)
            finals.append(final)
        for grp, a in zip(groups, ancs):
            b.extend(inverse_fanout(grp.high[-1], a))
        for a in reversed(ancs):
            for q in reversed(a):
                b.release(q)
        b.extend(finals)


# -- public constructors -----------------------------------------------------------

def _finish(b: CircuitBuilder, design: Design, **meta) -> Circuit:
    b.metadata.update({"design": design.value, **{k: str(v) for k, v in meta.items()}})
    c = b.build()
    c.check()
    return c


def build_qloc(m: int, variant: str = "ladder") -> Circuit:
    """Sequential leading-one counter with Toffoli flags (no T-AND)."""
    b = new_circuit(Design.QLOC.value, m)
    _sequential_loc(b, b.x, b.gamma, tand=False, variant=variant)
    return _finish(b, Design.QLOC, variant=variant)


def build_qlzc(m: int, variant: str = "ladder") -> Circuit:
    b = new_circuit(Design.QLZC.value, m)
    _complement_layer(b, b.x, None)
    _sequential_loc(b, b.x, b.gamma, tand=False, variant=variant)
    _complement_layer(b, b.x, None)
    return _finish(b, Design.QLZC, variant=variant)


def build_ta_op_variant(m: int, base: str = "qlzc") -> Circuit:
    """Sequential counter whose flag ladder uses T-AND compute/uncompute pairs."""
    design = Design.TA_OP_QLZC if base == "qlzc" else Design.TA_OP_QLOC
    if base not in ("qlzc", "qloc"):
        raise VariantError(f"base must be 'qlzc' or 'qloc', got {base!r}")
    b = new_circuit(design.value, m)
    if base == "qlzc":
        _complement_layer(b, b.x, None)
    _sequential_loc(b, b.x, b.gamma, tand=True)
    if base == "qlzc":
        _complement_layer(b, b.x, None)
    return _finish(b, design)


def build_4qlzc_block(style: str = "ta-p-op", m: int = 4) -> Circuit:
    """Stand-alone 4-qubit zero counter; ``style`` is 'p-op' or 'ta-p-op'."""
    if m != 4:
        raise VariantError(f"the 4-qubit block needs m = 4, got {m}")
    design = {"p-op": Design.P_OP_4QLZC, "ta-p-op": Design.TA_P_OP_4QLZC}.get(style)
    if design is None:
        raise VariantError(f"style must be 'p-op' or 'ta-p-op', got {style!r}")
    b = new_circuit(design.value, 4)
    _complement_layer(b, b.x, None)
    _block4_loc(b, b.x, b.gamma, tand=design is Design.TA_P_OP_4QLZC, anc=b.alloc(Role.ANCILLA))
    _complement_layer(b, b.x, None)
    return _finish(b, design)


def build_pqlzc(m: int, *, fo: bool = False, count: str = "lzc") -> Circuit:
    """Parallel counter for m = 4*2^p, p >= 1."""
    design = {("lzc", False): Design.TA_OP_PQLZC, ("lzc", True): Design.FO_TA_OP_PQLZC,
              ("loc", False): Design.TA_OP_PQLOC, ("loc", True): Design.FO_TA_OP_PQLOC}[count, fo]
    check_width(design, m)
    b = new_circuit(design.value, m)
    if count == "lzc":
        _complement_layer(b, b.x, None)
    _parallel_loc(b, b.x, b.gamma, fo=fo)
    if count == "lzc":
        _complement_layer(b, b.x, None)
    return _finish(b, design)


def build_fo_pqlzc(m: int) -> Circuit:
    return build_pqlzc(m, fo=True)


def build_reconfigurable(m: int, core: str = "sequential") -> Circuit:
    """Counter with a mode qubit: mode=1 counts leading zeros, mode=0 leading ones."""
    if core not in ("sequential", "parallel", "fo"):
        raise VariantError(f"core must be sequential, parallel or fo; got {core!r}")
    if core != "sequential" and not is_parallel_width(m):
        raise ShapeError(f"parallel cores need m = 4*2^p with p >= 1, got {m}")
    b = new_circuit(Design.RECONFIGURABLE.value, m, mode_qubit=True)
    (c,) = b.register("mode").bits
    _complement_layer(b, b.x, c)
    if core == "sequential":
        _sequential_loc(b, b.x, b.gamma, tand=True)
    else:
        _parallel_loc(b, b.x, b.gamma, fo=core == "fo")
    _complement_layer(b, b.x, c)
    return _finish(b, Design.RECONFIGURABLE, core=core)


def build(design: str | Design, m: int, **options) -> Circuit:
    """Dispatch on design id; ``options`` go to the specific constructor."""
    design = parse_design(design)
    check_width(design, m)
    if design is Design.QLOC:
        return build_qloc(m, **options)
    if design is Design.QLZC:
        return build_qlzc(m, **options)
    if design is Design.TA_OP_QLOC:
        return build_ta_op_variant(m, "qloc")
    if design is Design.TA_OP_QLZC:
        return build_ta_op_variant(m, "qlzc")
    if design is Design.P_OP_4QLZC:
        return build_4qlzc_block("p-op")
    if design is Design.TA_P_OP_4QLZC:
        return build_4qlzc_block("ta-p-op")
    if design is Design.RECONFIGURABLE:
        return build_reconfigurable(m, **options)
    return build_pqlzc(m, fo=design.value.startswith("fo"), count=design.counts)


def expected_count(design: str | Design, x: int, m: int, mode_bit: int | None = None) -> int:
    counts = parse_design(design).counts
    if counts == "mode":
        if mode_bit not in (0, 1):
            raise ValueError("reconfigurable design needs mode_bit 0 or 1")
        counts = "lzc" if mode_bit else "loc"
    return lzc(x, m) if counts == "lzc" else loc(x, m)


def pad_input(x: BitWord, m_native: int, mode: str = "lzc") -> BitWord:
    """Widen ``x`` at the LSB end: zeros for 'lzc', ones for 'loc'.

    Both keep the count unless x is all zeros (resp. all ones), where the
    padded count exceeds x.width; clamp with ``min(count, x.width)``.
    """
    if x.width > m_native:
        raise ShapeError(f"cannot pad a {x.width}-bit word down to {m_native} bits")
    if mode not in ("lzc", "loc"):
        raise ValueError(f"mode must be 'lzc' or 'loc', got {mode!r}")
    extra = m_native - x.width
    fill = (1 << extra) - 1 if mode == "loc" else 0
    return BitWord((x.value << extra) | fill, m_native)
