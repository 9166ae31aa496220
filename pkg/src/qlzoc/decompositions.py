"""Clifford+T expansions of the macro gates (CCX, MCX, TAND, TAND_DG).

The fixed sequences here are checked against their unitaries by the
statevector validator in :mod:`qlzoc.simulator`; T-counts and T-layer counts
are part of each function's contract.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Sequence

from .gate_ir import (
    AllocationError, Circuit, CircuitBuilder, Gate, GateKind, MalformedGateError, Role,
)

G = GateKind


def _distinct(*qs: int) -> None:
    if len(set(qs)) != len(qs):
        raise MalformedGateError(f"qubits must be distinct: {qs}")


@dataclass(frozen=True)
class DecompositionPolicy:
    ccx_style: Literal["amy", "jones"] = "amy"
    tand_style: Literal["gidney"] = "gidney"
    mcx_style: Literal["ladder", "ladder-tand"] = "ladder"

    def __str__(self):
        return f"ccx={self.ccx_style},tand={self.tand_style},mcx={self.mcx_style}"


DEFAULT_POLICY = DecompositionPolicy()


def expand_ccx_amy(c0: int, c1: int, t: int) -> list[Gate]:
    """Toffoli as 7 T-type gates in 3 T-layers.

    The target is conjugated by H; in between, the phase (-1)^(a b c) is
    written as T on a, b, c, a^b^c and T-dagger on a^b, a^c, b^c, with CNOTs
    moving the parities onto wires.  ASAP total depth is 10; an exhaustive
    layer search finds no 3-qubit sequence of this kind at depth 9.
    """
    _distinct(c0, c1, t)
    a, b, c = c0, c1, t
    return [
        Gate(G.H, (), (c,)),
        Gate(G.T, (), (a,)), Gate(G.T, (), (b,)), Gate(G.T, (), (c,)),
        Gate(G.CX, (a,), (b,)),  # b <- a^b
        Gate(G.CX, (b,), (c,)),  # c <- a^b^c
        Gate(G.CX, (c,), (a,)),  # a <- b^c
        Gate(G.TDG, (), (a,)), Gate(G.TDG, (), (b,)), Gate(G.T, (), (c,)),
        Gate(G.CX, (b,), (a,)),  # a <- a^c
        Gate(G.CX, (b,), (c,)),  # c <- c
        Gate(G.TDG, (), (a,)),
        Gate(G.CX, (c,), (a,)),  # a <- a
        Gate(G.H, (), (c,)),
        Gate(G.CX, (a,), (b,)),  # b <- b
    ]


def expand_ix(q0: int, q1: int, y: int) -> list[Gate]:
    """|q0 q1 y> -> i^(q0 q1) |q0 q1 (y ^ q0 q1)> with 4 T-type gates, T-depth 2.

    In the H-conjugated frame of y the phase is w^-(y - (y^q0) - (y^q1) + (y^q0^q1))
    with w = e^(i pi/4); three CNOTs put the three mixed parities on
    separate wires so they share one T-layer.
    """
    _distinct(q0, q1, y)
    a, b, t = q0, q1, y
    return [
        Gate(G.H, (), (t,)),
        Gate(G.TDG, (), (t,)),
        Gate(G.CX, (a,), (t,)),  # t <- a^t
        Gate(G.CX, (t,), (b,)),  # b <- a^b^t
        Gate(G.CX, (b,), (a,)),  # a <- b^t
        Gate(G.T, (), (a,)), Gate(G.TDG, (), (b,)), Gate(G.T, (), (t,)),
        Gate(G.CX, (b,), (a,)),
        Gate(G.CX, (t,), (b,)),
        Gate(G.CX, (a,), (t,)),
        Gate(G.H, (), (t,)),
    ]


def expand_tand_compute(c0: int, c1: int, t: int, t_state: int | None = None) -> list[Gate]:
    """Temporary logical-AND: zero ancilla ``t`` ends holding c0 AND c1.

    The iX sequence leaves a phase i on the c0 c1 = 11 branch which S-dagger
    on the target removes.  The magic state is hosted on ``t`` itself unless
    a separate ``t_state`` qubit is given; in that case the AND is formed on
    ``t_state`` and handed over with two CNOTs, returning ``t_state`` to |0>.
    """
    host = t if t_state is None else t_state
    _distinct(c0, c1, *{t, host})
    seq = expand_ix(c0, c1, host) + [Gate(G.SDG, (), (host,))]
    if host != t:
        seq += [Gate(G.CX, (host,), (t,)), Gate(G.CX, (t,), (host,))]
    return seq


def expand_tand_uncompute(c0: int, c1: int, t: int, cbit: int) -> list[Gate]:
    """Measurement-based uncompute of ``t = c0 AND c1``; no T gates.

    H turns the AND value into a phase (-1)^(z c0 c1) on outcome z, the
    classically controlled CZ cancels it, and a classically controlled X
    resets the measured ancilla to |0>.
    """
    _distinct(c0, c1, t)
    return [
        Gate(G.H, (), (t,)),
        Gate(G.MEASURE, (), (t,), cbit),
        Gate(G.IF_CZ, (c0,), (c1,), cbit),
        Gate(G.IF_X, (), (t,), cbit),
    ]


def expand_ccx_jones(c0: int, c1: int, t: int, anc: int, cbit: int) -> list[Gate]:
    """Toffoli through a zero ancilla: 4 T gates instead of 7."""
    _distinct(c0, c1, t, anc)
    return (expand_tand_compute(c0, c1, anc)
            + [Gate(G.CX, (anc,), (t,))]
            + expand_tand_uncompute(c0, c1, anc, cbit))


def expand_mcx_ladder(controls: Sequence[int], target: int,
                      alloc: Callable[[], int], release: Callable[[int], None] | None = None,
                      *, use_tand: bool = False) -> list[Gate]:
    """MCX as an AND ladder into ancillas, one Toffoli onto the target, reversed.

    ``alloc`` must return a zero ancilla; it raises ``AllocationError`` when
    the budget is exhausted.  With ``use_tand`` the ladder rungs become
    TAND/TAND_DG pairs; the Toffoli onto the (arbitrary) target stays a CCX.
    """
    controls = tuple(controls)
    _distinct(*controls, target)
    k = len(controls)
    if k == 0:
        raise MalformedGateError("MCX needs at least one control")
    if k == 1:
        return [Gate(G.CX, controls, (target,))]
    if k == 2:
        return [Gate(G.CCX, controls, (target,))]
    compute = G.TAND if use_tand else G.CCX
    uncompute = G.TAND_DG if use_tand else G.CCX
    rungs = []
    acc = controls[0]
    for c in controls[1:-1]:
        a = alloc()
        rungs.append(((acc, c), a))
        acc = a
    seq = [Gate(compute, ctrl, (a,)) for ctrl, a in rungs]
    seq.append(Gate(G.CCX, (acc, controls[-1]), (target,)))
    seq += [Gate(uncompute, ctrl, (a,)) for ctrl, a in reversed(rungs)]
    if release is not None:
        for _, a in reversed(rungs):
            release(a)
    return seq


# -- lowering passes ----------------------------------------------------------

def lower_mcx(circuit: Circuit, policy: DecompositionPolicy = DEFAULT_POLICY,
              max_ancillas: int | None = None) -> Circuit:
    """Replace MCX gates by ladders; every other gate is kept as is."""
    if circuit.count(G.MCX) == 0:
        return circuit
    b = CircuitBuilder.from_circuit(circuit)
    added: list[int] = []

    def alloc() -> int:
        q = b.alloc(Role.ANCILLA)
        if q not in added:
            if max_ancillas is not None and len(added) >= max_ancillas:
                raise AllocationError(f"MCX ladder needs more than {max_ancillas} ancillas")
            added.append(q)
        return q

    for g in circuit.gates:
        if g.kind is G.MCX:
            b.extend(expand_mcx_ladder(g.controls, g.target, alloc, b.release,
                                       use_tand=policy.mcx_style == "ladder-tand"))
        else:
            b.append(g)
    out = b.build()
    return out


def to_clifford_t(circuit: Circuit, policy: DecompositionPolicy = DEFAULT_POLICY,
                  *, keep_ccx: bool = False) -> Circuit:
    """Fully expand a macro circuit into Clifford+T plus measurement.

    With ``keep_ccx`` Toffolis are left in place and only MCX and T-AND
    gates are expanded.
    """
    circuit = lower_mcx(circuit, policy)
    b = CircuitBuilder.from_circuit(circuit)
    for g in circuit.gates:
        if g.kind is G.CCX and not keep_ccx:
            if policy.ccx_style == "amy":
                b.extend(expand_ccx_amy(*g.controls, g.target))
            else:
                anc = b.alloc(Role.ANCILLA)
                b.extend(expand_ccx_jones(*g.controls, g.target, anc, b.new_cbit()))
                b.release(anc)
        elif g.kind is G.TAND:
            b.extend(expand_tand_compute(*g.controls, g.target))
        elif g.kind is G.TAND_DG:
            b.extend(expand_tand_uncompute(*g.controls, g.target, b.new_cbit()))
        else:
            b.append(g)
    out = b.build()
    level = "tand-only" if keep_ccx else str(policy)
    return out.with_gates(out.gates, metadata={**out.metadata, "expanded": level})
