"""Resource metrics, closed-form cost models and comparison against published figures.

Depth conventions
-----------------
Both depths use ASAP layering in program order: a gate lands one layer
after the latest layer among the qubits and classical bits it touches.
For total depth every gate (measurements and classically controlled
corrections included) costs one layer; for T-depth only T and T-dagger
gates advance the counter, so T-depth is the largest number of T-type
gates on any dependency path.

Width conventions
-----------------
``width_total`` counts every registered qubit.  ``width_excl_input`` drops
the input register, which is how the 4-qubit comparison table counts
width.  ``width_excl_reusable`` drops reset-to-zero ancillas.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .decompositions import DEFAULT_POLICY, DecompositionPolicy, to_clifford_t
from .gate_ir import MACRO, T_TYPE, Circuit, Gate, GateKind, Role
from . import generators as gen
from .generators import Design
from .simulator import BatchOutcome, WrongLevelError, run_batch, stratified_samples

G = GateKind


class EvidenceError(ValueError):
    """Ancilla classification needs at least one simulated input."""


# -- layering -----------------------------------------------------------------------

def _resources(g: Gate) -> list[tuple[str, int]]:
    res = [("q", q) for q in g.qubits]
    if g.cbit is not None:
        res.append(("c", g.cbit))
    return res


def asap_layers(gates: Sequence[Gate], *, weight=lambda g: 1) -> list[int]:
    """Layer index of each gate under ASAP scheduling; weight-0 gates share their predecessor's layer.

    Returned indices are 1-based end layers; the circuit depth is their max.
    """
    last: dict[tuple[str, int], int] = {}
    out = []
    for g in gates:
        res = _resources(g)
        layer = max((last.get(r, 0) for r in res), default=0) + weight(g)
        for r in res:
            last[r] = layer
        out.append(layer)
    return out


def _require_expanded(circuit: Circuit) -> None:
    bad = [g for g in circuit.gates if g.kind in MACRO]
    if bad:
        raise WrongLevelError(f"{len(bad)} macro gates left (first: {bad[0]}); expand with to_clifford_t first")


def t_metrics(circuit: Circuit) -> tuple[int, int]:
    """(T-count, T-depth) of an expanded Clifford+T circuit."""
    _require_expanded(circuit)
    is_t = lambda g: 1 if g.kind in T_TYPE else 0
    t_count = sum(is_t(g) for g in circuit.gates)
    t_depth = max(asap_layers(circuit.gates, weight=is_t), default=0)
    return t_count, t_depth


def total_depth(circuit: Circuit) -> int:
    _require_expanded(circuit)
    return max(asap_layers(circuit.gates), default=0)


def asap_is_tight(gates: Sequence[Gate], layers: Sequence[int], *, weight=lambda g: 1) -> bool:
    """True when no gate could move to an earlier layer without passing a predecessor."""
    last: dict[tuple[str, int], int] = {}
    for g, layer in zip(gates, layers):
        res = _resources(g)
        prev = max((last.get(r, 0) for r in res), default=0)
        if layer != prev + weight(g):
            return False
        for r in res:
            last[r] = layer
    return True


def serial_t_depth(circuit: Circuit) -> int:
    """T-depth bound from running every macro gate one after another."""
    per_gate = {G.CCX: 3, G.TAND: 2, G.T: 1, G.TDG: 1}
    return sum(per_gate.get(g.kind, 0) for g in circuit.gates)


def macro_t_count(circuit: Circuit, policy: DecompositionPolicy = DEFAULT_POLICY) -> int:
    """T-count predicted from macro gates: 7 per CCX (4 with Jones), 4 per TAND, 1 per bare T."""
    ccx = 7 if policy.ccx_style == "amy" else 4
    if circuit.count(G.MCX):
        raise WrongLevelError("lower MCX gates before counting")
    return (ccx * circuit.count(G.CCX) + 4 * circuit.count(G.TAND)
            + circuit.count(G.T) + circuit.count(G.TDG))


# -- ancillas ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AncillaClasses:
    reusable: int
    garbage: int
    t_state: int
    flags: tuple[str, ...] = ()


def simulation_evidence(circuit: Circuit, *, max_exhaustive: int = 12, n_samples: int = 2048,
                        seed: int = 0) -> BatchOutcome:
    """Run the macro circuit on all inputs (small m) or a stratified sample."""
    m = circuit.m
    if m <= max_exhaustive:
        xs = list(range(1 << m))
    else:
        xs = stratified_samples(m, n_samples, seed)
    if circuit.mode is None:
        return run_batch(circuit, xs)
    both = xs + xs
    return run_batch(circuit, both, [0] * len(xs) + [1] * len(xs))


def ancilla_classes(circuit: Circuit, evidence: BatchOutcome) -> AncillaClasses:
    """Classify non-input, non-output qubits from where they end up.

    Reusable means the qubit is back at 0 on every tested input.  The
    classification is checked against the registry roles; disagreements are
    returned as flags.  ``t_state`` counts T-AND sites, each of which
    consumes one magic state hosted on its target qubit.
    """
    if evidence.n_cases == 0:
        raise EvidenceError("no simulated inputs")
    skip = set(circuit.inputs.bits) | set(circuit.outputs.bits)
    if circuit.mode is not None:
        skip |= set(circuit.mode.bits)
    reusable = garbage = 0
    flags = []
    for q, role in enumerate(circuit.roles):
        if q in skip:
            continue
        clean = bool(evidence.zero(q).all())
        reusable += clean
        garbage += not clean
        if clean and role is Role.GARBAGE:
            flags.append(f"qubit {q} declared garbage but always returns to 0")
        if not clean and role in (Role.ANCILLA, Role.T_STATE):
            flags.append(f"qubit {q} declared {role.value} but is left dirty")
    return AncillaClasses(reusable, garbage, circuit.count(G.TAND), tuple(flags))


# -- reports ----------------------------------------------------------------------------

@dataclass
class ResourceReport:
    design: str
    m: int
    t_count: int
    t_depth: int
    total_depth: int
    width_total: int
    width_excl_input: int
    width_excl_reusable: int
    ancilla_reusable: int
    ancilla_garbage: int
    t_state_ancilla: int
    ccx: int
    tand: int
    policy: str
    flags: tuple[str, ...] = ()

    @property
    def ancilla(self) -> int:
        """Reusable plus garbage, excluding T-state hosts."""
        return self.ancilla_reusable + self.ancilla_garbage

    def metric(self, name: str) -> int:
        if name == "ancilla":
            return self.ancilla
        if name == "garbage":
            return self.ancilla_garbage
        if name == "ancilla_with_t_state":
            return self.ancilla + self.t_state_ancilla
        return getattr(self, name)

    def to_text(self) -> str:
        d = asdict(self)
        d["ancilla"] = self.ancilla
        d["flags"] = ";".join(self.flags) or "none"
        return "".join(f"{k}={v}\n" for k, v in d.items())


def analyze(circuit: Circuit, policy: DecompositionPolicy = DEFAULT_POLICY,
            evidence: BatchOutcome | None = None) -> ResourceReport:
    """Full resource report of a macro circuit under ``policy``."""
    expanded = to_clifford_t(circuit, policy)
    t_count, t_depth = t_metrics(expanded)
    evidence = evidence or simulation_evidence(circuit)
    anc = ancilla_classes(circuit, evidence)
    flags = list(anc.flags)
    predicted = macro_t_count(circuit if not circuit.count(G.MCX) else expanded, policy)
    if not circuit.count(G.MCX) and predicted != t_count:
        flags.append(f"expanded T-count {t_count} != macro tally {predicted}")
    width_total = expanded.n_qubits
    return ResourceReport(
        design=circuit.metadata.get("design", circuit.name), m=circuit.m,
        t_count=t_count, t_depth=t_depth, total_depth=total_depth(expanded),
        width_total=width_total, width_excl_input=width_total - circuit.m,
        width_excl_reusable=width_total - anc.reusable,
        ancilla_reusable=anc.reusable, ancilla_garbage=anc.garbage, t_state_ancilla=anc.t_state,
        ccx=circuit.count(G.CCX), tand=circuit.count(G.TAND), policy=str(policy), flags=tuple(flags),
    )


def depth_width(circuit: Circuit, evidence: BatchOutcome | None = None) -> tuple[int, int, int]:
    """(total_depth, width_total, width_excl_reusable) of an expanded circuit.

    Reusable ancillas are read from ``evidence`` when given, otherwise from
    the registry roles.
    """
    _require_expanded(circuit)
    if evidence is not None:
        reusable = ancilla_classes(circuit, evidence).reusable
    else:
        reusable = len(circuit.qubits_with_role(Role.ANCILLA, Role.T_STATE))
    return total_depth(circuit), circuit.n_qubits, circuit.n_qubits - reusable


# -- closed forms -------------------------------------------------------------------------

@dataclass(frozen=True)
class FormulaValue:
    value: Fraction | float
    text: str

    @property
    def integral(self) -> bool:
        return isinstance(self.value, Fraction) and self.value.denominator == 1

    def __str__(self):
        v = self.value
        if isinstance(v, Fraction):
            return str(v.numerator) if v.denominator == 1 else f"{float(v):g}"
        return f"{v:.4f}"


def _lg(m: int) -> int:
    if m < 1 or m & (m - 1):
        raise ValueError(f"m must be a power of two, got {m}")
    return m.bit_length() - 1


def _log2_factorial(n: int) -> Fraction | float:
    f = math.factorial(n)
    return Fraction(f.bit_length() - 1) if f & (f - 1) == 0 else math.log2(f)


CLOSED_FORM_DESIGNS = (Design.TA_OP_QLZC, Design.TA_OP_PQLZC, Design.FO_TA_OP_PQLZC)


def closed_forms(design: str | Design, m: int) -> dict[str, FormulaValue]:
    """Published asymptotic cost model evaluated exactly at ``m``; {} for other designs."""
    design = gen.parse_design(design)
    F = Fraction
    if design is Design.TA_OP_QLZC:
        return {
            "t_count": FormulaValue(F(4 * m - 4), "4m-4"),
            "t_depth": FormulaValue(F(m), "m"),
            "ancilla": FormulaValue(F(m), "m"),
            "garbage": FormulaValue(F(0), "0"),
            "width_total": FormulaValue(F(2 * m + m.bit_length()), "2m+floor(lg m)+1"),
            "total_depth": FormulaValue(F(14 * (m - 1) + 2 * m), "14(m-1)+2m"),
        }
    if design not in (Design.TA_OP_PQLZC, Design.FO_TA_OP_PQLZC):
        return {}
    L = F(_lg(m))
    out = {
        "t_count": FormulaValue(3 * m + L * (F(7, 2) * L + F(1, 2)) - F(23, 2), "3m+lg m(7/2 lg m+1/2)-23/2"),
        "garbage": FormulaValue(m - L - 2, "m-lg m-2"),
    }
    if design is Design.TA_OP_PQLZC:
        out.update({
            "t_depth": FormulaValue(L * (F(3, 2) * L - F(1, 2)) + F(1, 2), "lg m(3/2 lg m-1/2)+1/2"),
            "ancilla": FormulaValue(F(5, 4) * m - L - 2, "5/4 m-lg m-2"),
            "width_total": FormulaValue(F(9, 4) * m - 1, "9/4 m-1"),
            "total_depth": FormulaValue(L * (F(9, 2) * L + F(15, 2)) - 1, "lg m(9/2 lg m+15/2)-1"),
        })
    else:
        fact = _log2_factorial(int(L) - 1)
        depth = 12 * L + 8 + 2 * fact
        out.update({
            "t_depth": FormulaValue(3 * L - 2, "3 lg m-2"),
            "ancilla": FormulaValue(F(3, 2) * m - L - 2, "3/2 m-lg m-2"),
            "width_total": FormulaValue(F(5, 2) * m - 1, "5/2 m-1"),
            "total_depth": FormulaValue(depth if isinstance(depth, Fraction) else float(depth),
                                        "12 lg m+8+2 lg((lg m-1)!)"),
        })
    return out


# -- published table cells ----------------------------------------------------------------

@dataclass(frozen=True)
class TableCell:
    value: int
    table: str
    asserted: bool  # checked strictly (T-count, T-depth, ancilla accounting)


def _cells(table: str, **kw) -> dict[str, TableCell]:
    strict = {"t_count", "t_depth", "ancilla", "garbage"}
    return {k: TableCell(v, table, k in strict) for k, v in kw.items()}


# Generated metric each published column is compared against.
TABLE_METRIC = {"width_excl_input": "width", "total_depth": "depth"}

PUBLISHED_CELLS: dict[tuple[Design, int], dict[str, TableCell]] = {
    (Design.P_OP_4QLZC, 4): _cells("4-qubit", t_count=28, t_depth=12, ancilla=1, width_excl_input=4, total_depth=42),
    (Design.TA_P_OP_4QLZC, 4): _cells("4-qubit", t_count=12, t_depth=4, ancilla=1, width_excl_input=4, total_depth=32),
    (Design.TA_OP_QLZC, 4): _cells("4-qubit", t_count=12, t_depth=4, ancilla=4, width_excl_input=7, total_depth=47),
    (Design.TA_OP_QLZC, 8): _cells("8-qubit", t_count=28, t_depth=8, ancilla=8, garbage=0, total_depth=103),
    (Design.TA_OP_PQLZC, 8): _cells("8-qubit", t_count=42, t_depth=11, ancilla=5, garbage=3, total_depth=59),
    (Design.FO_TA_OP_PQLZC, 8): _cells("8-qubit", t_count=42, t_depth=7, ancilla=7, garbage=3, total_depth=46),
}

# 4-qubit counts width without the input register; scaling counts all qubits.
_TABLE_VS_FORMULA = {"width_excl_input": "width_total"}


class Status:
    MATCH = "Match"
    BETTER = "BetterThanPaper"
    MISMATCH = "Mismatch"
    NO_CLAIM = "NoClaim"


COST_METRICS = frozenset({"t_count", "t_depth", "ancilla", "garbage", "width_excl_input", "width_total"})


@dataclass(frozen=True)
class ComparisonRow:
    design: str
    m: int
    metric: str
    source: str  # '4-qubit', '8-qubit', 'scaling' or 'none'
    generated: int
    published: int | None = None
    closed_form: FormulaValue | None = None
    asserted: bool = False
    note: str = ""

    @property
    def status(self) -> str:
        return row_status(self.metric, self.generated, self.published, self.closed_form)

    def as_dict(self) -> dict:
        return {
            "design": self.design, "m": self.m, "metric": self.metric, "source": self.source,
            "generated": self.generated, "published": "-" if self.published is None else self.published,
            "closed_form": "-" if self.closed_form is None else str(self.closed_form),
            "status": self.status, "asserted": int(self.asserted), "note": self.note or "-",
        }


def _cmp(metric: str, generated: int, target) -> str:
    if generated == target:
        return Status.MATCH
    if metric in COST_METRICS and generated < target:
        return Status.BETTER
    return Status.MISMATCH


def row_status(metric: str, generated: int, published: int | None, formula: FormulaValue | None) -> str:
    """Table rows compare generated vs the table; formula rows carrying a table
    value are consistency checks between the two published numbers."""
    if published is not None and formula is None:
        return _cmp(metric, generated, published)
    if formula is not None:
        if not formula.integral:
            return Status.MISMATCH
        if published is not None and formula.value != published:
            return Status.MISMATCH
        return _cmp(metric, generated, formula.value)
    return Status.NO_CLAIM


REPORT_METRICS = ("t_count", "t_depth", "ancilla", "garbage", "width_total", "width_excl_input", "total_depth")


def compare(report: ResourceReport) -> list[ComparisonRow]:
    """Rows reconciling a resource report against the published tables and cost model."""
    design = gen.parse_design(report.design)
    m = report.m
    cells = PUBLISHED_CELLS.get((design, m), {})
    forms = closed_forms(design, m) if design in CLOSED_FORM_DESIGNS else {}
    rows = []
    for metric in REPORT_METRICS:
        gen_value = report.metric(metric)
        cell = cells.get(metric)
        if cell is not None:
            note = ""
            if metric == "total_depth":
                note = "depth convention unstated; reported, not asserted"
            rows.append(ComparisonRow(design.value, m, metric, cell.table, gen_value, cell.value,
                                      asserted=cell.asserted, note=note))
        if metric in forms:
            table_cell = cells.get(metric) or next(
                (cells[k] for k, v in _TABLE_VS_FORMULA.items() if v == metric and k in cells), None)
            note = ""
            if table_cell is not None and forms[metric].value != table_cell.value:
                note = f"formula disagrees with the {table_cell.table} table"
            elif not forms[metric].integral:
                note = "formula not integral at this m"
            rows.append(ComparisonRow(design.value, m, metric, "scaling", gen_value,
                                      None if table_cell is None else table_cell.value,
                                      forms[metric], note=note))
        if cell is None and metric not in forms and metric in ("t_count", "t_depth"):
            rows.append(ComparisonRow(design.value, m, metric, "none", gen_value))
    if "ancilla" in cells:
        alt = report.ancilla + report.t_state_ancilla
        note = "T-state hosts counted as extra ancillas"
        rows.append(ComparisonRow(design.value, m, "ancilla_with_t_state", cells["ancilla"].table, alt,
                                  cells["ancilla"].value, note=note))
    return rows


def strict_failures(rows: Iterable[ComparisonRow]) -> list[ComparisonRow]:
    return [r for r in rows if r.asserted and r.status == Status.MISMATCH]


# -- formatting ---------------------------------------------------------------------------

_COLUMNS = ("design", "m", "metric", "source", "generated", "published", "closed_form", "status", "note")


def format_rows(rows: Sequence[ComparisonRow]) -> str:
    """Aligned text table."""
    table = [_COLUMNS] + [tuple(str(r.as_dict()[c]) for c in _COLUMNS) for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(_COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def rows_to_records(rows: Sequence[ComparisonRow]) -> str:
    """One ``key=value`` record per line, tab separated."""
    return "".join("\t".join(f"{k}={v}" for k, v in r.as_dict().items()) + "\n" for r in rows)


def analyze_design(design: str | Design, m: int, policy: DecompositionPolicy = DEFAULT_POLICY,
                   **build_options) -> ResourceReport:
    return analyze(gen.build(design, m, **build_options), policy)
