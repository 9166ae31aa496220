"""Synthesis, simulation and resource analysis of quantum leading-zero/one counters."""
from .gate_ir import Circuit, CircuitBuilder, Gate, GateKind, Role, dumps, loads
from .oracle import BitWord, lzc, loc, mloc
from .generators import Design, build, parse_design
from .simulator import exhaustive_verify, run_basis, run_batch, run_statevector
from .analyzer import analyze, compare, t_metrics
from .decompositions import DecompositionPolicy, to_clifford_t

__all__ = [
    "Circuit", "CircuitBuilder", "Gate", "GateKind", "Role", "dumps", "loads",
    "BitWord", "lzc", "loc", "mloc",
    "Design", "build", "parse_design",
    "exhaustive_verify", "run_basis", "run_batch", "run_statevector",
    "analyze", "compare", "t_metrics",
    "DecompositionPolicy", "to_clifford_t",
]
