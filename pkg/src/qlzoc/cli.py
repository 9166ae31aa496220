"""Command-line front end: generate, verify, analyze, compare, emit, sweep.

Exit codes: 0 when every asserted check passes, 1 on a verification or
strict-compare failure, 2 on usage errors (bad design, width or flags).
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from . import analyzer as an
from . import fixtures as fx
from . import generators as gen
from . import simulator as sim
from .decompositions import DecompositionPolicy, to_clifford_t
from .gate_ir import CircuitError, dumps
from .qasm import emit_qasm

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 20240611


class UsageError(Exception):
    pass


# -- helpers ------------------------------------------------------------------------------

def _policy(args) -> DecompositionPolicy:
    return DecompositionPolicy(ccx_style=args.ccx, mcx_style=args.mcx)


def _design(name: str) -> gen.Design:
    try:
        return gen.parse_design(name)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _width(design: gen.Design, m: int, pad: bool) -> int:
    """Native build width; without --pad a non-native width is a usage error."""
    try:
        if pad:
            return gen.native_width(design, m)
        gen.check_width(design, m)
        return m
    except gen.ShapeError as e:
        raise UsageError(str(e)) from None


def _build_options(args, design: gen.Design) -> dict:
    if design is gen.Design.RECONFIGURABLE and getattr(args, "core", None):
        return {"core": args.core}
    return {}


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _vector_rows(design: gen.Design, mode_bit: int | None = None) -> list[str]:
    """Built-in table vectors applicable to ``design``, one result line each."""
    lines = []
    for count, vectors, _ in fx.tables():
        if design.counts == "mode":
            mb = 1 if count == "lzc" else 0
            if mode_bit is not None and mode_bit != mb:
                continue
        elif design.counts != count:
            continue
        else:
            mb = None
        for v in vectors:
            r = sim.evaluate_vector(design, v.n, v.word, mb)
            flag = "" if v.decimal_consistent else f"\tnote=published decimal {v.decimal} differs from bit pattern"
            status = "pass" if r.passed and r.gamma == v.expected else "fail"
            lines.append(f"vector table={count}\tn={v.n}\tbits={v.bits}\tgamma={r.gamma}"
                         f"\tpublished={v.expected}\tstatus={status}{flag}")
    return lines


# -- commands ---------------------------------------------------------------------------------

def cmd_generate(args) -> int:
    design = _design(args.design)
    m = _width(design, args.m, args.pad)
    c = gen.build(design, m, **_build_options(args, design))
    policy = _policy(args)
    expanded = to_clifford_t(c, policy)
    t_count, t_depth = an.t_metrics(expanded)
    counts = Counter(g.kind.value for g in c.gates)
    header = [f"# design={design.value} m={m} policy={policy}",
              "# gates " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())),
              f"# expanded t_count={t_count} t_depth={t_depth}"]
    body = dumps(expanded if args.expanded else c)
    _write("\n".join(header) + "\n" + body, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    design = _design(args.design)
    if args.vector is not None:
        if design.counts == "mode" and args.mode_bit is None:
            raise UsageError("reconfigurable design needs --mode-bit 0 or 1")
        if not 0 <= args.vector < (1 << args.m):
            raise UsageError(f"--vector {args.vector} does not fit in {args.m} bits")
        _width(design, args.m, pad=True)
        mb = args.mode_bit if design.counts == "mode" else None
        r = sim.evaluate_vector(design, args.m, args.vector, mb)
        _write(r.to_text() + "\n", args.out)
        return EXIT_OK if r.passed else EXIT_FAIL
    m_native = _width(design, args.m, args.pad)
    mode = "exhaustive" if args.exhaustive else ("sample" if args.samples else "auto")
    if args.exhaustive and args.m > 24:
        raise UsageError("--exhaustive is limited to m <= 24")
    mode_bits = None if args.mode_bit is None else (args.mode_bit,)
    report = sim.exhaustive_verify(design, args.m, mode=mode, n_samples=args.samples or 10_000,
                                   seed=args.seed, mode_bits=mode_bits, pad=m_native != args.m,
                                   circuit=gen.build(design, m_native, **_build_options(args, design)))
    lines = [report.to_text().rstrip("\n")]
    vector_lines = [] if args.no_vectors else _vector_rows(design, args.mode_bit)
    lines += vector_lines
    _write("\n".join(lines) + "\n", args.out)
    ok = report.passed and all("status=pass" in line for line in vector_lines)
    return EXIT_OK if ok else EXIT_FAIL


def _report_and_rows(args):
    design = _design(args.design)
    m = _width(design, args.m, False)
    c = gen.build(design, m, **_build_options(args, design))
    report = an.analyze(c, _policy(args))
    return report, an.compare(report)


def _render_rows(rows, fmt: str) -> str:
    return an.rows_to_records(rows) if fmt == "records" else an.format_rows(rows)


def cmd_analyze(args) -> int:
    report, rows = _report_and_rows(args)
    _write(report.to_text() + "\n" + _render_rows(rows, args.format), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    _, rows = _report_and_rows(args)
    text = _render_rows(rows, args.format)
    failures = an.strict_failures(rows)
    if args.strict and failures:
        text += "".join(f"strict failure: {r.metric} ({r.source}) generated={r.generated} published={r.published}\n"
                        for r in failures)
    _write(text, args.out)
    return EXIT_FAIL if args.strict and failures else EXIT_OK


def cmd_emit(args) -> int:
    design = _design(args.design)
    m = _width(design, args.m, args.pad)
    c = gen.build(design, m, **_build_options(args, design))
    if args.format == "qasm":
        text = emit_qasm(c, _policy(args), expand_ccx=args.expand_ccx)
    else:
        text = dumps(to_clifford_t(c, _policy(args)) if args.expanded else c)
    _write(text, args.out)
    return EXIT_OK


SWEEP_DESIGNS = ("ta-op-qlzc", "ta-op-pqlzc", "fo-ta-op-pqlzc")
TABLE_CELLS = (("4-qubit", ((gen.Design.P_OP_4QLZC, 4), (gen.Design.TA_P_OP_4QLZC, 4), (gen.Design.TA_OP_QLZC, 4))),
               ("8-qubit", ((gen.Design.TA_OP_QLZC, 8), (gen.Design.TA_OP_PQLZC, 8), (gen.Design.FO_TA_OP_PQLZC, 8))))


def cmd_sweep(args) -> int:
    designs = [_design(d) for d in args.designs.split(",")]
    try:
        widths = [int(v) for v in args.m.split(",")]
    except ValueError:
        raise UsageError(f"--m expects a comma-separated list of integers, got {args.m!r}") from None
    policy = _policy(args)
    out = []
    failed = False
    for title, cells in TABLE_CELLS:
        out.append(f"== {title} ==")
        rows = []
        for design, m in cells:
            rows += an.compare(an.analyze(gen.build(design, m), policy))
        out.append(an.format_rows(rows))
    out.append("== scaling ==")
    rows = []
    verify_lines = []
    for design in designs:
        for m in widths:
            if design.parallel and not gen.is_parallel_width(m):
                continue
            c = gen.build(design, m)
            report = an.analyze(c, policy)
            rows += [r for r in an.compare(report) if r.source in ("scaling", "none")]
            v = sim.exhaustive_verify(design, m, n_samples=args.samples, seed=args.seed, circuit=c)
            failed |= not v.passed
            verify_lines.append(f"verify design={design.value} m={m} mode={v.mode} cases={v.cases} "
                                f"failures={v.failures}")
    out.append(an.format_rows(rows))
    out.extend(verify_lines)
    out.append("")
    for title, (count, vectors, families) in zip(("zero-count vectors", "one-count vectors"), fx.tables()):
        out.append(f"== {title} ({count}) ==")
        header = ["n", "bits", "published"] + [d if mb is None else f"{d}(mode={mb})" for d, mb in families]
        table = [header]
        for v in vectors:
            line = [str(v.n), v.bits, str(v.expected)]
            for d, mb in families:
                r = sim.evaluate_vector(d, v.n, v.word, mb)
                ok = r.passed and r.gamma == v.expected
                failed |= not ok
                line.append(str(r.gamma) + ("" if ok else "!"))
            table.append(line)
        widths_ = [max(len(row[i]) for row in table) for i in range(len(header))]
        out += ["  ".join(c.ljust(w) for c, w in zip(row, widths_)).rstrip() for row in table]
        out += [f"note: n={v.n} published decimal {v.decimal} differs from its bit pattern"
                for v in vectors if not v.decimal_consistent]
        out.append("")
    out.append(f"status={'fail' if failed else 'pass'}")
    _write("\n".join(out) + "\n", args.out)
    return EXIT_FAIL if failed else EXIT_OK


# -- parser -----------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, *, pad: bool = True) -> None:
    p.add_argument("--design", required=True, help="design id, e.g. ta-op-qlzc, fo-pqlzc, reconfigurable")
    p.add_argument("--m", type=int, required=True, help="input width")
    if pad:
        p.add_argument("--pad", action="store_true", help="pad a non-native width up to the design's native width")
    p.add_argument("--core", choices=("sequential", "parallel", "fo"), help="reconfigurable design core")
    _policy_flags(p)
    p.add_argument("--out", help="write to this file instead of stdout")


def _policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ccx", choices=("amy", "jones"), default="amy", help="Toffoli expansion")
    p.add_argument("--mcx", choices=("ladder", "ladder-tand"), default="ladder", help="MCX lowering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlzoc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a circuit in the interchange format")
    _common(p)
    p.add_argument("--expanded", action="store_true", help="write the Clifford+T expansion")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a design against the reference counts")
    _common(p)
    p.add_argument("--exhaustive", action="store_true", help="sweep all 2^m inputs")
    p.add_argument("--samples", type=int, default=0, help="stratified sample size")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--vector", type=int, help="check a single input word")
    p.add_argument("--mode-bit", type=int, choices=(0, 1), help="reconfigurable mode: 1 zeros, 0 ones")
    p.add_argument("--no-vectors", action="store_true", help="skip the built-in table vectors")
    p.set_defaults(func=cmd_verify)

    for name, func, help_ in (("analyze", cmd_analyze, "resource report plus comparison rows"),
                              ("compare", cmd_compare, "comparison rows against published figures")):
        p = sub.add_parser(name, help=help_)
        _common(p, pad=False)
        p.add_argument("--format", choices=("table", "records"), default="table")
        if name == "compare":
            p.add_argument("--strict", action="store_true", help="exit 1 on a mismatch in an asserted cell")
        p.set_defaults(func=func)

    p = sub.add_parser("emit", help="write interchange or OpenQASM 3 style text")
    _common(p)
    p.add_argument("--format", choices=("interchange", "qasm"), default="interchange")
    p.add_argument("--expanded", action="store_true", help="interchange: write the Clifford+T expansion")
    p.add_argument("--expand-ccx", action="store_true", help="qasm: expand Toffolis too")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("sweep", help="consolidated report over designs and widths")
    p.add_argument("--designs", default=",".join(SWEEP_DESIGNS))
    p.add_argument("--m", default="4,8,16,32", help="comma-separated widths")
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _policy_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"qlzoc {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CircuitError, ValueError) as e:
        print(f"qlzoc {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
