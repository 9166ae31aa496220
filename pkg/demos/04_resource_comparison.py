"""
Resource report and published figures
=====================================

``analyze`` expands a design and measures it; ``compare`` lines the numbers
up against the 4- and 8-qubit tables and the asymptotic cost model.
"""
from qlzoc import analyzer as an

report = an.analyze_design("fo-ta-op-pqlzc", 8)
print(report.to_text())
print(an.format_rows(an.compare(report)))

# the sequential design scales as 4m-4 T gates at T-depth m
for m in (4, 8, 16, 32, 64):
    r = an.analyze_design("ta-op-qlzc", m)
    print(f"m={m:2d}  T-count={r.t_count:3d} (4m-4={4 * m - 4:3d})  T-depth={r.t_depth}")

# the parallel design with fan-out reaches T-depth 3 lg m - 2
for m in (8, 16, 32, 64):
    r = an.analyze_design("fo-ta-op-pqlzc", m)
    print(f"m={m:2d}  T-depth={r.t_depth}  width={r.width_total}  garbage={r.ancilla_garbage}")
