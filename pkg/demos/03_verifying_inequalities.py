"""Exact checks of the inequalities behind the lower bound.

Each checker returns a report with both sides, the slack and whether the
comparison was done in exact arithmetic.  A failing report would mean a bug.
"""
from dilates import (
    PointSet,
    ap,
    check_discbm,
    check_hdsums,
    check_pr_chain,
    check_projection_bound,
    count_by_alpha,
    kl_grid,
    random_ideal,
    theorem_trace,
)
from dilates.oracles import trace_passed

G = kl_grid(2, 2)
T = PointSet([(0, 0), (1, 0), (0, 1)])
for report in [check_discbm(ap(3), G), check_hdsums(T, T), check_pr_chain(ap(2)),
               check_projection_bound(PointSet([(a, b) for a in range(3) for b in range(2)]))]:
    print(report.to_text())
print()

hist, report = count_by_alpha(8)
print("index sets of [8] by longest run:", hist)
print(report.to_text())
print()

A = random_ideal(30, 3, seed=1)
print(f"full trace on a random ideal of size {len(A)}:")
reports = theorem_trace(A)
for r in reports:
    print("  ", r.to_text().splitlines()[0])
print("all passed:", trace_passed(reports))
