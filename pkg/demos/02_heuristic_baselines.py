"""Run every classical baseline on one instance per problem.

Shows the solver registry, the exact oracle where the instance is small
enough, and what happens when it is not (a budget refusal, never a silent
heuristic answer).
"""

from cobench import GenConfig, ProblemKind, gen_instance
from cobench.heuristics import (
    METHODS_BY_KIND,
    BudgetExceededError,
    brute_force,
    solve,
)

SIZES = {
    ProblemKind.TSP: 9,
    ProblemKind.OP: 8,
    ProblemKind.CVRP: 7,
    ProblemKind.MIS: 14,
    ProblemKind.MVC: 14,
    ProblemKind.PFSP: 6,
    ProblemKind.JSSP: 3,
}

for kind in ProblemKind:
    inst = gen_instance(kind, GenConfig(seed=3, size_range=(SIZES[kind], SIZES[kind])))
    rows = []
    for method in METHODS_BY_KIND[kind]:
        # ACO is stochastic; a seed pins it. Deterministic methods ignore it.
        res = solve(inst, method, seed=0)
        rows.append((method, res.objective.value))
    _, best = brute_force(inst)
    rows.append(("exact", best.value))
    line = "  ".join(f"{m}={v:.1f}" for m, v in rows)
    print(f"{kind.value:5s} ({inst.id}): {line}")

# Exhaustive search refuses instances beyond its budget instead of degrading.
big = gen_instance(ProblemKind.TSP, GenConfig(seed=1, size_range=(40, 40)))
try:
    brute_force(big)
except BudgetExceededError as err:
    print(f"\nexact search on {big.id}: {err}")
