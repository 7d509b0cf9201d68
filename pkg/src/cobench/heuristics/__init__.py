"""Classical baselines and exact small-instance oracles.

solve() dispatches by (problem kind, method name). Method names are stable
strings used by the CLI and the evaluation harness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from ..problems.types import Instance, ObjectiveValue, ProblemKind, Solution
from ..verify import objective
from .aco import AcoConfig, aco_solve
from .brute_force import (
    DEFAULT_BUDGET,
    BruteForceBudget,
    BudgetExceededError,
    brute_force,
)
from .graphs import (
    mis_degree_add,
    mis_greedy_min_degree,
    mvc_approx_matching,
    mvc_degree_removal,
    mvc_greedy_max_degree,
)
from .routing import (
    cvrp_savings,
    cvrp_sweep,
    op_greedy,
    op_greedy_insertion,
    op_tsili,
    tsp_farthest_insertion,
    tsp_nearest_neighbor,
)
from .scheduling import jssp_dispatch, pfsp_neh, pfsp_palmer

Solver = Callable[..., Solution]


def _aco(inst: Instance, seed: Optional[int] = None, **params) -> Solution:
    from dataclasses import replace

    base = AcoConfig.default_for(inst.kind)
    base = replace(base, seed=0 if seed is None else seed, **params)
    return aco_solve(inst, base)


def _tsili(inst: Instance, seed: Optional[int] = None, **params) -> Solution:
    return op_tsili(inst, seed=seed, **params)


_REGISTRY: Dict[Tuple[ProblemKind, str], Solver] = {
    (ProblemKind.TSP, "nn"): lambda inst, **kw: tsp_nearest_neighbor(inst, **kw),
    (ProblemKind.TSP, "fi"): lambda inst, **kw: tsp_farthest_insertion(inst, **kw),
    (ProblemKind.TSP, "aco"): _aco,
    (ProblemKind.OP, "greedy"): lambda inst, **kw: op_greedy(inst, **kw),
    (ProblemKind.OP, "greedy_insertion"): lambda inst, **kw: op_greedy_insertion(inst, **kw),
    (ProblemKind.OP, "tsili"): _tsili,
    (ProblemKind.OP, "aco"): _aco,
    (ProblemKind.CVRP, "sweep"): lambda inst, **kw: cvrp_sweep(inst, **kw),
    (ProblemKind.CVRP, "savings"): lambda inst, **kw: cvrp_savings(inst, **kw),
    (ProblemKind.CVRP, "aco"): _aco,
    (ProblemKind.MIS, "greedy"): lambda inst, **kw: mis_greedy_min_degree(inst, **kw),
    (ProblemKind.MIS, "degree"): lambda inst, **kw: mis_degree_add(inst, **kw),
    (ProblemKind.MVC, "approx"): lambda inst, **kw: mvc_approx_matching(inst, **kw),
    (ProblemKind.MVC, "greedy"): lambda inst, **kw: mvc_greedy_max_degree(inst, **kw),
    (ProblemKind.MVC, "degree"): lambda inst, **kw: mvc_degree_removal(inst, **kw),
    (ProblemKind.PFSP, "palmer"): lambda inst, **kw: pfsp_palmer(inst, **kw),
    (ProblemKind.PFSP, "neh"): lambda inst, **kw: pfsp_neh(inst, **kw),
    (ProblemKind.JSSP, "spt"): lambda inst, **kw: jssp_dispatch(inst, rule="spt", **kw),
    (ProblemKind.JSSP, "fifo"): lambda inst, **kw: jssp_dispatch(inst, rule="fifo", **kw),
    (ProblemKind.JSSP, "atc"): lambda inst, **kw: jssp_dispatch(inst, rule="atc", **kw),
}

METHODS_BY_KIND: Dict[ProblemKind, Tuple[str, ...]] = {
    ProblemKind.TSP: ("nn", "fi", "aco"),
    ProblemKind.OP: ("greedy", "greedy_insertion", "tsili", "aco"),
    ProblemKind.CVRP: ("sweep", "savings", "aco"),
    ProblemKind.MIS: ("greedy", "degree"),
    ProblemKind.MVC: ("approx", "greedy", "degree"),
    ProblemKind.PFSP: ("palmer", "neh"),
    ProblemKind.JSSP: ("spt", "fifo", "atc"),
}

# Methods whose behavior depends on a random seed.
SEEDED_METHODS = {"aco", "tsili"}


@dataclass(frozen=True)
class SolveResult:
    solution: Solution
    objective: ObjectiveValue
    method: str


def solve(
    inst: Instance, method: str, seed: Optional[int] = None, **params
) -> SolveResult:
    """Run a named baseline on an instance and score its solution."""
    key = (inst.kind, method)
    if key not in _REGISTRY:
        known = ", ".join(METHODS_BY_KIND.get(inst.kind, ()))
        raise ValueError(
            f"unknown method {method!r} for {inst.kind.value} (known: {known})"
        )
    fn = _REGISTRY[key]
    if method in SEEDED_METHODS:
        sol = fn(inst, seed=seed, **params)
    else:
        sol = fn(inst, **params)
    return SolveResult(solution=sol, objective=objective(inst, sol), method=method)


__all__ = [
    "AcoConfig",
    "BruteForceBudget",
    "BudgetExceededError",
    "DEFAULT_BUDGET",
    "METHODS_BY_KIND",
    "SEEDED_METHODS",
    "SolveResult",
    "aco_solve",
    "brute_force",
    "cvrp_savings",
    "cvrp_sweep",
    "jssp_dispatch",
    "mis_degree_add",
    "mis_greedy_min_degree",
    "mvc_approx_matching",
    "mvc_degree_removal",
    "mvc_greedy_max_degree",
    "op_greedy",
    "op_greedy_insertion",
    "op_tsili",
    "pfsp_neh",
    "pfsp_palmer",
    "solve",
    "tsp_farthest_insertion",
    "tsp_nearest_neighbor",
]
