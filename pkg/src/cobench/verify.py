"""Feasibility checking and objective computation.

check() never raises on bad candidate solutions: structural mismatches come
back as an all-false report. objective() is stricter and raises ValueError
when the solution is too malformed to score (out-of-range ids, deadlocked
schedules), since callers only score candidates that passed check().
"""

from __future__ import annotations

import numbers
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .problems.types import (
    GraphInstance,
    Instance,
    JobOrder,
    MachineSchedules,
    ObjectiveValue,
    ProblemKind,
    Route,
    RouteSet,
    RoutingInstance,
    SchedulingInstance,
    Solution,
    SOLUTION_TYPE_BY_KIND,
    SENSE_BY_KIND,
    VertexSet,
    euclid,
)

# Absolute tolerance for comparing route lengths and loads against limits.
TOLERANCE = 1e-6

# Ordered constraint names per kind; the order indexes the reward weights.
CONSTRAINT_NAMES: Mapping[ProblemKind, Tuple[str, ...]] = {
    ProblemKind.TSP: ("visits_each_node_once", "returns_to_start"),
    ProblemKind.OP: ("starts_at_depot", "visits_nodes_at_most_once", "within_distance_limit"),
    ProblemKind.CVRP: ("routes_start_end_at_depot", "customers_exactly_once", "capacity_respected"),
    ProblemKind.MIS: ("independent_set",),
    ProblemKind.MVC: ("edges_covered",),
    ProblemKind.PFSP: ("job_permutation",),
    ProblemKind.JSSP: ("all_jobs_scheduled", "no_machine_conflict", "precedence_respected"),
}


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of checking one candidate against one instance.

    zeta is the format/structure gate: False means the solution did not even
    match the instance's solution shape. constraints are (name, ok) pairs in
    the canonical order; margins are (name, slack) pairs where slack < 0
    means violated (OP distance budget, CVRP tightest vehicle).
    """

    zeta: bool
    constraints: Tuple[Tuple[str, bool], ...]
    margins: Tuple[Tuple[str, float], ...] = ()

    @property
    def feasible(self) -> bool:
        return self.zeta and all(ok for _, ok in self.constraints)

    def constraint_flags(self) -> Tuple[bool, ...]:
        return tuple(ok for _, ok in self.constraints)

    def to_dict(self) -> dict:
        return {
            "zeta": self.zeta,
            "constraints": [[name, ok] for name, ok in self.constraints],
            "margins": [[name, value] for name, value in self.margins],
            "feasible": self.feasible,
        }


def _failed_report(kind: ProblemKind) -> FeasibilityReport:
    names = CONSTRAINT_NAMES[kind]
    return FeasibilityReport(zeta=False, constraints=tuple((n, False) for n in names))


def route_length(coords, nodes) -> float:
    """Sum of Euclidean edge lengths along a node sequence (open path)."""
    total = 0.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        total += euclid(coords[a], coords[b])
    return total


def check(inst: Instance, sol: Solution) -> FeasibilityReport:
    """Evaluate every constraint of `inst` against `sol`. Never raises."""
    if not isinstance(sol, SOLUTION_TYPE_BY_KIND[inst.kind]):
        return _failed_report(inst.kind)
    checker = _CHECKERS[inst.kind]
    return checker(inst.payload, sol)


def objective(inst: Instance, sol: Solution) -> ObjectiveValue:
    """Compute the objective value of `sol`, feasible or not.

    Raises ValueError if the solution is structurally unscoreable
    (wrong shape, out-of-range ids, or a deadlocked JSSP schedule).
    """
    if not isinstance(sol, SOLUTION_TYPE_BY_KIND[inst.kind]):
        raise ValueError(
            f"{inst.kind.value} expects {SOLUTION_TYPE_BY_KIND[inst.kind].__name__}, "
            f"got {type(sol).__name__}"
        )
    value = _OBJECTIVES[inst.kind](inst.payload, sol)
    return ObjectiveValue(value=value, sense=SENSE_BY_KIND[inst.kind])


# ---------------------------------------------------------------------------
# Routing


def _ids_in_range(nodes, n: int) -> bool:
    # numpy integers are fine; floats and everything else are not ids.
    return all(isinstance(v, numbers.Integral) and 0 <= v < n for v in nodes)


def _check_tsp(p: RoutingInstance, sol: Route) -> FeasibilityReport:
    nodes = sol.nodes
    n = p.n
    closed = len(nodes) >= 2 and nodes[0] == nodes[-1]
    body = nodes[:-1] if closed else nodes
    in_range = _ids_in_range(nodes, n)
    visits_once = in_range and Counter(body) == Counter(range(n))
    names = CONSTRAINT_NAMES[ProblemKind.TSP]
    return FeasibilityReport(
        zeta=True,
        constraints=((names[0], bool(visits_once)), (names[1], bool(closed))),
    )


def _tsp_objective(p: RoutingInstance, sol: Route) -> float:
    if not sol.nodes or not _ids_in_range(sol.nodes, p.n):
        raise ValueError("route has out-of-range or missing nodes")
    return route_length(p.coords, sol.nodes)


def _check_op(p: RoutingInstance, sol: Route) -> FeasibilityReport:
    nodes = sol.nodes
    n = p.n
    depot = p.depot_index
    names = CONSTRAINT_NAMES[ProblemKind.OP]
    starts = len(nodes) >= 1 and nodes[0] == depot
    in_range = _ids_in_range(nodes, n)
    # A single trailing return to the depot is allowed and not a revisit.
    core = nodes[:-1] if (len(nodes) >= 2 and nodes[-1] == nodes[0]) else nodes
    once = in_range and len(set(core)) == len(core)
    margins: Tuple[Tuple[str, float], ...] = ()
    if in_range and len(nodes) >= 1:
        length = route_length(p.coords, nodes)
        within = length <= p.distance_limit + TOLERANCE
        margins = (("distance_limit", p.distance_limit - length),)
    else:
        within = False
    return FeasibilityReport(
        zeta=True,
        constraints=(
            (names[0], bool(starts)),
            (names[1], bool(once)),
            (names[2], bool(within)),
        ),
        margins=margins,
    )


def _op_objective(p: RoutingInstance, sol: Route) -> float:
    if not sol.nodes or not _ids_in_range(sol.nodes, p.n):
        raise ValueError("route has out-of-range or missing nodes")
    return float(sum(p.prizes[v] for v in set(sol.nodes)))


def _check_cvrp(p: RoutingInstance, sol: RouteSet) -> FeasibilityReport:
    n = p.n
    depot = p.depot_index
    names = CONSTRAINT_NAMES[ProblemKind.CVRP]
    routes = [r for r in sol.routes if len(r) > 0]
    in_range = all(_ids_in_range(r, n) for r in routes)

    nonempty = [r for r in routes if any(v != depot for v in r)]
    endpoints_ok = bool(routes) and all(
        len(r) >= 2 and r[0] == depot and r[-1] == depot for r in nonempty
    )
    if not routes:
        endpoints_ok = False

    visits = Counter(v for r in routes for v in r if v != depot) if in_range else Counter()
    customers = set(range(n)) - {depot}
    exactly_once = in_range and visits == Counter(customers)

    margins: Tuple[Tuple[str, float], ...] = ()
    if in_range:
        loads = [sum(p.demands[v] for v in r if v != depot) for r in nonempty]
        capacity_ok = all(load <= p.capacity + TOLERANCE for load in loads)
        slack = min((p.capacity - load for load in loads), default=float(p.capacity))
        margins = (("capacity", float(slack)),)
    else:
        capacity_ok = False
    return FeasibilityReport(
        zeta=True,
        constraints=(
            (names[0], bool(endpoints_ok)),
            (names[1], bool(exactly_once)),
            (names[2], bool(capacity_ok)),
        ),
        margins=margins,
    )


def _cvrp_objective(p: RoutingInstance, sol: RouteSet) -> float:
    total = 0.0
    for r in sol.routes:
        if not _ids_in_range(r, p.n):
            raise ValueError("route has out-of-range nodes")
        total += route_length(p.coords, r)
    return total


# ---------------------------------------------------------------------------
# Graphs


def _check_mis(p: GraphInstance, sol: VertexSet) -> FeasibilityReport:
    names = CONSTRAINT_NAMES[ProblemKind.MIS]
    chosen = sol.vertices
    in_range = all(0 <= v < p.num_nodes for v in chosen)
    independent = in_range and not any(u in chosen and v in chosen for u, v in p.edges)
    return FeasibilityReport(zeta=True, constraints=((names[0], bool(independent)),))


def _check_mvc(p: GraphInstance, sol: VertexSet) -> FeasibilityReport:
    names = CONSTRAINT_NAMES[ProblemKind.MVC]
    chosen = sol.vertices
    in_range = all(0 <= v < p.num_nodes for v in chosen)
    covered = in_range and all(u in chosen or v in chosen for u, v in p.edges)
    return FeasibilityReport(zeta=True, constraints=((names[0], bool(covered)),))


def _set_objective(p: GraphInstance, sol: VertexSet) -> float:
    if any(not (0 <= v < p.num_nodes) for v in sol.vertices):
        raise ValueError("vertex id out of range")
    return float(len(sol.vertices))


# ---------------------------------------------------------------------------
# Scheduling


def pfsp_makespan(ptimes, order) -> float:
    """Makespan of a permutation flow shop: jobs in `order` flow through
    machines 0..M-1 with C[m][k] = max(C[m][k-1], C[m-1][k]) + p."""
    m = len(ptimes[0])
    completion = [0.0] * m
    for j in order:
        prev_machine = 0.0
        for i in range(m):
            start = max(completion[i], prev_machine)
            completion[i] = start + ptimes[j][i]
            prev_machine = completion[i]
    return completion[-1]


def _check_pfsp(p: SchedulingInstance, sol: JobOrder) -> FeasibilityReport:
    names = CONSTRAINT_NAMES[ProblemKind.PFSP]
    perm = sorted(sol.jobs) == list(range(p.num_jobs))
    return FeasibilityReport(zeta=True, constraints=((names[0], bool(perm)),))


def _pfsp_objective(p: SchedulingInstance, sol: JobOrder) -> float:
    if not sol.jobs or not _ids_in_range(sol.jobs, p.num_jobs):
        raise ValueError("job order has out-of-range or missing jobs")
    return pfsp_makespan(p.ptimes, sol.jobs)


def jssp_start_times(
    p: SchedulingInstance, sol: MachineSchedules
) -> Optional[Dict[Tuple[int, int], float]]:
    """Semi-active decode: earliest start per operation (job j, op index i)
    respecting job precedence and the per-machine job sequences.

    Returns None when the combined order is cyclic (deadlock).
    """
    jobs, machines = p.num_jobs, p.num_machines
    # op_of[j][m]: the index of job j's operation that runs on machine m.
    op_of: List[Dict[int, int]] = [dict() for _ in range(jobs)]
    for j in range(jobs):
        for i, m in enumerate(p.machine_order[j]):
            op_of[j][m] = i

    # Successor lists over operation nodes (j, i).
    succs: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    indeg: Dict[Tuple[int, int], int] = {}
    for j in range(jobs):
        for i in range(machines):
            succs[(j, i)] = []
            indeg[(j, i)] = 0
    for j in range(jobs):
        for i in range(1, machines):
            succs[(j, i - 1)].append((j, i))
            indeg[(j, i)] += 1
    for m, seq in enumerate(sol.sequences):
        for a, b in zip(seq[:-1], seq[1:]):
            u = (a, op_of[a][m])
            v = (b, op_of[b][m])
            succs[u].append(v)
            indeg[v] += 1

    start: Dict[Tuple[int, int], float] = {}
    ready = [op for op, d in indeg.items() if d == 0]
    ready.sort()
    processed = 0
    earliest: Dict[Tuple[int, int], float] = {op: 0.0 for op in indeg}
    while ready:
        op = ready.pop()
        j, i = op
        start[op] = earliest[op]
        finish = start[op] + p.ptimes[j][i]
        processed += 1
        for nxt in succs[op]:
            earliest[nxt] = max(earliest[nxt], finish)
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    if processed != jobs * machines:
        return None  # cycle between job precedence and machine sequences
    return start


def _check_jssp(p: SchedulingInstance, sol: MachineSchedules) -> FeasibilityReport:
    names = CONSTRAINT_NAMES[ProblemKind.JSSP]
    jobs, machines = p.num_jobs, p.num_machines
    all_scheduled = len(sol.sequences) == machines and all(
        sorted(seq) == list(range(jobs)) for seq in sol.sequences
    )
    if not all_scheduled:
        # Without a full, valid sequence set the decode is undefined.
        return FeasibilityReport(
            zeta=True,
            constraints=((names[0], False), (names[1], False), (names[2], False)),
        )
    start = jssp_start_times(p, sol)
    if start is None:
        return FeasibilityReport(
            zeta=True,
            constraints=((names[0], True), (names[1], False), (names[2], False)),
        )
    # Semi-active decode already enforces both, but verify outright.
    no_conflict = True
    for m, seq in enumerate(sol.sequences):
        t = -1.0
        for j in seq:
            i = None
            for k, mm in enumerate(p.machine_order[j]):
                if mm == m:
                    i = k
                    break
            s = start[(j, i)]
            if s < t - TOLERANCE:
                no_conflict = False
            t = max(t, s + p.ptimes[j][i])
    precedence = all(
        start[(j, i)] >= start[(j, i - 1)] + p.ptimes[j][i - 1] - TOLERANCE
        for j in range(jobs)
        for i in range(1, machines)
    )
    return FeasibilityReport(
        zeta=True,
        constraints=(
            (names[0], True),
            (names[1], bool(no_conflict)),
            (names[2], bool(precedence)),
        ),
    )


def _jssp_objective(p: SchedulingInstance, sol: MachineSchedules) -> float:
    jobs, machines = p.num_jobs, p.num_machines
    valid = len(sol.sequences) == machines and all(
        sorted(seq) == list(range(jobs)) for seq in sol.sequences
    )
    if not valid:
        raise ValueError("machine sequences are not permutations of the jobs")
    start = jssp_start_times(p, sol)
    if start is None:
        raise ValueError("schedule deadlocks (cyclic machine/job order)")
    return max(start[(j, i)] + p.ptimes[j][i] for j in range(jobs) for i in range(machines))


_CHECKERS = {
    ProblemKind.TSP: _check_tsp,
    ProblemKind.OP: _check_op,
    ProblemKind.CVRP: _check_cvrp,
    ProblemKind.MIS: _check_mis,
    ProblemKind.MVC: _check_mvc,
    ProblemKind.PFSP: _check_pfsp,
    ProblemKind.JSSP: _check_jssp,
}

_OBJECTIVES = {
    ProblemKind.TSP: _tsp_objective,
    ProblemKind.OP: _op_objective,
    ProblemKind.CVRP: _cvrp_objective,
    ProblemKind.MIS: _set_objective,
    ProblemKind.MVC: _set_objective,
    ProblemKind.PFSP: _pfsp_objective,
    ProblemKind.JSSP: _jssp_objective,
}
