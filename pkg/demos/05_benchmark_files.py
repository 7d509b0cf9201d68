"""Load public benchmark formats instead of generated instances.

TSPLIB node-coordinate files and Taillard-style job shop files parse into the
same Instance type the generator produces, so everything downstream (encode,
solve, verify) works on them unchanged.
"""

from cobench import check, encode
from cobench.heuristics import solve
from cobench.problems.benchmarks import parse_taillard, parse_tsplib, write_taillard

TSPLIB_TEXT = """\
NAME: demo5
TYPE: TSP
COMMENT: five points on a unit-ish grid
DIMENSION: 5
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 100 0
3 100 100
4 0 100
5 50 50
EOF
"""

tsp = parse_tsplib(TSPLIB_TEXT)
res = solve(tsp, "fi")
print(f"TSPLIB {tsp.id}: n={tsp.payload.n}, fi tour {res.objective.value:.1f}, "
      f"feasible={check(tsp, res.solution).feasible}")

TAILLARD_TEXT = """\
Nb of jobs, Nb of Machines, Time seed, Machine seed, Upper bound, Lower bound
3 3 0 0 0 0
Times
10 20 30
15 10 20
20 30 10
Machines
1 2 3
2 1 3
3 2 1
"""

jssp = parse_taillard(TAILLARD_TEXT)
res = solve(jssp, "spt")
print(f"Taillard {jssp.id}: J={jssp.payload.num_jobs} M={jssp.payload.num_machines}, "
      f"spt makespan {res.objective.value:.0f}, feasible={check(jssp, res.solution).feasible}")

# The writer emits the same format back, so instances can be exchanged with
# other Taillard-consuming tools.
print("\nround-tripped Taillard file:")
print(write_taillard(jssp))

# Benchmark instances encode like any generated one.
tai = encode(tsp)
print(f"prompt instruction starts: {tai.instruction[:80]}...")
