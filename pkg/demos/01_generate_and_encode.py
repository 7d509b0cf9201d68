"""Generate instances and turn them into prompts.

Walks the first stage of the pipeline: seeded instance generation for a few
problem kinds, the text encoding an LLM would see, and the save/load round
trip used by every batch command.
"""

import tempfile
from pathlib import Path

from cobench import GenConfig, ProblemKind, encode, gen_instance, render_prompt
from cobench.problems.io import load_instance, save_instance
from cobench.problems.types import CLUSTERED

# Same seed, same instance: generation is a pure function of (kind, config).
cfg = GenConfig(seed=42, size_range=(8, 8))
tsp = gen_instance(ProblemKind.TSP, cfg)
again = gen_instance(ProblemKind.TSP, cfg)
print(f"generated {tsp.id}: {tsp.payload.n} cities, reproducible={tsp == again}")

# Out-of-distribution coordinates come from the distribution knob.
clustered = gen_instance(ProblemKind.TSP, GenConfig(seed=42, size_range=(30, 30), distribution=CLUSTERED))
print(f"clustered variant {clustered.id}: meta={dict(clustered.meta)}")

# Every kind encodes to instruction + input + an expected output grammar.
for kind in (ProblemKind.TSP, ProblemKind.MIS, ProblemKind.JSSP):
    inst = gen_instance(kind, GenConfig(seed=7, size_range=(6, 6)))
    tai = encode(inst)
    print(f"\n--- {kind.value} instruction ---")
    print(tai.instruction[:180] + ("..." if len(tai.instruction) > 180 else ""))

# The full prompt is what gets POSTed to an endpoint.
prompt = render_prompt(encode(tsp))
print(f"\nfull prompt is {len(prompt)} chars; first lines:")
print("\n".join(prompt.splitlines()[:4]))

# Instances persist as JSON and survive the round trip bit for bit.
with tempfile.TemporaryDirectory() as tmp:
    path = save_instance(tsp, Path(tmp) / f"{tsp.id}.json")
    loaded = load_instance(path)
    print(f"\nsaved to {path.name}, round-trip equal: {loaded == tsp}")
