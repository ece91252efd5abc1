"""Stage two: Algorithm-style annealing on the 2x2 grid."""

from technicgen.baselines import build_bench_index
from technicgen.engine import AnnealParams, refine
from technicgen.objective import ObjectiveWeights

graph, index, catalog = build_bench_index(2)
trace = []
result = refine(
    graph, index, ObjectiveWeights.preset("simple"),
    AnnealParams(r=0.999, rng_seed=0), catalog,
    progress=lambda stage, t, best, it: trace.append((it, stage, t, best)),
    trace_every=2000,
)
print(f"{result.iterations} iterations, objective switch at "
      f"{result.switch_iteration}")
for it, stage, t, best in trace:
    print(f"  iter {it:>6} [{stage:>10}] T={t:10.4f} best={best:9.4f}")
bd = result.breakdown
print(f"final: beams={len(result.layout.beams)} gaps={bd.n_gap} "
      f"collisions={bd.n_col} failures={bd.n_cfail} F={bd.total:.4f}")
print(f"connections: {len(result.plan.uses)} "
      f"(rho_bar={result.plan.rho_bar:.3f})")
