"""A small slice of the grid comparison (full runs: technicgen bench)."""

from technicgen.baselines import (
    build_bench_index, report_csv, run_ant_colony, run_greedy, run_ours,
    run_random,
)

results = []
for n in (1, 2):
    graph, index, catalog = build_bench_index(n)
    results.append(run_greedy(graph, index, n=n))
    results.append(run_ours(graph, index, catalog, seed=0, n=n, cooling_rate=0.995))
    if n == 1:
        results.append(run_random(graph, index, seed=0, n=n))
        results.append(run_ant_colony(graph, index, seed=0, n=n, ants=8,
                                      iterations=20))
print(report_csv(results))
