"""Stage one: hole-orientation annealing and component decomposition."""

from technicgen.fixtures import fixture_sketch
from technicgen.orientation import (
    SAParams,
    decompose_components,
    orientation_objective,
    solve_orientations,
)
from technicgen.sketch import build_guiding_graph, expand_symmetry

for name in ("cube", "lifter", "plane"):
    sketch = fixture_sketch(name)
    graph = build_guiding_graph(sketch)
    symmetry = expand_symmetry(sketch, graph)
    assignment = solve_orientations(graph, symmetry, SAParams(rng_seed=0))
    comps = decompose_components(graph, assignment)
    print(f"{name:>7}: |V|={graph.node_count:<4} "
          f"objective={orientation_objective(assignment, graph):<3} "
          f"components={len(comps)}")
    for c in comps[:4]:
        print(f"         comp {c.id}: axis {c.axis}, {len(c.nodes)} nodes")
