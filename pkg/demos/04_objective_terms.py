"""The nine objective terms on a hand-built layout."""

from technicgen.catalog import default_catalog
from technicgen.connect import Connector
from technicgen.fixtures import square_sketch
from technicgen.layout import Layout
from technicgen.objective import ObjectiveWeights, eval_full, eval_simplified
from technicgen.orientation import OrientationAssignment, decompose_components
from technicgen.placements import index_placements
from technicgen.sketch import build_guiding_graph, parse_sketch

catalog = default_catalog()
graph = build_guiding_graph(parse_sketch(square_sketch(4)))
assignment = OrientationAssignment(axes=tuple("Z" for _ in range(graph.node_count)))
components = decompose_components(graph, assignment)
index = index_placements(components, graph, catalog, assignment)

layout = Layout(graph, index)
sides = [p for p in index.placements if p.length == 5 and p.kind == "beam"]
for i, placement in enumerate(sides[:4]):
    layout.add_beam(placement, i % 2)  # alternate layers around the ring

weights = ObjectiveWeights.preset("simple")
f0 = eval_simplified(layout, graph, weights)
f = eval_full(layout, graph, weights, Connector(graph, catalog))
print("terms (simplified | full):")
for key in ("f_dev", "f_cpt", "f_tbl", "f_phr", "f_col", "f_gap", "f_coh", "f_rgd"):
    print(f"  {key}: {getattr(f0, key):.4f} | {getattr(f, key):.4f}")
print(f"totals: F0={f0.total:.4f}  F={f.total:.4f}")
print(f"counters: gaps={f.n_gap} collisions={f.n_col} failures={f.n_cfail} "
      f"rigid subsets={f.rigid_subsets} rho_bar={f.rho_bar:.3f}")
