"""From sketch document to guiding graph: nodes one unit apart, unit edges."""

from technicgen import build_guiding_graph, parse_sketch, validate_sketch
from technicgen.fixtures import kite_sketch, square_sketch

sketch = parse_sketch(square_sketch(9))
graph = build_guiding_graph(sketch)
print(f"square(9): {graph.node_count} nodes, {graph.edge_count} edges, "
      f"{sum(1 for n in graph.nodes if n.junction)} junctions")

kite = parse_sketch(kite_sketch())
print(f"kite diagnostics: {validate_sketch(kite) or 'clean'}")
kg = build_guiding_graph(kite)
diagonal_nodes = [n.pos for n in kg.nodes if n.pos[0] % 1 != 0 or n.pos[1] % 1 != 0]
print(f"kite: {kg.node_count} nodes, {kg.edge_count} edges; "
      f"{len(diagonal_nodes)} off-lattice nodes on the Pythagorean diagonals")

bad = parse_sketch({"segments": [{"id": "d", "a": [0, 0, 0], "b": [1, 1, 0]}]})
for diag in validate_sketch(bad):
    print(f"rejected: [{diag.rule}] {diag.message}")
