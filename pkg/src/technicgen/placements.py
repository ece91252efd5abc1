"""Feasible beam placements per component, indexed by covered edge and node.

Placements are enumerated without a layer; the layer is picked when a beam is
inserted into a layout. Straight beams sit on runs of consecutive collinear
nodes inside one component, L-beams on pairs of perpendicular coplanar runs,
and the single-hole brick covers the lone interior node of a two-unit segment
whose orientation ended up parallel to it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import Catalog
from .geometry import Vec, parallel_axis, perpendicular_axes, quantize, vscale, vsub
from .orientation import Component, OrientationAssignment
from .sketch import GuidingGraph


@dataclass(frozen=True)
class BeamPlacement:
    id: int
    brick_id: str
    kind: str
    component: int
    nodes: tuple[int, ...]        # graph node ids in brick hole order
    direction: Vec                # along the sketch line (first arm for L-beams)
    axis: str                     # hole orientation axis
    covered_edges: tuple[int, ...]
    hole_types: tuple[str, ...]
    layer0_only: bool = False
    mass: float = 0.0

    @property
    def length(self) -> int:
        return len(self.nodes)


@dataclass
class PlacementIndex:
    graph: GuidingGraph
    components: list[Component]
    placements: list[BeamPlacement]
    by_edge: dict[int, tuple[int, ...]] = field(default_factory=dict)
    by_node: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.by_edge:
            per_edge: dict[int, list[int]] = {e.id: [] for e in self.graph.edges}
            per_node: dict[int, list[int]] = {n.id: [] for n in self.graph.nodes}
            for p in self.placements:
                for eid in p.covered_edges:
                    per_edge[eid].append(p.id)
                for nid in p.nodes:
                    per_node[nid].append(p.id)
            self.by_edge = {k: tuple(v) for k, v in per_edge.items()}
            self.by_node = {k: tuple(v) for k, v in per_node.items()}

    def covering(self, edge_id: int) -> tuple[int, ...]:
        try:
            return self.by_edge[edge_id]
        except KeyError:
            raise LookupError(f"unknown edge id {edge_id}") from None

    def at_node(self, node_id: int) -> tuple[int, ...]:
        try:
            return self.by_node[node_id]
        except KeyError:
            raise LookupError(f"unknown node id {node_id}") from None

    def debug_counts(self) -> dict[int, int]:
        return {eid: len(pids) for eid, pids in sorted(self.by_edge.items())}


def _find_runs(
    graph: GuidingGraph, comp_nodes: frozenset[int]
) -> list[tuple[Vec, tuple[int, ...]]]:
    """Maximal straight chains of consecutive nodes within one component."""
    edges_in = [
        e
        for e in graph.edges
        if e.u in comp_nodes and e.v in comp_nodes
    ]
    lines: dict[tuple, list] = {}
    for e in edges_in:
        pu, pv = graph.nodes[e.u].pos, graph.nodes[e.v].pos
        d = vsub(pv, pu)
        if tuple(d) < (0.0, 0.0, 0.0):
            d = vsub(pu, pv)
        d = quantize(d)
        t = sum(c * dc for c, dc in zip(pu, d))
        anchor = quantize(vsub(pu, vscale(d, t)))
        lines.setdefault((d, anchor), []).append(e)
    runs = []
    for (d, _anchor), line_edges in sorted(lines.items()):
        # order nodes along the line by projection parameter
        node_ids = set()
        for e in line_edges:
            node_ids.add(e.u)
            node_ids.add(e.v)
        ordered = sorted(
            node_ids,
            key=lambda n: sum(c * dc for c, dc in zip(graph.nodes[n].pos, d)),
        )
        have_edge = {(min(e.u, e.v), max(e.u, e.v)) for e in line_edges}
        chain: list[int] = [ordered[0]]
        for n in ordered[1:]:
            prev = chain[-1]
            if (min(prev, n), max(prev, n)) in have_edge:
                chain.append(n)
            else:
                if len(chain) >= 2:
                    runs.append((d, tuple(chain)))
                chain = [n]
        if len(chain) >= 2:
            runs.append((d, tuple(chain)))
    return runs


def _edge_lookup(graph: GuidingGraph) -> dict[tuple[int, int], int]:
    return {(e.u, e.v): e.id for e in graph.edges}


def _chain_edges(chain: tuple[int, ...], lookup) -> tuple[int, ...] | None:
    eids = []
    for u, v in zip(chain, chain[1:]):
        eid = lookup.get((min(u, v), max(u, v)))
        if eid is None:
            return None
        eids.append(eid)
    return tuple(eids)


def index_placements(
    components: list[Component],
    graph: GuidingGraph,
    catalog: Catalog,
    assignment: OrientationAssignment | None = None,
    max_beam_length: int | None = None,
    straight_only: bool = False,
) -> PlacementIndex:
    """Enumerate every feasible placement of every catalog brick.

    Placements never pass through an annotated rotating joint (stopping at one
    is allowed), and placements covering a pass-through segment are flagged to
    stay at layer 0.
    """
    lookup = _edge_lookup(graph)
    beams = catalog.beams_by_length(max_beam_length)
    l_beams = [] if straight_only else catalog.by_kind("L-beam")
    single_holes = [] if straight_only else catalog.by_kind("single-hole")
    pass_through = graph.pass_through_segments

    placements: list[BeamPlacement] = []

    def passes_joint(nodes: tuple[int, ...], interior: slice) -> bool:
        return any(graph.nodes[n].is_joint for n in nodes[interior])

    def add(brick, kind, comp_id, nodes, direction, axis, eids, hole_types):
        layer0 = any(graph.edges[eid].segment in pass_through for eid in eids)
        placements.append(
            BeamPlacement(
                id=len(placements),
                brick_id=brick.id,
                kind=kind,
                component=comp_id,
                nodes=nodes,
                direction=direction,
                axis=axis,
                covered_edges=eids,
                hole_types=hole_types,
                layer0_only=layer0,
                mass=brick.mass,
            )
        )

    for comp in components:
        runs = _find_runs(graph, comp.nodes)
        # straight beams on runs
        for d, chain in runs:
            if comp.axis not in perpendicular_axes(d):
                continue  # holes must be perpendicular to the line they cover
            chain_eids = _chain_edges(chain, lookup)
            for brick in beams:
                m = brick.length
                if m > len(chain):
                    continue
                for s in range(len(chain) - m + 1):
                    nodes = chain[s : s + m]
                    if m > 2 and passes_joint(nodes, slice(1, -1)):
                        continue
                    add(
                        brick,
                        "beam",
                        comp.id,
                        nodes,
                        d,
                        comp.axis,
                        chain_eids[s : s + m - 1],
                        tuple(h.type for h in brick.holes),
                    )

        # L-beams across pairs of perpendicular runs sharing a corner node
        if l_beams:
            pos_of = {n: graph.nodes[n].pos for n in comp.nodes}
            chain_index: dict[int, list[tuple[Vec, tuple[int, ...], int]]] = {}
            for d, chain in runs:
                for i, n in enumerate(chain):
                    chain_index.setdefault(n, []).append((d, chain, i))
            for corner in sorted(chain_index):
                entries = chain_index[corner]
                if len(entries) < 2:
                    continue
                for i1 in range(len(entries)):
                    for i2 in range(len(entries)):
                        if i1 == i2:
                            continue
                        d1, chain1, k1 = entries[i1]
                        d2, chain2, k2 = entries[i2]
                        if abs(sum(a * b for a, b in zip(d1, d2))) > 1e-9:
                            continue  # arms must be perpendicular
                        for brick in l_beams:
                            a_len, b_len = brick.arms
                            for s1 in (1, -1):
                                armA = _arm(chain1, k1, s1, a_len)
                                if armA is None:
                                    continue
                                for s2 in (1, -1):
                                    armB = _arm(chain2, k2, s2, b_len)
                                    if armB is None:
                                        continue
                                    nodes = tuple(reversed(armA)) + tuple(armB[1:])
                                    if passes_joint(nodes, slice(1, -1)):
                                        continue
                                    eids = _chain_edges(nodes[: a_len], lookup)
                                    eids2 = _chain_edges(nodes[a_len - 1 :], lookup)
                                    if eids is None or eids2 is None:
                                        continue
                                    direction = quantize(
                                        vsub(
                                            pos_of[nodes[a_len - 1]], pos_of[nodes[0]]
                                        )
                                    )
                                    add(
                                        brick,
                                        "L-beam",
                                        comp.id,
                                        nodes,
                                        vscale(direction, 1.0 / max(a_len - 1, 1)),
                                        comp.axis,
                                        eids + eids2,
                                        tuple(h.type for h in brick.holes),
                                    )

        # single-hole bricks on the interior node of 2-unit segments whose
        # orientation ended up parallel to the segment
        if single_holes:
            for node_id in sorted(comp.nodes):
                node = graph.nodes[node_id]
                if node.junction or node.is_joint:
                    continue
                incident = graph.adjacency[node_id]
                if len(incident) != 2:
                    continue
                seg_ids = {graph.edges[eid].segment for eid, _ in incident}
                if len(seg_ids) != 1:
                    continue
                seg_edges = graph.edges_by_segment[next(iter(seg_ids))]
                if len(seg_edges) != 2:
                    continue
                e0 = graph.edges[incident[0][0]]
                d = vsub(graph.nodes[e0.v].pos, graph.nodes[e0.u].pos)
                par = parallel_axis(d)
                if par is None or comp.axis != par:
                    continue
                for brick in single_holes:
                    add(
                        brick,
                        "single-hole",
                        comp.id,
                        (node_id,),
                        quantize(d),
                        comp.axis,
                        tuple(eid for eid, _ in incident),
                        tuple(h.type for h in brick.holes),
                    )

    # de-duplicate (identical node tuples from swapped symmetric L-arms)
    seen: set[tuple] = set()
    unique: list[BeamPlacement] = []
    for p in placements:
        key = (p.brick_id, p.nodes, p.axis)
        if key in seen:
            continue
        seen.add(key)
        unique.append(
            BeamPlacement(
                id=len(unique),
                brick_id=p.brick_id,
                kind=p.kind,
                component=p.component,
                nodes=p.nodes,
                direction=p.direction,
                axis=p.axis,
                covered_edges=p.covered_edges,
                hole_types=p.hole_types,
                layer0_only=p.layer0_only,
                mass=p.mass,
            )
        )

    return PlacementIndex(graph=graph, components=components, placements=unique)


def _arm(chain: tuple[int, ...], k: int, sign: int, arm_len: int) -> list[int] | None:
    idxs = [k + sign * j for j in range(arm_len)]
    if any(i < 0 or i >= len(chain) for i in idxs):
        return None
    return [chain[i] for i in idxs]


def placements_covering(index: PlacementIndex, edge_id: int) -> list[BeamPlacement]:
    """Stored feasible placements for an edge, ordered by brick id then start."""
    pids = index.covering(edge_id)
    out = [index.placements[i] for i in pids]
    out.sort(key=lambda p: (p.brick_id, p.nodes))
    return out


def revalidate_orientation(
    placement: BeamPlacement, new_axis: str, graph: GuidingGraph
) -> BeamPlacement | None:
    """Placement with a different hole axis, or None when infeasible.

    The new axis must stay perpendicular to the covered line(s) and must not
    contradict joint annotations on the placement's nodes.
    """
    if new_axis == placement.axis:
        return placement
    if placement.kind == "L-beam":
        return None  # the plane normal is the only valid axis
    if placement.kind == "single-hole":
        return None  # orientation fixed by the parallel-cover exception
    if new_axis not in perpendicular_axes(placement.direction):
        return None
    for nid in placement.nodes:
        node = graph.nodes[nid]
        if node.is_joint and node.joint_axis != new_axis:
            return None
        if node.hint_axis is not None and node.hint_axis != new_axis:
            return None
    return BeamPlacement(
        id=placement.id,
        brick_id=placement.brick_id,
        kind=placement.kind,
        component=placement.component,
        nodes=placement.nodes,
        direction=placement.direction,
        axis=new_axis,
        covered_edges=placement.covered_edges,
        hole_types=placement.hole_types,
        layer0_only=placement.layer0_only,
        mass=placement.mass,
    )
