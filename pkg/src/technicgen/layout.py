"""Layout state: the evolving set of beam placements the annealer mutates.

A Layout keeps every map the objective needs (edge cover, node association,
cell occupancy, collision pairs, per-node and per-component layer stats, and
coaxial pin-column candidates per beam pair) up to date on each insertion or
removal, so objective deltas are cheap. Map values are immutable tuples,
which makes copy() a set of shallow dict copies.

Cover rule: a beam covers its placement edges only while its layer offset is
at most one unit (it crosses the sketch line or sits on an adjacent layer).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .geometry import AXIS_VECTORS, Vec, quantize
from .placements import BeamPlacement, PlacementIndex
from .sketch import GuidingGraph

COVER_MAX_OFFSET = 1


def placement_cells(
    graph: GuidingGraph, placement: BeamPlacement, layer: int, axis: str
) -> tuple[Vec, ...]:
    av = AXIS_VECTORS[axis]
    return tuple(
        quantize(
            (
                graph.nodes[n].pos[0] + layer * av[0],
                graph.nodes[n].pos[1] + layer * av[1],
                graph.nodes[n].pos[2] + layer * av[2],
            )
        )
        for n in placement.nodes
    )


@dataclass(frozen=True)
class LayoutBeam:
    uid: int
    placement: BeamPlacement
    layer: int
    axis: str

    @property
    def length(self) -> int:
        return self.placement.length

    @property
    def component(self) -> int:
        return self.placement.component

    @property
    def covers(self) -> bool:
        return abs(self.layer) <= COVER_MAX_OFFSET

    def cells(self, graph: GuidingGraph) -> tuple[Vec, ...]:
        return placement_cells(graph, self.placement, self.layer, self.axis)


# occupancy record: (uid, node id, hole type, axis)
# pin-column record: (cell_lo, cell_hi, uid_lo, uid_hi, type_lo, type_hi, joint)


@dataclass
class LocalChange:
    removed: tuple[LayoutBeam, ...] = ()
    added: tuple[LayoutBeam, ...] = ()

    def inverse(self) -> "LocalChange":
        return LocalChange(removed=self.added, added=self.removed)

    @property
    def touched_nodes(self) -> set[int]:
        out: set[int] = set()
        for b in self.removed + self.added:
            out.update(b.placement.nodes)
        return out


class InconsistentChangeError(ValueError):
    """A LocalChange referenced beams absent from the layout."""


def _tuple_add(t: tuple, x) -> tuple:
    return t + (x,)


class Layout:
    """Mutable beam layout with maintained statistics.

    The public mutation surface is add_beam / remove_beam / apply / undo;
    copy() yields an independent layout sharing only immutable values.
    """

    def __init__(self, graph: GuidingGraph, index: PlacementIndex):
        self.graph = graph
        self.index = index
        if not hasattr(index, "_cells_cache"):
            index._cells_cache = {}
        self._cells_cache = index._cells_cache
        self.joint_nodes = frozenset(n.id for n in graph.nodes if n.is_joint)
        self.reserved_nodes = frozenset(
            n.id for n in graph.nodes if n.segments & graph.pass_through_segments
        )
        self.beams: dict[int, LayoutBeam] = {}
        self._next_uid = 0
        self.cover: dict[int, tuple[int, ...]] = {}
        self.assoc: dict[int, tuple[int, ...]] = {}
        self.cells: dict[Vec, tuple] = {}
        self.pair_hits: dict[tuple[int, int], int] = {}
        self.pin_cols: dict[tuple[int, int], tuple] = {}
        self.uncovered: set[int] = set(range(graph.edge_count))
        self.uncoverable: set[int] = {
            e for e in range(graph.edge_count) if not index.by_edge.get(e)
        }
        self.cover_weight: dict[int, int] = {}
        for e in self.uncovered:
            for pid in index.by_edge.get(e, ()):
                self.cover_weight[pid] = self.cover_weight.get(pid, 0) + 1
        self.adj_pairs: dict[tuple[int, int], int] = {}
        self.sum_length = 0
        self.sum_len_l2 = 0
        self.comp_layers: dict[int, dict[int, int]] = {}
        self.node_layers: dict[int, dict[int, int]] = {}
        self.gap_sum = 0
        self._gap_at: dict[int, int] = {}

    # -- queries ---------------------------------------------------------

    def beam_cells(self, beam: LayoutBeam) -> tuple[Vec, ...]:
        return self.cells_for(beam.placement, beam.layer, beam.axis)

    def cells_for(self, placement: BeamPlacement, layer: int, axis: str) -> tuple[Vec, ...]:
        key = (placement.id, layer, axis)
        got = self._cells_cache.get(key)
        if got is None:
            got = placement_cells(self.graph, placement, layer, axis)
            self._cells_cache[key] = got
        return got

    @property
    def n_col(self) -> int:
        return len(self.pair_hits)

    def covered(self, edge_id: int) -> bool:
        return edge_id not in self.uncovered

    def fully_covers(self) -> bool:
        return not self.uncovered

    def gap_at(self, node_id: int) -> int:
        return self._gap_at.get(node_id, 0)

    def beams_at_node(self, node_id: int) -> tuple[int, ...]:
        return self.assoc.get(node_id, ())

    def occupants(self, cell: Vec) -> tuple[int, ...]:
        return tuple(r[0] for r in self.cells.get(cell, ()))

    def component_range(self, comp_id: int) -> int:
        layers = self.comp_layers.get(comp_id)
        if not layers:
            return 0
        return max(layers) - min(layers)

    # -- mutation --------------------------------------------------------

    def add_beam(
        self, placement: BeamPlacement, layer: int, axis: str | None = None
    ) -> LayoutBeam:
        beam = LayoutBeam(
            uid=self._next_uid,
            placement=placement,
            layer=layer,
            axis=axis or placement.axis,
        )
        self._next_uid += 1
        self._install(beam)
        return beam

    def _install(self, beam: LayoutBeam) -> None:
        uid = beam.uid
        self.beams[uid] = beam
        p = beam.placement
        axis = beam.axis
        av = AXIS_VECTORS[axis]
        joint_nodes = self.joint_nodes
        reserved = self.reserved_nodes
        cells = self.cells
        pair_hits = self.pair_hits
        pin_cols = self.pin_cols
        if beam.covers:
            by_edge = self.index.by_edge
            for eid in p.covered_edges:
                prev = self.cover.get(eid, ())
                self.cover[eid] = prev + (uid,)
                if eid in self.uncovered:
                    self.uncovered.discard(eid)
                    for pid in by_edge[eid]:
                        left = self.cover_weight[pid] - 1
                        if left:
                            self.cover_weight[pid] = left
                        else:
                            del self.cover_weight[pid]
        for cell, node, htype in zip(self.beam_cells(beam), p.nodes, p.hole_types):
            occupants = cells.get(cell, ())
            for rec in occupants:
                other = rec[0]
                key = (other, uid) if other < uid else (uid, other)
                pair_hits[key] = pair_hits.get(key, 0) + 1
            cells[cell] = occupants + ((uid, node, htype, axis),)
            if node not in reserved and cell[2] >= 0:
                # pins are connecting bricks: they may not dip below ground,
                # so columns with a cell under z=0 are never recorded
                above = (cell[0] + av[0], cell[1] + av[1], cell[2] + av[2])
                if above[2] >= 0:
                    for rec in cells.get(above, ()):
                        if rec[3] != axis or rec[0] == uid or rec[1] in reserved:
                            continue
                        key = (uid, rec[0]) if uid < rec[0] else (rec[0], uid)
                        col = (
                            cell, above, uid, rec[0], htype, rec[2],
                            node in joint_nodes or rec[1] in joint_nodes,
                        )
                        pin_cols[key] = pin_cols.get(key, ()) + (col,)
                below = (cell[0] - av[0], cell[1] - av[1], cell[2] - av[2])
                if below[2] >= 0:
                    for rec in cells.get(below, ()):
                        if rec[3] != axis or rec[0] == uid or rec[1] in reserved:
                            continue
                        key = (uid, rec[0]) if uid < rec[0] else (rec[0], uid)
                        col = (
                            below, cell, rec[0], uid, rec[2], htype,
                            node in joint_nodes or rec[1] in joint_nodes,
                        )
                        pin_cols[key] = pin_cols.get(key, ()) + (col,)
        self.sum_length += p.length
        self.sum_len_l2 += p.length * beam.layer * beam.layer
        comp = self.comp_layers.setdefault(p.component, {})
        comp[beam.layer] = comp.get(beam.layer, 0) + 1
        adjacency = self.graph.adjacency
        assoc = self.assoc
        adj_pairs = self.adj_pairs
        for nid in p.nodes:
            for other in assoc.get(nid, ()):
                key = (other, uid) if other < uid else (uid, other)
                adj_pairs[key] = adj_pairs.get(key, 0) + 1
            for _eid, m in adjacency[nid]:
                for other in assoc.get(m, ()):
                    if other == uid:
                        continue
                    key = (other, uid) if other < uid else (uid, other)
                    adj_pairs[key] = adj_pairs.get(key, 0) + 1
            assoc[nid] = assoc.get(nid, ()) + (uid,)
            nl = self.node_layers.setdefault(nid, {})
            nl[beam.layer] = nl.get(beam.layer, 0) + 1
            self._refresh_gap(nid)

    def remove_beam(self, uid: int) -> LayoutBeam:
        beam = self.beams.pop(uid, None)
        if beam is None:
            raise InconsistentChangeError(f"beam {uid} not in layout")
        p = beam.placement
        axis = beam.axis
        av = AXIS_VECTORS[axis]
        cells = self.cells
        pair_hits = self.pair_hits
        pin_cols = self.pin_cols
        if beam.covers:
            by_edge = self.index.by_edge
            for eid in p.covered_edges:
                kept = tuple(x for x in self.cover[eid] if x != uid)
                if kept:
                    self.cover[eid] = kept
                else:
                    del self.cover[eid]
                    self.uncovered.add(eid)
                    for pid in by_edge[eid]:
                        self.cover_weight[pid] = self.cover_weight.get(pid, 0) + 1
        for cell, node in zip(self.beam_cells(beam), p.nodes):
            occupants = tuple(r for r in cells[cell] if r[0] != uid)
            if occupants:
                cells[cell] = occupants
            else:
                del cells[cell]
            for rec in occupants:
                other = rec[0]
                key = (other, uid) if other < uid else (uid, other)
                left = pair_hits[key] - 1
                if left:
                    pair_hits[key] = left
                else:
                    del pair_hits[key]
            if node not in self.reserved_nodes:
                # every column of a pair involves this beam, so the whole
                # pair entry dies with it
                for neigh in (
                    (cell[0] + av[0], cell[1] + av[1], cell[2] + av[2]),
                    (cell[0] - av[0], cell[1] - av[1], cell[2] - av[2]),
                ):
                    for rec in cells.get(neigh, ()):
                        if rec[3] != axis or rec[0] == uid:
                            continue
                        other = rec[0]
                        key = (uid, other) if uid < other else (other, uid)
                        pin_cols.pop(key, None)
        self.sum_length -= p.length
        self.sum_len_l2 -= p.length * beam.layer * beam.layer
        comp = self.comp_layers[p.component]
        if comp[beam.layer] == 1:
            del comp[beam.layer]
            if not comp:
                del self.comp_layers[p.component]
        else:
            comp[beam.layer] -= 1
        adjacency = self.graph.adjacency
        adj_pairs = self.adj_pairs
        for nid in p.nodes:
            kept = tuple(x for x in self.assoc[nid] if x != uid)
            if kept:
                self.assoc[nid] = kept
            else:
                del self.assoc[nid]
            for other in kept:
                key = (other, uid) if other < uid else (uid, other)
                left = adj_pairs[key] - 1
                if left:
                    adj_pairs[key] = left
                else:
                    del adj_pairs[key]
            for _eid, m in adjacency[nid]:
                for other in self.assoc.get(m, ()):
                    if other == uid:
                        continue
                    key = (other, uid) if other < uid else (uid, other)
                    left = adj_pairs[key] - 1
                    if left:
                        adj_pairs[key] = left
                    else:
                        del adj_pairs[key]
            nl = self.node_layers[nid]
            if nl[beam.layer] == 1:
                del nl[beam.layer]
                if not nl:
                    del self.node_layers[nid]
            else:
                nl[beam.layer] -= 1
            self._refresh_gap(nid)
        return beam

    def _refresh_gap(self, nid: int) -> None:
        nl = self.node_layers.get(nid)
        old = self._gap_at.get(nid, 0)
        if not nl:
            new = 0
        else:
            new = max(nl) - min(nl) + 1 - len(nl)
        if new != old:
            self.gap_sum += new - old
            if new:
                self._gap_at[nid] = new
            else:
                self._gap_at.pop(nid, None)

    def apply(self, change: LocalChange) -> None:
        for b in change.removed:
            if b.uid not in self.beams:
                raise InconsistentChangeError(f"beam {b.uid} not in layout")
        for b in change.removed:
            self.remove_beam(b.uid)
        for b in change.added:
            if b.uid in self.beams:
                raise InconsistentChangeError(f"beam uid {b.uid} already present")
            self._install(b)
            self._next_uid = max(self._next_uid, b.uid + 1)

    def undo(self, change: LocalChange) -> None:
        self.apply(change.inverse())

    def reorient_beam(self, uid: int, new_axis: str) -> LocalChange:
        beam = self.beams.get(uid)
        if beam is None:
            raise InconsistentChangeError(f"beam {uid} not in layout")
        replacement = replace(beam, axis=new_axis)
        change = LocalChange(removed=(beam,), added=(replacement,))
        self.apply(change)
        return change

    # -- copying ---------------------------------------------------------

    def copy(self) -> "Layout":
        out = Layout.__new__(Layout)
        out.graph = self.graph
        out.index = self.index
        out._cells_cache = self._cells_cache
        out.joint_nodes = self.joint_nodes
        out.reserved_nodes = self.reserved_nodes
        out.beams = dict(self.beams)
        out._next_uid = self._next_uid
        out.cover = dict(self.cover)
        out.assoc = dict(self.assoc)
        out.cells = dict(self.cells)
        out.pair_hits = dict(self.pair_hits)
        out.pin_cols = dict(self.pin_cols)
        out.uncovered = set(self.uncovered)
        out.uncoverable = set(self.uncoverable)
        out.cover_weight = dict(self.cover_weight)
        out.adj_pairs = dict(self.adj_pairs)
        out.sum_length = self.sum_length
        out.sum_len_l2 = self.sum_len_l2
        out.comp_layers = {k: dict(v) for k, v in self.comp_layers.items()}
        out.node_layers = {k: dict(v) for k, v in self.node_layers.items()}
        out.gap_sum = self.gap_sum
        out._gap_at = dict(self._gap_at)
        return out


def collides(layout: Layout, placement: BeamPlacement, layer: int, axis: str) -> bool:
    """True iff any cell of the prospective insertion is already occupied."""
    cells = layout.cells
    for cell in layout.cells_for(placement, layer, axis):
        if cell in cells:
            return True
    return False


def collisions_at(layout: Layout, placement: BeamPlacement, layer: int, axis: str) -> int:
    """Distinct existing beams a prospective insertion would collide with."""
    cells = layout.cells
    hit: set[int] = set()
    for cell in layout.cells_for(placement, layer, axis):
        got = cells.get(cell)
        if got:
            for rec in got:
                hit.add(rec[0])
    return len(hit)


def choose_layer(
    layout: Layout, placement: BeamPlacement, axis: str | None = None, rng=None
) -> tuple[int, int]:
    """Pick the covering layer for an insertion, favoring compact layering.

    Candidates are the covering offsets (0, -1, +1); pass-through placements
    are pinned to 0. Ranking: fewest new collisions, then smallest resulting
    component layer range, then smaller |layer|, negative before positive.
    When an rng is supplied, ties on (collisions, range) are broken by a
    uniform draw instead. Returns (layer, collision count at that layer).
    """
    axis = axis or placement.axis
    if placement.layer0_only:
        candidates = [0]
    else:
        candidates = [0, -1, 1]
    comp_layers = layout.comp_layers.get(placement.component, {})
    if comp_layers:
        lo, hi = min(comp_layers), max(comp_layers)
    scored = []
    for l in candidates:
        cols = collisions_at(layout, placement, l, axis)
        if comp_layers:
            span = max(hi, l) - min(lo, l)
        else:
            span = 0
        scored.append(((cols, span, abs(l), 0 if l < 0 else 1), l, cols))
    scored.sort(key=lambda t: t[0])
    if rng is not None:
        head = scored[0][0][:2]
        tied = [t for t in scored if t[0][:2] == head]
        _, l, cols = tied[rng.randrange(len(tied))]
        return l, cols
    return scored[0][1], scored[0][2]
