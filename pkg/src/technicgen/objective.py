"""The layout objective: faithfulness, simplicity, and structural integrity.

Nine weighted terms are combined into one score. eval_full and
eval_simplified recompute everything from the raw beam set, which makes them
the reference implementations the incremental engine is checked against.
The simplified form skips the collision and connection-coherence terms and
treats the average pin-head ratio as 1; its rigidity estimate uses only the
cheap coaxial-pin rule, since no connection plan exists yet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .layout import Layout, LayoutBeam, LocalChange
from .sketch import GuidingGraph, SymmetryIndex

FIXED_WEIGHTS = {"w_cpt": 1.0, "w_sym": 30.0, "w_phr": 10.0, "w_col": 30.0,
                 "w_gap": 100.0, "w_coh": 50.0}

PRESETS = {
    "faithful": (100.0, 0.0, 0.0),
    "simple": (0.0, 100.0, 0.0),
    "rigid-faithful": (100.0, 0.0, 100.0),
    "rigid-simple": (0.0, 100.0, 100.0),
}


@dataclass(frozen=True)
class ObjectiveWeights:
    w_dev: float = 100.0
    w_cpt: float = 1.0
    w_sym: float = 30.0
    w_tbl: float = 0.0
    w_phr: float = 10.0
    w_col: float = 30.0
    w_gap: float = 100.0
    w_coh: float = 50.0
    w_rgd: float = 0.0

    @classmethod
    def preset(cls, name: str) -> "ObjectiveWeights":
        try:
            dev, tbl, rgd = PRESETS[name]
        except KeyError:
            raise ValueError(
                f"unknown preset {name!r}; expected one of {sorted(PRESETS)}"
            ) from None
        return cls(w_dev=dev, w_tbl=tbl, w_rgd=rgd, **FIXED_WEIGHTS)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "w_dev", "w_cpt", "w_sym", "w_tbl", "w_phr", "w_col", "w_gap",
            "w_coh", "w_rgd")}


@dataclass(frozen=True)
class ObjectiveBreakdown:
    f_dev: float = 0.0
    f_cpt: float = 0.0
    f_sym: float = 0.0
    f_tbl: float = 0.0
    f_phr: float = 0.0
    f_col: float = 0.0
    f_gap: float = 0.0
    f_coh: float = 0.0
    f_rgd: float = 0.0
    n_col: int = 0
    n_gap: int = 0
    n_cfail: int = 0
    rigid_subsets: int = 0
    total_length: int = 0
    rho_bar: float = 1.0
    weights: ObjectiveWeights = field(default_factory=ObjectiveWeights)

    @property
    def total(self) -> float:
        w = self.weights
        return (
            w.w_dev * self.f_dev
            + w.w_cpt * self.f_cpt
            + w.w_sym * self.f_sym
            + w.w_tbl * self.f_tbl
            + w.w_phr * self.f_phr
            + w.w_col * self.f_col
            + w.w_gap * self.f_gap
            + w.w_coh * self.f_coh
            + w.w_rgd * self.f_rgd
        )

    def to_dict(self) -> dict:
        return {
            "terms": {
                "dev": self.f_dev, "cpt": self.f_cpt, "sym": self.f_sym,
                "tbl": self.f_tbl, "phr": self.f_phr, "col": self.f_col,
                "gap": self.f_gap, "coh": self.f_coh, "rgd": self.f_rgd,
            },
            "counters": {
                "collisions": self.n_col,
                "gaps": self.n_gap,
                "connection_failures": self.n_cfail,
                "rigid_subsets": self.rigid_subsets,
                "total_beam_length": self.total_length,
                "rho_bar": self.rho_bar,
            },
            "weights": self.weights.to_dict(),
            "total": self.total,
        }


# -- individual terms ------------------------------------------------------

def deviation_term(layout: Layout) -> float:
    """RMS of layer offsets weighted by beam length; 0 for an empty layout."""
    if layout.sum_length == 0:
        return 0.0
    return math.sqrt(layout.sum_len_l2 / layout.sum_length)


def compactness_term(layout: Layout) -> float:
    """Worst squared layer range over the coplanar components."""
    worst = 0
    for comp_id, layers in layout.comp_layers.items():
        if layers:
            r = max(layers) - min(layers)
            if r > worst:
                worst = r
    return float(worst * worst)


def gap_at(node_id: int, layout: Layout) -> int:
    """Missing layers in the stack of beams associated with a node.

    Computed over distinct occupied layers, so duplicated beams on one layer
    are a collision matter, not a negative gap. Uncovered nodes contribute 0;
    missing coverage is the coherence term's business.
    """
    layers = layout.node_layers.get(node_id)
    if not layers:
        return 0
    return max(layers) - min(layers) + 1 - len(layers)


def gap_total(layout: Layout) -> int:
    return sum(gap_at(n, layout) for n in layout.node_layers)


def collision_count(layout: Layout) -> int:
    """Unordered beam pairs sharing at least one occupied unit cell."""
    return layout.n_col


def total_beam_length(layout: Layout) -> int:
    return layout.sum_length


def simplicity_term(layout: Layout, graph: GuidingGraph, weights: ObjectiveWeights,
                    rho_bar: float = 1.0) -> float:
    """w_tbl * (total length / |V|) + w_phr * (1 - average pin-head ratio)."""
    if graph.node_count == 0 or layout.sum_length == 0:
        tbl = 0.0
    else:
        tbl = layout.sum_length / graph.node_count
    return weights.w_tbl * tbl + weights.w_phr * (1.0 - rho_bar)


def symmetry_term(layout: Layout, graph: GuidingGraph,
                  symmetry: SymmetryIndex | None) -> float:
    if symmetry is None or len(symmetry) == 0:
        return 0.0
    total = 0.0
    for group in symmetry.groups:
        total += _group_symmetry_cost(layout, graph, group)
    return total / len(symmetry)


def _beam_group_side(beam: LayoutBeam, graph: GuidingGraph, segs: set[str]) -> bool:
    return any(graph.edges[eid].segment in segs for eid in beam.placement.covered_edges)


def _group_symmetry_cost(layout: Layout, graph: GuidingGraph, group) -> float:
    left_segs, right_segs = set(group.left_segments), set(group.right_segments)
    left_cells: list = []
    right_cells: list = []
    left_len = 0
    for beam in layout.beams.values():
        if _beam_group_side(beam, graph, left_segs):
            left_cells.extend(beam.cells(graph))
            left_len += beam.length
        if _beam_group_side(beam, graph, right_segs):
            right_cells.extend(group.transform.apply(c) for c in beam.cells(graph))
    if not left_cells and not right_cells:
        return 0.0
    if not left_cells or not right_cells:
        d = _group_bbox_diagonal(graph, group)
        return d * d / max(left_len, 1)
    d = _hausdorff(left_cells, right_cells)
    return d * d / max(left_len, 1)


def _group_bbox_diagonal(graph: GuidingGraph, group) -> float:
    pts = [graph.nodes[n].pos for n in group.left_nodes | group.right_nodes]
    lo = [min(p[i] for p in pts) for i in range(3)]
    hi = [max(p[i] for p in pts) for i in range(3)]
    return math.dist(lo, hi)


def _hausdorff(a: list, b: list) -> float:
    def directed(src, dst):
        worst = 0.0
        for p in src:
            best = min(math.dist(p, q) for q in dst)
            if best > worst:
                worst = best
        return worst

    return max(directed(a, b), directed(b, a))


def direct_rigid_pairs(layout: Layout) -> tuple[set[tuple[int, int]], set[tuple[int, int]]]:
    """Cheap connection estimate from coaxial adjacent holes.

    Returns (connected_pairs, rigid_pairs): beams whose holes line up one unit
    apart along a shared axis can be pinned; two or more distinct pin columns
    make the pair rigid. Pairs meeting at an annotated joint stay rotatable.
    """
    connected = set(layout.pin_cols)
    rigid = set()
    for key, cols in layout.pin_cols.items():
        if len(cols) >= 2 and not any(c[6] for c in cols):
            rigid.add(key)
    return connected, rigid


def rigid_partition(
    layout: Layout,
    graph: GuidingGraph,
    rigid_pairs: set[tuple[int, int]],
) -> list[frozenset[int]]:
    """Maximal transitively-rigid beam subsets (singletons included)."""
    parent = {uid: uid for uid in layout.beams}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in rigid_pairs:
        if a in parent and b in parent:
            parent[find(a)] = find(b)
    groups: dict[int, set[int]] = {}
    for uid in layout.beams:
        groups.setdefault(find(uid), set()).add(uid)
    return [frozenset(g) for g in groups.values()]


def rigidity_denominator(graph: GuidingGraph) -> int:
    return sum((graph.degree(n.id) - 1) ** 2 for n in graph.nodes)


def rigidity_term(n_subsets: int, graph: GuidingGraph) -> float:
    return n_subsets / max(rigidity_denominator(graph), 1)


# -- whole-layout evaluation -------------------------------------------------

def _connection_summary(connector, layout):
    """(rho_bar, n_cfail, rigid_pairs) from a Connector or compatible callable."""
    if hasattr(connector, 'summary'):
        return connector.summary(layout)
    plan = connector(layout)
    return plan.rho_bar, plan.n_cfail, plan.rigid_pairs


def _rebuild(layout: Layout) -> Layout:
    """Recompute a layout's maps from its beam set alone (oracle path)."""
    fresh = Layout(layout.graph, layout.index)
    for uid in sorted(layout.beams):
        beam = layout.beams[uid]
        fresh._install(beam)
        fresh._next_uid = max(fresh._next_uid, uid + 1)
    return fresh


def eval_simplified(
    layout: Layout,
    graph: GuidingGraph,
    weights: ObjectiveWeights,
    symmetry: SymmetryIndex | None = None,
) -> ObjectiveBreakdown:
    """F0: the full objective minus collisions and connection coherence."""
    fresh = _rebuild(layout)
    _, rigid = direct_rigid_pairs(fresh)
    subsets = rigid_partition(fresh, graph, rigid)
    n_gap = gap_total(fresh)
    return ObjectiveBreakdown(
        f_dev=deviation_term(fresh),
        f_cpt=compactness_term(fresh),
        f_sym=symmetry_term(fresh, graph, symmetry),
        f_tbl=(fresh.sum_length / graph.node_count) if graph.node_count else 0.0,
        f_phr=0.0,
        f_col=0.0,
        f_gap=(n_gap / graph.node_count) if graph.node_count else 0.0,
        f_coh=0.0,
        f_rgd=rigidity_term(len(subsets), graph),
        n_col=0,
        n_gap=n_gap,
        n_cfail=0,
        rigid_subsets=len(subsets),
        total_length=fresh.sum_length,
        rho_bar=1.0,
        weights=weights,
    )


def eval_full(
    layout: Layout,
    graph: GuidingGraph,
    weights: ObjectiveWeights,
    connector,
    symmetry: SymmetryIndex | None = None,
) -> ObjectiveBreakdown:
    """The full objective; `connector` maps a layout to a ConnectionPlan."""
    fresh = _rebuild(layout)
    rho_bar, n_cfail, rigid_pairs = _connection_summary(connector, fresh)
    subsets = rigid_partition(fresh, graph, set(rigid_pairs))
    n_gap = gap_total(fresh)
    n_col = collision_count(fresh)
    return ObjectiveBreakdown(
        f_dev=deviation_term(fresh),
        f_cpt=compactness_term(fresh),
        f_sym=symmetry_term(fresh, graph, symmetry),
        f_tbl=(fresh.sum_length / graph.node_count) if graph.node_count else 0.0,
        f_phr=1.0 - rho_bar,
        f_col=(n_col / fresh.sum_length) if fresh.sum_length else 0.0,
        f_gap=(n_gap / graph.node_count) if graph.node_count else 0.0,
        f_coh=(n_cfail / graph.edge_count) if graph.edge_count else 0.0,
        f_rgd=rigidity_term(len(subsets), graph),
        n_col=n_col,
        n_gap=n_gap,
        n_cfail=n_cfail,
        rigid_subsets=len(subsets),
        total_length=fresh.sum_length,
        rho_bar=rho_bar,
        weights=weights,
    )


class IncrementalObjective:
    """Maintains a breakdown across local layout changes.

    The cheap terms are read from the layout's maintained statistics; the
    symmetry term caches per-group costs and recomputes only groups touched
    by a change. Connection-dependent terms are re-derived per evaluation
    (from the memoizing connector in full mode, or the coaxial-pin estimate
    in simplified mode).
    """

    def __init__(
        self,
        layout: Layout,
        graph: GuidingGraph,
        weights: ObjectiveWeights,
        symmetry: SymmetryIndex | None = None,
        connector=None,
        simplified: bool = True,
    ):
        self.layout = layout
        self.graph = graph
        self.weights = weights
        self.symmetry = symmetry
        self.connector = connector
        self.simplified = simplified
        self._group_cost: dict[int, float] = {}
        self._group_segments: list[tuple[set, set]] = []
        if symmetry is not None:
            for g in symmetry.groups:
                self._group_segments.append(
                    (set(g.left_segments), set(g.right_segments))
                )
                self._group_cost[g.index] = _group_symmetry_cost(layout, graph, g)

    def switch_to_full(self, connector) -> None:
        self.simplified = False
        self.connector = connector

    def _touched_groups(self, change: LocalChange) -> set[int]:
        if self.symmetry is None:
            return set()
        touched = set()
        segs: set[str] = set()
        for b in change.removed + change.added:
            for eid in b.placement.covered_edges:
                segs.add(self.graph.edges[eid].segment)
        for gi, (left, right) in enumerate(self._group_segments):
            if segs & left or segs & right:
                touched.add(gi)
        return touched

    def notify(self, change: LocalChange) -> None:
        """Refresh cached group costs after the layout was mutated by `change`."""
        for gi in self._touched_groups(change):
            self._group_cost[gi] = _group_symmetry_cost(
                self.layout, self.graph, self.symmetry.groups[gi]
            )

    def apply(self, change: LocalChange) -> None:
        self.layout.apply(change)
        self.notify(change)

    def undo(self, change: LocalChange) -> None:
        self.layout.undo(change)
        self.notify(change)

    def breakdown(self) -> ObjectiveBreakdown:
        layout, graph = self.layout, self.graph
        f_sym = (
            sum(self._group_cost.values()) / len(self._group_cost)
            if self._group_cost
            else 0.0
        )
        n_gap = layout.gap_sum
        common = dict(
            f_dev=deviation_term(layout),
            f_cpt=compactness_term(layout),
            f_sym=f_sym,
            f_tbl=(layout.sum_length / graph.node_count) if graph.node_count else 0.0,
            f_gap=(n_gap / graph.node_count) if graph.node_count else 0.0,
            n_gap=n_gap,
            total_length=layout.sum_length,
            weights=self.weights,
        )
        if self.simplified:
            _, rigid = direct_rigid_pairs(layout)
            subsets = rigid_partition(layout, graph, rigid)
            return ObjectiveBreakdown(
                f_phr=0.0,
                f_col=0.0,
                f_coh=0.0,
                f_rgd=rigidity_term(len(subsets), graph),
                n_col=0,
                n_cfail=0,
                rigid_subsets=len(subsets),
                rho_bar=1.0,
                **common,
            )
        rho_bar, n_cfail, rigid_pairs = _connection_summary(self.connector, layout)
        subsets = rigid_partition(layout, graph, set(rigid_pairs))
        n_col = layout.n_col
        return ObjectiveBreakdown(
            f_phr=1.0 - rho_bar,
            f_col=(n_col / layout.sum_length) if layout.sum_length else 0.0,
            f_coh=(n_cfail / graph.edge_count) if graph.edge_count else 0.0,
            f_rgd=rigidity_term(len(subsets), graph),
            n_col=n_col,
            n_cfail=n_cfail,
            rigid_subsets=len(subsets),
            rho_bar=rho_bar,
            **common,
        )


def incremental_update(
    inc: IncrementalObjective, change: LocalChange
) -> ObjectiveBreakdown:
    """Apply a local change and return the refreshed breakdown."""
    inc.apply(change)
    return inc.breakdown()
