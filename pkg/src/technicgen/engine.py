"""Stage two: random initialization, the layout-modification operator, and the
annealing loop that refines a layout under the objective.

The loop follows the classic two-temperature scheme: while the temperature is
at or above the mid cutoff the simplified objective guides the search; below
it the full objective (collisions, connection coherence, true pin-head
ratios) takes over and the operator may also propose beam reorientations.
The best layout seen under the active objective is always returned.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

from .catalog import Catalog
from .connect import ConnectionPlan, Connector
from .layout import Layout, LayoutBeam, LocalChange, choose_layer
from .objective import (
    IncrementalObjective,
    ObjectiveBreakdown,
    ObjectiveWeights,
    eval_full,
)
from .placements import PlacementIndex, revalidate_orientation
from .sketch import GuidingGraph, SymmetryIndex


@dataclass(frozen=True)
class AnnealParams:
    t_max: float = 2e3
    t_mid: float = 10.0
    t_min: float = 1e-4
    r: float = 0.999
    rng_seed: int = 0
    reorient_prob: float = 0.2

    def __post_init__(self):
        if not (self.t_max > self.t_mid > self.t_min > 0):
            raise ValueError("temperatures must satisfy t_max > t_mid > t_min > 0")
        if not (0 < self.r < 1):
            raise ValueError("cooling rate must lie in (0, 1)")


def metropolis_accept(delta: float, t: float, rng: random.Random) -> bool:
    """Accept iff exp(-delta/t) beats a uniform draw; sure-accept skips the draw."""
    if delta <= 0:
        return True
    return math.exp(-delta / t) > rng.random()


def _target_edges(layout: Layout) -> list[int]:
    """Uncovered edges still worth inserting for: placements exist and at
    least one endpoint is not already occupied by some beam."""
    idx = layout.index
    graph = layout.graph
    out = []
    for e in layout.uncovered:
        if not idx.by_edge.get(e):
            continue
        u, v = graph.edge_nodes(e)
        if u in layout.assoc and v in layout.assoc:
            continue
        out.append(e)
    out.sort()
    return out


def _blocked_targets(layout: Layout) -> list[int]:
    """Uncovered edges whose endpoints are all occupied but that can still
    take a beam (some placement exists).

    The occupied-nodes stopping rule covers spots where no beam placement
    exists at all (a mechanism must bridge those); an edge a stacked beam can
    still cover stays a target, at the least-collision covering layer.
    """
    idx = layout.index
    out = [e for e in layout.uncovered if idx.by_edge.get(e)]
    out.sort()
    return out


def _fill_uncovered(
    layout: Layout, rng: random.Random, weighted: bool
) -> list[LayoutBeam]:
    """Insert placements until every target edge is covered.

    weighted=False picks a random target edge and a uniformly random placement
    covering it (layout initialization); weighted=True samples one placement
    from all candidates with probability proportional to the number of
    uncovered edges it covers (the modification operator's rule).
    """
    idx = layout.index
    added = []
    while True:
        targets = _target_edges(layout)
        if not targets:
            targets = _blocked_targets(layout)
        if not targets:
            break
        if weighted:
            cover_weight = layout.cover_weight
            cand_ids = sorted(cover_weight)
            weights = [cover_weight[pid] for pid in cand_ids]
            pid = rng.choices(cand_ids, weights=weights)[0]
        else:
            e = targets[rng.randrange(len(targets))]
            pids = idx.by_edge[e]
            pid = pids[rng.randrange(len(pids))]
        placement = idx.placements[pid]
        layer, _cols = choose_layer(layout, placement)
        added.append(layout.add_beam(placement, layer))
    return added


def initialize_layout(
    graph: GuidingGraph, index: PlacementIndex, rng: random.Random | int = 0
) -> Layout:
    """Random initial layout: uncovered edges get uniformly random placements."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    layout = Layout(graph, index)
    _fill_uncovered(layout, rng, weighted=False)
    return layout


def candidate_distribution(layout: Layout) -> dict[int, int]:
    """Operator step-3 sampling weights: placement id -> uncovered edges covered."""
    return dict(layout.cover_weight)


def _modify_inplace(layout: Layout, rng: random.Random) -> LocalChange:
    """The five-step operator, applied in place; returns the change made."""
    graph = layout.graph
    removed: list[LayoutBeam] = []
    n_edges = graph.edge_count
    n_uncovered = len(layout.uncovered)
    if n_edges > n_uncovered:
        # rejection-sample a covered edge; uncovered edges are few
        while True:
            edge = rng.randrange(n_edges)
            if edge not in layout.uncovered:
                break
        u, v = graph.edge_nodes(edge)
        doomed = sorted(set(layout.assoc.get(u, ()) + layout.assoc.get(v, ())))
        for uid in doomed:
            removed.append(layout.remove_beam(uid))
    added = _fill_uncovered(layout, rng, weighted=True)
    return LocalChange(removed=tuple(removed), added=tuple(added))


def modify_layout(
    layout: Layout,
    graph: GuidingGraph | None = None,
    index: PlacementIndex | None = None,
    rng: random.Random | int = 0,
) -> Layout:
    """Layout-modification operator on a copy; the input is untouched."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    out = layout.copy()
    _modify_inplace(out, rng)
    return out


def reorient_when_stable(
    layout: Layout, rng: random.Random
) -> LocalChange | None:
    """Propose a valid axis change for one random beam, or None.

    The change is built, not applied. Callers gate this on the annealer
    being below the mid temperature.
    """
    if not layout.beams:
        return None
    uids = sorted(layout.beams)
    uid = uids[rng.randrange(len(uids))]
    beam = layout.beams[uid]
    options = []
    for axis in ("X", "Y", "Z"):
        if axis == beam.axis:
            continue
        if revalidate_orientation(beam.placement, axis, layout.graph) is not None:
            options.append(axis)
    if not options:
        return None
    new_axis = options[rng.randrange(len(options))]
    return LocalChange(removed=(beam,), added=(replace(beam, axis=new_axis),))


@dataclass
class RefineResult:
    layout: Layout
    plan: ConnectionPlan
    breakdown: ObjectiveBreakdown
    iterations: int
    switch_iteration: int | None
    trace: list[tuple[int, str, float, float]] = field(default_factory=list)

    @property
    def gap_count(self) -> int:
        return self.breakdown.n_gap

    @property
    def beam_count(self) -> int:
        return len(self.layout.beams)


class Cancelled(Exception):
    """Raised from inside refine when the progress callback asks to stop."""


def refine(
    graph: GuidingGraph,
    index: PlacementIndex,
    weights: ObjectiveWeights,
    params: AnnealParams,
    catalog: Catalog,
    symmetry: SymmetryIndex | None = None,
    progress=None,
    trace_every: int = 500,
) -> RefineResult:
    """Iterative layout refinement (initialize, anneal, return the best).

    `progress`, when given, is called as progress(stage, t, best_total,
    iteration) roughly every `trace_every` iterations and may raise Cancelled.
    """
    rng = random.Random(params.rng_seed)
    connector = Connector(graph, catalog)
    current = initialize_layout(graph, index, rng)
    evaluator = IncrementalObjective(
        current, graph, weights, symmetry=symmetry, connector=None, simplified=True
    )
    current_total = evaluator.breakdown().total

    best = current.copy()
    best_total = current_total
    t = params.t_max
    switched = False
    switch_iteration = None
    iteration = 0
    trace: list[tuple[int, str, float, float]] = []

    while t > params.t_min:
        if not switched and t < params.t_mid:
            switched = True
            switch_iteration = iteration
            evaluator.switch_to_full(connector)
            current_total = evaluator.breakdown().total
            best = current.copy()
            best_total = current_total

        change = None
        if switched and params.reorient_prob > 0 and rng.random() < params.reorient_prob:
            change = reorient_when_stable(current, rng)
            if change is not None:
                current.apply(change)
        if change is None:
            change = _modify_inplace(current, rng)
        evaluator.notify(change)

        new_total = evaluator.breakdown().total
        delta = new_total - current_total
        if metropolis_accept(delta, t, rng):
            current_total = new_total
            if current_total < best_total:
                best = current.copy()
                best_total = current_total
        else:
            current.undo(change)
            evaluator.notify(change)

        iteration += 1
        if iteration % trace_every == 0 or t * params.r <= params.t_min:
            stage = "full" if switched else "simplified"
            trace.append((iteration, stage, t, best_total))
            if progress is not None:
                progress(stage, t, best_total, iteration)
        t *= params.r

    plan = connector(best)
    final = eval_full(best, graph, weights, connector, symmetry)
    return RefineResult(
        layout=best,
        plan=plan,
        breakdown=final,
        iterations=iteration,
        switch_iteration=switch_iteration,
        trace=trace,
    )
