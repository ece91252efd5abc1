"""Grid benchmark: four comparison search methods over n-by-n grid sketches.

All methods consume the exact same placement index and gap definition as the
main annealer; they differ only in search strategy. Results carry the gap
count (independently recountable), beam count, and wall-clock seconds.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass

from .catalog import Catalog, default_catalog
from .engine import AnnealParams, _modify_inplace, initialize_layout, refine
from .fixtures import grid_sketch
from .layout import Layout, choose_layer
from .objective import ObjectiveWeights, direct_rigid_pairs, gap_at, rigid_partition
from .orientation import SAParams, decompose_components, solve_orientations
from .placements import PlacementIndex, index_placements
from .sketch import GuidingGraph, Sketch, build_guiding_graph, parse_sketch

BENCH_MAX_BEAM = 15


@dataclass(frozen=True)
class GridSpec:
    n: int
    cell: int = 4

    def __post_init__(self):
        if not 1 <= self.n <= 10:
            raise ValueError(f"grid size n must be in 1..10, got {self.n}")


@dataclass
class BenchResult:
    method: str
    n: int
    gaps: int
    beam_count: int
    seconds: float
    seed: int
    total_length: int = 0
    uncovered: int = 0
    proposals: int = 0

    def row(self) -> dict:
        return {
            "method": self.method,
            "n": self.n,
            "gaps": self.gaps,
            "beams": self.beam_count,
            "seconds": round(self.seconds, 3),
            "seed": self.seed,
            "total_length": self.total_length,
            "uncovered": self.uncovered,
        }


def make_grid_sketch(spec: GridSpec) -> Sketch:
    return parse_sketch(grid_sketch(spec.n, spec.cell))


def build_bench_index(
    n: int, catalog: Catalog | None = None, max_beam_length: int = BENCH_MAX_BEAM
) -> tuple[GuidingGraph, PlacementIndex, Catalog]:
    """Shared setup: grid sketch, stage-one solve, straight-beam index."""
    catalog = catalog or default_catalog()
    graph = build_guiding_graph(make_grid_sketch(GridSpec(n)))
    assignment = solve_orientations(graph, None, SAParams(rng_seed=0))
    components = decompose_components(graph, assignment)
    index = index_placements(
        components, graph, catalog, assignment,
        max_beam_length=max_beam_length, straight_only=True,
    )
    return graph, index, catalog


def recount_gaps(layout: Layout) -> int:
    """Independent gap recount over the final layout."""
    return sum(gap_at(n.id, layout) for n in layout.graph.nodes)


def _bench_score(layout: Layout) -> tuple[int, int, int]:
    return (len(layout.uncovered), layout.gap_sum, layout.sum_length)


def _result(method, n, layout, seconds, seed) -> BenchResult:
    return BenchResult(
        method=method,
        n=n,
        gaps=recount_gaps(layout),
        beam_count=len(layout.beams),
        seconds=seconds,
        seed=seed,
        total_length=layout.sum_length,
        uncovered=len(layout.uncovered),
    )


def run_random(
    graph: GuidingGraph, index: PlacementIndex, seed: int = 0, n: int | None = None,
    weights: ObjectiveWeights | None = None,
) -> BenchResult:
    """Random search: apply the modification operator 50000*n times, keeping
    the layout that scores best under the simplified objective."""
    if n is None:
        n = _grid_n(graph)
    weights = weights or ObjectiveWeights.preset("simple")
    rng = random.Random(seed)
    t0 = time.perf_counter()
    layout = initialize_layout(graph, index, rng)
    best = layout.copy()
    best_score = _partial_score(layout, weights)
    proposals = 0
    for _ in range(50000 * n):
        _modify_inplace(layout, rng)
        proposals += 1
        score = _partial_score(layout, weights)
        if score < best_score:
            best = layout.copy()
            best_score = score
    out = _result("random", n, best, time.perf_counter() - t0, seed)
    out.proposals = proposals
    return out


def _grid_n(graph: GuidingGraph) -> int:
    import math

    junctions = sum(1 for v in graph.nodes if v.junction)
    return max(int(round(math.sqrt(junctions))) - 1, 1)


def run_greedy(graph: GuidingGraph, index: PlacementIndex, n: int | None = None) -> BenchResult:
    """Greedy cover: repeatedly add the placement covering the most uncovered
    edges (ties: longer beam, then lexicographic), until no progress."""
    if n is None:
        n = _grid_n(graph)
    t0 = time.perf_counter()
    layout = Layout(graph, index)
    placements = index.placements
    while layout.uncovered:
        best_pid, best_key = None, None
        for pid, p in enumerate(placements):
            covered = len(layout.uncovered.intersection(p.covered_edges))
            if covered == 0:
                continue
            key = (-covered, -p.length, p.brick_id, p.nodes)
            if best_key is None or key < best_key:
                best_pid, best_key = pid, key
        if best_pid is None:
            break
        p = placements[best_pid]
        layer, _ = choose_layer(layout, p)
        layout.add_beam(p, layer)
    return _result("greedy", n, layout, time.perf_counter() - t0, 0)


def _partial_score(layout: Layout, weights: ObjectiveWeights) -> float:
    """F0-style score for partial layouts (no collision/coherence terms)."""
    graph = layout.graph
    nv = graph.node_count or 1
    import math as _m

    f_dev = (
        _m.sqrt(layout.sum_len_l2 / layout.sum_length) if layout.sum_length else 0.0
    )
    worst = 0
    for layers in layout.comp_layers.values():
        if layers:
            r = max(layers) - min(layers)
            worst = max(worst, r)
    _, rigid = direct_rigid_pairs(layout)
    subsets = rigid_partition(layout, graph, rigid)
    denom = max(sum((graph.degree(v.id) - 1) ** 2 for v in graph.nodes), 1)
    return (
        weights.w_dev * f_dev
        + weights.w_cpt * worst * worst
        + weights.w_tbl * layout.sum_length / nv
        + weights.w_gap * layout.gap_sum / nv
        + weights.w_rgd * len(subsets) / denom
    )


def _partial_key(layout: Layout, weights: ObjectiveWeights) -> tuple:
    """Gap-first ranking used by the constructive baselines."""
    return (layout.gap_sum, _partial_score(layout, weights))


def run_beam_search(
    graph: GuidingGraph,
    index: PlacementIndex,
    width: int = 75,
    n: int | None = None,
    branch: int = 6,
    depth: int = 3,
    weights: ObjectiveWeights | None = None,
) -> BenchResult:
    """Beam search over partial layouts with a depth-limited lookahead.

    Expansions are ranked (gaps first, then the simplified objective) by the
    score of their best greedy descendant a few plies down, and the `width`
    best partials survive each level.
    """
    if n is None:
        n = _grid_n(graph)
    weights = weights or ObjectiveWeights.preset("simple")
    t0 = time.perf_counter()

    def top_candidates(layout: Layout) -> list[int]:
        scored = {}
        for e in layout.uncovered:
            for pid in index.by_edge.get(e, ()):
                if pid not in scored:
                    p = index.placements[pid]
                    cov = len(layout.uncovered.intersection(p.covered_edges))
                    scored[pid] = (-cov, -p.length, p.brick_id, p.nodes)
        ranked = sorted(scored, key=lambda pid: scored[pid])
        # diversify across beam lengths so the tree is not all longest beams
        out: list[int] = []
        per_len: dict[int, int] = {}
        for pid in ranked:
            m = index.placements[pid].length
            if per_len.get(m, 0) >= 2:
                continue
            per_len[m] = per_len.get(m, 0) + 1
            out.append(pid)
            if len(out) >= branch:
                break
        return out

    def rollout_key(layout: Layout, plies: int) -> tuple:
        probe = layout.copy()
        for _ in range(plies):
            cands = top_candidates(probe)
            if not cands:
                break
            best_pid, best_key = None, None
            for pid in cands[:3]:
                p = index.placements[pid]
                layer, cols = choose_layer(probe, p)
                trial = probe.copy()
                trial.add_beam(p, layer)
                key = _partial_key(trial, weights)
                if best_key is None or key < best_key:
                    best_pid, best_key = pid, key
            p = index.placements[best_pid]
            layer, _ = choose_layer(probe, p)
            probe.add_beam(p, layer)
        return _partial_key(probe, weights)

    frontier = [Layout(graph, index)]
    complete: list[Layout] = []
    guard = 0
    while frontier and guard < 10000:
        guard += 1
        expansions = []
        for layout in frontier:
            cands = top_candidates(layout)
            if not cands:
                complete.append(layout)
                continue
            for pid in cands:
                p = index.placements[pid]
                layers = (0,) if p.layer0_only else (0, -1, 1)
                for layer in layers:
                    child = layout.copy()
                    child.add_beam(p, layer)
                    look = rollout_key(child, depth - 1)
                    expansions.append((look, _partial_key(child, weights), child))
        if not expansions:
            break
        expansions.sort(key=lambda t: (t[0], t[1]))
        seen = set()
        frontier = []
        for look, _score, child in expansions:
            key = frozenset(
                (b.placement.id, b.layer) for b in child.beams.values()
            )
            if key in seen:
                continue
            seen.add(key)
            frontier.append(child)
            if len(frontier) >= width:
                break
    pool = complete + frontier
    best = min(pool, key=lambda l: (len(l.uncovered),) + _partial_key(l, weights))
    return _result("beam-search", n, best, time.perf_counter() - t0, 0)


def run_ant_colony(
    graph: GuidingGraph,
    index: PlacementIndex,
    seed: int = 0,
    n: int | None = None,
    ants: int = 24,
    evaporation: float = 0.1,
    alpha: float = 1.0,
    beta: float = 1.0,
    iterations: int | None = None,
    patience: int = 120,
) -> BenchResult:
    """Ant-colony set cover with layering by the compactness rule.

    Pheromone lives on placements; ants build covers with probability
    proportional to pheromone^alpha * (newly covered edges)^beta; the best
    ant of each iteration deposits, the trail evaporates at the given rate.
    """
    if n is None:
        n = _grid_n(graph)
    if iterations is None:
        iterations = 90 * n
    rng = random.Random(seed)
    t0 = time.perf_counter()
    tau = [1.0] * len(index.placements)

    from .engine import _blocked_targets, _target_edges

    def construct() -> Layout:
        layout = Layout(graph, index)
        while True:
            targets = _target_edges(layout)
            if not targets:
                targets = _blocked_targets(layout)
            if not targets:
                break
            cands: list[int] = []
            seen = set()
            for e in targets:
                for pid in index.by_edge[e]:
                    if pid not in seen:
                        seen.add(pid)
                        cands.append(pid)
            cands.sort()
            weights_ = []
            for pid in cands:
                cov = len(
                    layout.uncovered.intersection(index.placements[pid].covered_edges)
                )
                weights_.append((tau[pid] ** alpha) * (cov ** beta))
            pid = rng.choices(cands, weights=weights_)[0]
            p = index.placements[pid]
            layer, _ = choose_layer(layout, p, rng=rng)
            layout.add_beam(p, layer)
        return layout

    bench_weights = ObjectiveWeights.preset("simple")
    best: Layout | None = None
    best_score = None
    stale = 0
    for _ in range(iterations):
        iter_best, iter_best_score = None, None
        for _a in range(ants):
            ant = construct()
            score = _partial_key(ant, bench_weights)
            if iter_best_score is None or score < iter_best_score:
                iter_best, iter_best_score = ant, score
        for i in range(len(tau)):
            tau[i] *= 1.0 - evaporation
            if tau[i] < 1e-6:
                tau[i] = 1e-6
        quality = 100.0 / (1.0 + 5.0 * iter_best_score[0] + iter_best_score[1])
        for b in iter_best.beams.values():
            tau[b.placement.id] += quality
        if best_score is None or iter_best_score < best_score:
            best, best_score = iter_best, iter_best_score
            stale = 0
        else:
            stale += 1
            if stale >= patience:
                break
    return _result("ant-colony", n, best, time.perf_counter() - t0, seed)


def run_ours(
    graph: GuidingGraph,
    index: PlacementIndex,
    catalog: Catalog,
    seed: int = 0,
    n: int | None = None,
    cooling_rate: float = 0.99997,
    weights: ObjectiveWeights | None = None,
) -> BenchResult:
    """The two-stage annealer, reported with the bench metrics."""
    if n is None:
        n = _grid_n(graph)
    weights = weights or ObjectiveWeights.preset("simple")
    t0 = time.perf_counter()
    res = refine(
        graph, index, weights,
        AnnealParams(r=cooling_rate, rng_seed=seed),
        catalog,
    )
    out = _result("ours", n, res.layout, time.perf_counter() - t0, seed)
    return out


METHODS = {
    "ours": run_ours,
    "greedy": run_greedy,
    "random": run_random,
    "beam-search": run_beam_search,
    "ant-colony": run_ant_colony,
}


def bench_report(results: list[BenchResult]) -> list[dict]:
    """Rows grouped by method then n (then seed)."""
    rows = [r.row() for r in results]
    rows.sort(key=lambda r: (r["method"], r["n"], r["seed"]))
    return rows


def report_csv(results: list[BenchResult]) -> str:
    rows = bench_report(results)
    out = io.StringIO()
    writer = csv.DictWriter(
        out,
        fieldnames=[
            "method", "n", "gaps", "beams", "seconds", "seed",
            "total_length", "uncovered",
        ],
    )
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()


def parse_report_csv(text: str) -> list[dict]:
    rows = []
    for raw in csv.DictReader(io.StringIO(text)):
        rows.append(
            {
                "method": raw["method"],
                "n": int(raw["n"]),
                "gaps": int(raw["gaps"]),
                "beams": int(raw["beams"]),
                "seconds": float(raw["seconds"]),
                "seed": int(raw["seed"]),
                "total_length": int(raw["total_length"]),
                "uncovered": int(raw["uncovered"]),
            }
        )
    return rows
