"""Stage one: assign a principal hole orientation to every guiding-graph node.

Orientation variables live on symmetry-merged equivalence classes of nodes.
A simulated-annealing loop flips whole segments at a time and repairs the
attached junction nodes greedily; the result is decomposed into connected,
coplanar, uniform-orientation components that stage two works on.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .geometry import AXES, Vec, parallel_axis, perpendicular_axes, vsub
from .sketch import GuidingGraph, SymmetryIndex


class ConstraintConflictError(ValueError):
    def __init__(self, node_id: int, pos, message: str):
        super().__init__(f"node {node_id} at {pos}: {message}")
        self.node_id = node_id


@dataclass(frozen=True)
class SAParams:
    t_init: float = 2e3
    t_stop: float = 0.01
    cooling_rate: float | None = None  # defaults to 1 - 10/|V|
    rng_seed: int = 0
    greedy: bool = False  # accept only strictly improving moves


@dataclass(frozen=True)
class OrientationAssignment:
    axes: tuple[str, ...]  # per node id

    def axis(self, node_id: int) -> str:
        return self.axes[node_id]


@dataclass(frozen=True)
class Component:
    id: int
    nodes: frozenset[int]
    axis: str
    origin: Vec
    normal: str | None  # principal normal of the component plane, if 2D


@dataclass
class _SegmentInfo:
    id: str
    direction: Vec
    length: int
    node_ids: list[int]
    interior: list[int]


@dataclass
class OrientationModel:
    """Constraint structure: per-class allowed axes and fixed values."""

    graph: GuidingGraph
    segments: dict[str, _SegmentInfo]
    class_of: list[int]
    members: list[list[int]]
    allowed: list[tuple[str, ...]]
    fixed: list[str | None]
    junction_classes: set[int] = field(default_factory=set)


def _segment_infos(graph: GuidingGraph) -> dict[str, _SegmentInfo]:
    infos: dict[str, _SegmentInfo] = {}
    for seg_id, edge_ids in sorted(graph.edges_by_segment.items()):
        first = graph.edges[edge_ids[0]]
        direction = vsub(graph.nodes[first.v].pos, graph.nodes[first.u].pos)
        node_ids: set[int] = set()
        for eid in edge_ids:
            node_ids.add(graph.edges[eid].u)
            node_ids.add(graph.edges[eid].v)
        ordered = sorted(node_ids)
        interior = [n for n in ordered if not graph.nodes[n].junction]
        infos[seg_id] = _SegmentInfo(
            id=seg_id,
            direction=direction,
            length=len(edge_ids),
            node_ids=ordered,
            interior=interior,
        )
    return infos


def node_allowed_axes(graph: GuidingGraph, segments: dict[str, _SegmentInfo], node_id: int) -> tuple[str, ...]:
    """Axes a node may take under the perpendicularity constraint.

    Junction nodes are unconstrained. Interior nodes must be perpendicular to
    their segment, except on two-unit segments (a single interior hole), which
    may also align with the segment — a single-hole brick covers that node.
    """
    node = graph.nodes[node_id]
    if node.junction:
        return AXES
    out: set[str] = set()
    for seg_id in node.segments:
        info = segments[seg_id]
        perp = set(perpendicular_axes(info.direction))
        if info.length == 2:
            par = parallel_axis(info.direction)
            if par is not None:
                perp.add(par)
        out = perp if not out else (out & perp)
    return tuple(a for a in AXES if a in out)


def build_orientation_model(
    graph: GuidingGraph, symmetry: SymmetryIndex | None = None
) -> OrientationModel:
    n = graph.node_count
    segments = _segment_infos(graph)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if symmetry is not None:
        for a, b in symmetry.orientation_pairs():
            # principal-plane reflections and translations both preserve
            # unsigned axes, so symmetric nodes share one variable
            parent[find(a)] = find(b)

    roots = sorted({find(i) for i in range(n)})
    class_index = {r: k for k, r in enumerate(roots)}
    class_of = [class_index[find(i)] for i in range(n)]
    members: list[list[int]] = [[] for _ in roots]
    for i in range(n):
        members[class_of[i]].append(i)

    allowed: list[tuple[str, ...]] = []
    fixed: list[str | None] = []
    junction_classes: set[int] = set()
    for k, mem in enumerate(members):
        opts = set(AXES)
        forced: set[str] = set()
        for node_id in mem:
            node = graph.nodes[node_id]
            opts &= set(node_allowed_axes(graph, segments, node_id))
            forced.update(node.joint_axes)
            if node.hint_axis is not None:
                forced.add(node.hint_axis)
            if node.junction:
                junction_classes.add(k)
        if len(forced) > 1:
            nid = mem[0]
            raise ConstraintConflictError(
                nid, graph.nodes[nid].pos, f"conflicting forced axes {sorted(forced)}"
            )
        if forced:
            fval = forced.pop()
            node = graph.nodes[mem[0]]
            # joints on segment interiors must still be placeable there
            if fval not in opts and not all(graph.nodes[m].junction for m in mem):
                if node.joint_axis is not None or node.hint_axis is not None:
                    opts = {fval}  # annotation overrides the perpendicular rule
            if fval not in opts:
                opts = {fval}
            fixed.append(fval)
            allowed.append((fval,))
        else:
            if not opts:
                nid = mem[0]
                raise ConstraintConflictError(
                    nid,
                    graph.nodes[nid].pos,
                    "no principal axis satisfies the orientation constraints",
                )
            fixed.append(None)
            allowed.append(tuple(a for a in AXES if a in opts))
    return OrientationModel(
        graph=graph,
        segments=segments,
        class_of=class_of,
        members=members,
        allowed=allowed,
        fixed=fixed,
        junction_classes=junction_classes,
    )


def _assignment_from_classes(model: OrientationModel, values: list[str]) -> OrientationAssignment:
    return OrientationAssignment(
        axes=tuple(values[model.class_of[i]] for i in range(model.graph.node_count))
    )


def initial_assignment(
    graph: GuidingGraph,
    model: OrientationModel | None = None,
    rng: random.Random | None = None,
    symmetry: SymmetryIndex | None = None,
) -> OrientationAssignment:
    """A random assignment satisfying all constraints."""
    if model is None:
        model = build_orientation_model(graph, symmetry)
    rng = rng or random.Random(0)
    values = [
        model.fixed[k] if model.fixed[k] is not None else rng.choice(model.allowed[k])
        for k in range(len(model.members))
    ]
    return _assignment_from_classes(model, values)


def orientation_objective(assignment: OrientationAssignment, graph: GuidingGraph) -> int:
    """Number of edges whose endpoint orientations differ."""
    axes = assignment.axes
    return sum(1 for e in graph.edges if axes[e.u] != axes[e.v])


def validate_assignment(
    assignment: OrientationAssignment,
    graph: GuidingGraph,
    symmetry: SymmetryIndex | None = None,
) -> list[str]:
    """Standalone check of constraints (i)-(iv); empty list means valid."""
    problems: list[str] = []
    segments = _segment_infos(graph)
    axes = assignment.axes
    for node in graph.nodes:
        ax = axes[node.id]
        if ax not in AXES:
            problems.append(f"node {node.id}: non-principal axis {ax!r}")
            continue
        if node.joint_axis is not None and ax != node.joint_axis:
            problems.append(
                f"node {node.id}: joint axis {node.joint_axis} but assigned {ax}"
            )
            continue
        if node.hint_axis is not None and ax != node.hint_axis:
            problems.append(f"node {node.id}: hint axis {node.hint_axis} but assigned {ax}")
            continue
        if not node.junction:
            ok = node_allowed_axes(graph, segments, node.id)
            if ax not in ok:
                problems.append(
                    f"node {node.id}: axis {ax} not perpendicular to its segment"
                )
    # adjacent axes equal or perpendicular: always true for principal axes,
    # checked anyway to keep the validator self-contained
    for e in graph.edges:
        a, b = axes[e.u], axes[e.v]
        if a in AXES and b in AXES and a != b:
            pass  # distinct principal axes are perpendicular
    if symmetry is not None:
        for left, right in symmetry.orientation_pairs():
            if axes[left] != axes[right]:
                problems.append(
                    f"symmetry pair ({left},{right}): axes {axes[left]} != {axes[right]}"
                )
    return problems


def anneal_orientations(
    graph: GuidingGraph,
    symmetry: SymmetryIndex | None = None,
    params: SAParams | None = None,
) -> OrientationAssignment:
    """Per-segment annealing of hole orientations.

    Each move rewrites all non-junction nodes of a random segment to a common
    valid axis, then repairs attached junction nodes greedily (ties broken by
    the fixed X < Y < Z order). Moves pass a Metropolis test; the best valid
    assignment seen is returned.
    """
    params = params or SAParams()
    model = build_orientation_model(graph, symmetry)
    rng = random.Random(params.rng_seed)
    if graph.node_count == 0:
        return OrientationAssignment(axes=())

    values = [
        model.fixed[k] if model.fixed[k] is not None else rng.choice(model.allowed[k])
        for k in range(len(model.members))
    ]

    adjacency = graph.adjacency
    class_of = model.class_of

    def class_objective_edges(classes: set[int]) -> list[tuple[int, int]]:
        seen = set()
        for k in classes:
            for node in model.members[k]:
                for eid, other in adjacency[node]:
                    if eid not in seen:
                        seen.add(eid)
        return [(graph.edges[eid].u, graph.edges[eid].v) for eid in seen]

    def count_diffs(pairs) -> int:
        return sum(1 for u, v in pairs if values[class_of[u]] != values[class_of[v]])

    def repair_junction(k: int) -> None:
        if model.fixed[k] is not None:
            return
        pairs = class_objective_edges({k})
        best_axis, best_score = None, None
        for axis in model.allowed[k]:  # AXES order: deterministic tie-break
            values[k] = axis
            score = count_diffs(pairs)
            if best_score is None or score < best_score:
                best_axis, best_score = axis, score
        values[k] = best_axis

    current_objective = orientation_objective(
        _assignment_from_classes(model, values), graph
    )
    best_values = list(values)
    best_objective = current_objective

    seg_ids = sorted(model.segments)
    movable = [
        s
        for s in seg_ids
        if any(
            model.fixed[class_of[n]] is None and len(model.allowed[class_of[n]]) > 1
            for n in model.segments[s].interior
        )
    ]
    if not movable:
        return _assignment_from_classes(model, values)

    t = params.t_init
    cooling = params.cooling_rate
    if cooling is None:
        cooling = 1.0 - 10.0 / max(graph.node_count, 11)

    while t > params.t_stop:
        seg = model.segments[rng.choice(movable)]
        flip_classes = sorted(
            {
                class_of[n]
                for n in seg.interior
                if model.fixed[class_of[n]] is None and len(model.allowed[class_of[n]]) > 1
            }
        )
        if not flip_classes:
            t *= cooling
            continue
        shared = set(model.allowed[flip_classes[0]])
        for k in flip_classes[1:]:
            shared &= set(model.allowed[k])
        current = {values[k] for k in flip_classes}
        if len(current) == 1:
            shared -= current  # skip no-op flips
        options = [a for a in AXES if a in shared]
        if not options:
            t *= cooling
            continue
        new_axis = rng.choice(options)

        junction_classes = sorted(
            {
                class_of[other]
                for k in flip_classes
                for node in model.members[k]
                for _, other in adjacency[node]
                if class_of[other] in model.junction_classes
            }
        )
        affected = set(flip_classes) | set(junction_classes)
        local_pairs = class_objective_edges(affected)

        saved = {k: values[k] for k in affected}
        before = count_diffs(local_pairs)
        for k in flip_classes:
            values[k] = new_axis
        for k in junction_classes:
            repair_junction(k)
        after = count_diffs(local_pairs)
        delta = after - before

        if params.greedy:
            accept = delta < 0
        else:
            accept = delta <= 0 or math.exp(-delta / t) > rng.random()
        if accept:
            current_objective += delta
            if current_objective < best_objective:
                best_objective = current_objective
                best_values = list(values)
        else:
            for k, v in saved.items():
                values[k] = v
        t *= cooling

    # deterministic polish: flip whole segments while that strictly improves
    values = best_values
    improved = True
    sweeps = 0
    while improved and sweeps < 20:
        improved = False
        sweeps += 1
        for seg_id in movable:
            seg = model.segments[seg_id]
            flip_classes = sorted(
                {
                    class_of[n]
                    for n in seg.interior
                    if model.fixed[class_of[n]] is None
                    and len(model.allowed[class_of[n]]) > 1
                }
            )
            if not flip_classes:
                continue
            shared = set(model.allowed[flip_classes[0]])
            for k in flip_classes[1:]:
                shared &= set(model.allowed[k])
            junction_classes = sorted(
                {
                    class_of[other]
                    for k in flip_classes
                    for node in model.members[k]
                    for _, other in adjacency[node]
                    if class_of[other] in model.junction_classes
                }
            )
            affected = set(flip_classes) | set(junction_classes)
            local_pairs = class_objective_edges(affected)
            saved = {k: values[k] for k in affected}
            before = count_diffs(local_pairs)
            best_axis, best_after = None, before
            for axis in AXES:
                if axis not in shared:
                    continue
                for k in flip_classes:
                    values[k] = axis
                for k in junction_classes:
                    repair_junction(k)
                after = count_diffs(local_pairs)
                if after < best_after:
                    best_axis, best_after = axis, after
                for k, v in saved.items():
                    values[k] = v
            if best_axis is not None:
                for k in flip_classes:
                    values[k] = best_axis
                for k in junction_classes:
                    repair_junction(k)
                improved = True

    return _assignment_from_classes(model, values)


def solve_orientations(
    graph: GuidingGraph,
    symmetry: SymmetryIndex | None = None,
    params: SAParams | None = None,
    attempts: int = 5,
) -> OrientationAssignment:
    """Best-of-N annealing runs (seeds derived from the base seed)."""
    params = params or SAParams()
    best, best_obj = None, None
    for i in range(max(attempts, 1)):
        run = SAParams(
            t_init=params.t_init,
            t_stop=params.t_stop,
            cooling_rate=params.cooling_rate,
            rng_seed=params.rng_seed + i,
            greedy=params.greedy,
        )
        a = anneal_orientations(graph, symmetry, run)
        obj = orientation_objective(a, graph)
        if best_obj is None or obj < best_obj:
            best, best_obj = a, obj
        if best_obj == 0:
            break  # zero differing pairs is globally optimal
    return best


def decompose_components(
    graph: GuidingGraph, assignment: OrientationAssignment
) -> list[Component]:
    """Partition nodes into maximal connected, coplanar, same-axis components."""
    axes = assignment.axes
    unassigned = set(range(graph.node_count))
    components: list[Component] = []

    def coplanar_add(span: dict, pos: Vec) -> bool:
        # span tracks an affine basis of at most two directions
        if span["origin"] is None:
            span["origin"] = pos
            return True
        off = vsub(pos, span["origin"])
        if all(abs(c) < 1e-9 for c in off):
            return True
        if span["d1"] is None:
            span["d1"] = off
            return True
        d1 = span["d1"]
        cross = (
            d1[1] * off[2] - d1[2] * off[1],
            d1[2] * off[0] - d1[0] * off[2],
            d1[0] * off[1] - d1[1] * off[0],
        )
        if all(abs(c) < 1e-9 for c in cross):
            return True
        if span["normal"] is None:
            span["normal"] = cross
            return True
        n = span["normal"]
        ncross = (
            n[1] * cross[2] - n[2] * cross[1],
            n[2] * cross[0] - n[0] * cross[2],
            n[0] * cross[1] - n[1] * cross[0],
        )
        return all(abs(c) < 1e-9 for c in ncross)

    for start in range(graph.node_count):
        if start not in unassigned:
            continue
        axis = axes[start]
        span = {"origin": None, "d1": None, "normal": None}
        comp_nodes = set()
        frontier = [start]
        coplanar_add(span, graph.nodes[start].pos)
        comp_nodes.add(start)
        unassigned.discard(start)
        while frontier:
            node = frontier.pop()
            for _, other in graph.adjacency[node]:
                if other not in unassigned or axes[other] != axis:
                    continue
                if not coplanar_add(span, graph.nodes[other].pos):
                    continue
                comp_nodes.add(other)
                unassigned.discard(other)
                frontier.append(other)
        normal_axis = None
        if span["normal"] is not None:
            from .geometry import axis_of_vector

            normal_axis = axis_of_vector(span["normal"])
        components.append(
            Component(
                id=len(components),
                nodes=frozenset(comp_nodes),
                axis=axis,
                origin=graph.nodes[min(comp_nodes)].pos,
                normal=normal_axis,
            )
        )
    return components


def component_symmetry_pairs(
    components: list[Component], symmetry: SymmetryIndex
) -> list[tuple[int, int, int]]:
    """(left component, right component, group index) correspondences."""
    comp_of = {}
    for comp in components:
        for n in comp.nodes:
            comp_of[n] = comp.id
    out = set()
    for g in symmetry.groups:
        for left, right in g.node_pairs:
            out.add((comp_of[left], comp_of[right], g.index))
    return sorted(out)
