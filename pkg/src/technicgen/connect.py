"""Connection synthesis: join adjacent beams with pins and mechanisms.

Two passes build a ConnectionPlan:

1. Direct joins. Wherever two same-axis beams hold holes one unit apart along
   that axis, a pin (or axle pin, per hole types) is dropped in; up to two
   columns per beam pair, except at annotated joints, which get exactly one
   rotatable pin to act as the hinge.

2. Group mechanisms. Uncovered edges are grouped by adjacency; beam holes
   within sqrt(3) units of a group are collected, every mechanism pose whose
   heads land on matching free holes is enumerated, and a minimal subset of
   at most three mechanisms connecting all the group's beams is chosen,
   maximizing summed pin-head ratio, then fewest bricks. Mechanism cells may
   not collide with beams or each other, may not dip below the ground plane,
   may not claim pass-through (reserved) holes, and may not bridge across an
   annotated joint. Groups with no workable subset count as connection
   failures.

The plan is a pure function of the layout state; the connector's caches only
accelerate recomputation, they never change results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .catalog import Catalog, MechanismPose
from .geometry import Vec
from .layout import Layout
from .sketch import GuidingGraph

SQRT3 = math.sqrt(3.0)
GROUND_Z = 0.0


@dataclass(frozen=True)
class ConnectionUse:
    mechanism_id: str
    rho: float
    heads: tuple[tuple[Vec, str, str, int], ...]  # (cell, axis, holeType, beam uid)
    body_cells: tuple[Vec, ...]
    beams: tuple[int, ...]
    rigid_heads: bool  # any axle engagement
    joint: bool = False

    @property
    def head_cells(self) -> tuple[Vec, ...]:
        return tuple(h[0] for h in self.heads)

    @property
    def cells(self) -> tuple[Vec, ...]:
        return self.head_cells + self.body_cells

    @property
    def brick_count(self) -> int:
        return 1


@dataclass(frozen=True)
class GroupResult:
    edges: tuple[int, ...]
    beams: tuple[int, ...]
    connected: bool
    use_indexes: tuple[int, ...]


@dataclass(frozen=True)
class ConnectionPlan:
    uses: tuple[ConnectionUse, ...]
    groups: tuple[GroupResult, ...]
    n_cfail: int
    rho_bar: float
    connected_pairs: frozenset
    rigid_pairs: frozenset


def _beam_key(beam) -> tuple:
    return (beam.placement.id, beam.layer, beam.axis)


def _unconnected_adjacent(layout: Layout, records) -> int:
    """Adjacent beam pairs (sharing or neighboring a node) left unjoined.

    Connectivity is transitive over the plan's uses: a stack's top and
    bottom count as connected through the middle beam.
    """
    if not layout.adj_pairs:
        return 0
    parent: dict[int, int] = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for uid in layout.beams:
        parent[uid] = uid
    for _heads, beams, _rigid, _joint, _rho in records:
        distinct = sorted(set(beams))
        for b1, b2 in zip(distinct, distinct[1:]):
            parent[find(b1)] = find(b2)
    failures = 0
    for a, b in layout.adj_pairs:
        if find(a) != find(b):
            failures += 1
    return failures


def _pair_flags(records) -> frozenset:
    """Rigid beam pairs from connection records.

    Each record is (heads=((cell, beam), ...), beams, rigid_heads, joint, rho).
    A pair is rigid when joined through an axle head or through two or more
    distinct holes on each side; pairs hinging at an annotated joint never are.
    """
    pair_info: dict[tuple[int, int], list] = {}
    for heads, beams, rigid_heads, joint, _rho in records:
        distinct = sorted(set(beams))
        for b1, b2 in combinations(distinct, 2):
            rec = pair_info.setdefault((b1, b2), [set(), set(), False, False])
            for cell, beam in heads:
                if beam == b1:
                    rec[0].add(cell)
                elif beam == b2:
                    rec[1].add(cell)
            rec[2] = rec[2] or rigid_heads
            rec[3] = rec[3] or joint
    return frozenset(
        pair
        for pair, (h1, h2, rigid, joint) in pair_info.items()
        if not joint and (rigid or (len(h1) >= 2 and len(h2) >= 2))
    )


class Connector:
    """Callable layout -> ConnectionPlan with cross-call memoization."""

    def __init__(self, graph: GuidingGraph, catalog: Catalog):
        self.graph = graph
        self.catalog = catalog
        self._poses: list[tuple[str, float, MechanismPose]] = []
        for mid in sorted(catalog.mechanisms):
            mech = catalog.mechanisms[mid]
            rho = float(mech.rho)
            for pose in catalog.poses(mid):
                self._poses.append((mid, rho, pose))
        self._candidate_memo: dict[tuple, tuple] = {}
        reserved = set()
        for n in graph.nodes:
            if n.segments & graph.pass_through_segments:
                reserved.add(n.id)
        self._reserved_nodes = frozenset(reserved)
        self._joint_nodes = frozenset(
            n.id for n in graph.nodes if n.is_joint
        )

    # -- direct pin joins ----------------------------------------------------

    def _pin_picks(self, layout: Layout, used: set):
        """Chosen pin columns per pair: (pairkey, column, mech_id, rigid, joint).

        Deterministic over beam geometry keys; fills `used` with the claimed
        (beam, cell) holes. Shared by the summary and full-plan paths.
        """
        beams = layout.beams

        def pair_key(k):
            a, b = _beam_key(beams[k[0]]), _beam_key(beams[k[1]])
            return (a, b) if a <= b else (b, a)

        picks_out = []
        order = sorted(layout.pin_cols, key=lambda k: (pair_key(k), k))
        for key in order:
            cols = sorted(layout.pin_cols[key])
            joint_pair = any(c[6] for c in cols)
            if joint_pair:
                cols = [c for c in cols if c[6]]
            avail = [
                c
                for c in cols
                if (c[2], c[0]) not in used and (c[3], c[1]) not in used
            ]
            if not avail:
                continue
            if joint_pair or len(avail) == 1:
                picks = (avail[0],)
            else:
                picks = (avail[0], avail[-1])  # spread to the ends
            for c in picks:
                cell, above, lo, hi, ht_lo, ht_hi, joint = c
                if joint:
                    mech_id, rigid = "2780", False
                elif ht_lo == "axle" and ht_hi == "axle":
                    mech_id, rigid = "3704", True
                elif ht_lo == "axle" or ht_hi == "axle":
                    mech_id, rigid = "43093", True
                else:
                    mech_id, rigid = "2780", False
                if mech_id not in self.catalog.mechanisms:
                    continue
                used.add((lo, cell))
                used.add((hi, above))
                picks_out.append((key, c, mech_id, rigid))
        return picks_out

    def _direct_joins(self, layout: Layout, used: set):
        uses: list[ConnectionUse] = []
        beams = layout.beams
        for key, c, mech_id, rigid in self._pin_picks(layout, used):
            cell, above, lo, hi, ht_lo, ht_hi, joint = c
            axis = beams[lo].axis
            uses.append(
                ConnectionUse(
                    mechanism_id=mech_id,
                    rho=float(self.catalog.mechanisms[mech_id].rho),
                    heads=(
                        (cell, axis, ht_lo, lo),
                        (above, axis, ht_hi, hi),
                    ),
                    body_cells=(),
                    beams=key,
                    rigid_heads=rigid,
                    joint=joint,
                )
            )
        return uses

    def summary(self, layout: Layout) -> tuple[float, int, frozenset]:
        """(rho_bar, n_cfail, rigid_pairs) without building pin use objects.

        Agrees exactly with __call__ on the same layout: the same pin picks,
        group solves, and pair-flag rule run over lightweight records.
        """
        used: set = set()
        records = []  # (heads=(…,(cell, beam)…), beams, rigid_heads, joint, rho)
        for key, c, _mech_id, rigid in self._pin_picks(layout, used):
            cell, above, lo, hi, _tl, _th, joint = c
            records.append((((cell, lo), (above, hi)), key, rigid, joint, 1.0))
        if layout.uncovered:
            direct_pairs = {r[1] for r in records}
            placed_cells: set = set()
            for group in self._edge_groups(layout):
                ok, group_uses, _beams = self._solve_group(
                    layout, used, group, direct_pairs, placed_cells
                )
                if not ok:
                    continue
                for u in group_uses:
                    for cell, _a, _t, beam in u.heads:
                        used.add((beam, cell))
                    placed_cells.update(u.cells)
                    records.append(
                        (
                            tuple((cell, beam) for cell, _a, _t, beam in u.heads),
                            u.beams,
                            u.rigid_heads,
                            u.joint,
                            u.rho,
                        )
                    )
        rigid_pairs = _pair_flags(records)
        n_cfail = _unconnected_adjacent(layout, records)
        n_uses = len(records)
        rho_bar = (sum(r[4] for r in records) / n_uses) if n_uses else 1.0
        return rho_bar, n_cfail, rigid_pairs

    # -- uncovered-edge groups -------------------------------------------------

    def _edge_groups(self, layout: Layout) -> list[tuple[int, ...]]:
        uncovered = sorted(layout.uncovered)
        if not uncovered:
            return []
        parent = {e: e for e in uncovered}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_node: dict[int, int] = {}
        for e in uncovered:
            u, v = self.graph.edge_nodes(e)
            for n in (u, v):
                if n in by_node:
                    parent[find(e)] = find(by_node[n])
                else:
                    by_node[n] = e
        groups: dict[int, list[int]] = {}
        for e in uncovered:
            groups.setdefault(find(e), []).append(e)
        return [tuple(sorted(g)) for _, g in sorted(groups.items())]

    def _nearby_holes(self, layout: Layout, used: set, node_ids):
        """Free candidate holes within sqrt(3) of the group's nodes."""
        node_pos = [self.graph.nodes[n].pos for n in node_ids]
        lo = (min(p[0] for p in node_pos) - SQRT3 - 1e-6,
              min(p[1] for p in node_pos) - SQRT3 - 1e-6,
              min(p[2] for p in node_pos) - SQRT3 - 1e-6)
        hi = (max(p[0] for p in node_pos) + SQRT3 + 1e-6,
              max(p[1] for p in node_pos) + SQRT3 + 1e-6,
              max(p[2] for p in node_pos) + SQRT3 + 1e-6)
        out = []
        for cell, recs in layout.cells.items():
            if not (lo[0] <= cell[0] <= hi[0] and lo[1] <= cell[1] <= hi[1]
                    and lo[2] <= cell[2] <= hi[2]):
                continue
            near = False
            for p in node_pos:
                dx = cell[0] - p[0]
                dy = cell[1] - p[1]
                dz = cell[2] - p[2]
                if dx * dx + dy * dy + dz * dz <= 3.0 + 1e-9:
                    near = True
                    break
            if not near:
                continue
            for uid, node, htype, axis in recs:
                if (uid, cell) in used:
                    continue
                if node in self._reserved_nodes or node in self._joint_nodes:
                    continue
                out.append((cell, axis, htype, uid, node))
        out.sort()
        return out

    def _head_candidates(self, nearby) -> tuple:
        """Mechanism uses whose heads all land on distinct candidate holes.

        Memoized on the hole signature alone; body-cell blocking is checked
        by the caller against the live layout.
        """
        sig = tuple((c, a, t, n) for c, a, t, _uid, n in nearby)
        got = self._candidate_memo.get(sig)
        if got is not None:
            return got

        hole_at: dict[tuple[Vec, str], list] = {}
        for i, (cell, axis, htype, _uid, node) in enumerate(nearby):
            hole_at.setdefault((cell, axis), []).append((htype, i))

        found: dict[tuple, tuple] = {}
        for mid, rho, pose in self._poses:
            slots = pose.head_slots
            first = slots[0]
            for cell, axis, htype, _uid, _node in nearby:
                if axis != first.axis or htype != first.head_type:
                    continue
                ax = cell[0] - first.at[0]
                ay = cell[1] - first.at[1]
                az = cell[2] - first.at[2]
                assignment = []
                taken = set()
                ok = True
                for slot in slots:
                    at = (slot.at[0] + ax, slot.at[1] + ay, slot.at[2] + az)
                    if at[2] < GROUND_Z - 1e-9:
                        ok = False
                        break
                    pick = None
                    for htype2, i in hole_at.get((at, slot.axis), ()):
                        if htype2 == slot.head_type and i not in taken:
                            pick = i
                            break
                    if pick is None:
                        ok = False
                        break
                    taken.add(pick)
                    assignment.append((at, slot.axis, slot.head_type, pick))
                if not ok:
                    continue
                bodies = []
                grounded = True
                for bc in pose.body_cells:
                    at = (bc[0] + ax, bc[1] + ay, bc[2] + az)
                    if at[2] < GROUND_Z - 1e-9:
                        grounded = False
                        break
                    bodies.append(at)
                if not grounded:
                    continue
                key = (mid, tuple(sorted(a[3] for a in assignment)), tuple(sorted(bodies)))
                if key not in found:
                    found[key] = (mid, rho, tuple(assignment), tuple(bodies))
        out = tuple(
            sorted(
                found.values(),
                key=lambda u: (-u[1], len(u[2]) + len(u[3]), u[0], u[2]),
            )[:48]
        )
        self._candidate_memo[sig] = out
        return out

    def _solve_group(
        self,
        layout: Layout,
        used: set,
        group: tuple[int, ...],
        direct_pairs: set,
        placed_cells: set,
    ):
        graph = self.graph
        node_ids = sorted({n for e in group for n in graph.edge_nodes(e)})
        nearby = self._nearby_holes(layout, used, node_ids)
        group_beams = sorted({h[3] for h in nearby})
        if len(group_beams) < 2:
            return False, [], tuple(group_beams)

        raw = self._head_candidates(nearby)

        # materialize against the live layout: map hole indexes back to beams,
        # drop candidates whose bodies hit beams or already-placed mechanisms
        beam_joint_cache: dict[int, frozenset] = {}

        def joints_of(uid):
            got = beam_joint_cache.get(uid)
            if got is None:
                got = frozenset(
                    n
                    for n in layout.beams[uid].placement.nodes
                    if n in self._joint_nodes
                )
                beam_joint_cache[uid] = got
            return got

        candidates: list[ConnectionUse] = []
        for mid, rho, assignment, bodies in raw:
            blocked = False
            for bc in bodies:
                if bc in layout.cells or bc in placed_cells:
                    blocked = True
                    break
            if blocked:
                continue
            heads = tuple(
                (at, axis, ht, nearby[i][3]) for at, axis, ht, i in assignment
            )
            beams = sorted({h[3] for h in heads})
            if len(beams) < 2:
                continue
            if any(
                joints_of(b1) & joints_of(b2)
                for b1, b2 in combinations(beams, 2)
            ):
                continue
            candidates.append(
                ConnectionUse(
                    mechanism_id=mid,
                    rho=rho,
                    heads=heads,
                    body_cells=bodies,
                    beams=tuple(beams),
                    rigid_heads=any(h[2] == "axle" for h in heads),
                )
            )

        chosen = self._pick_subset(candidates, group_beams, direct_pairs)
        return chosen is not None, (chosen or []), tuple(group_beams)

    def _pick_subset(self, candidates, group_beams, direct_pairs):
        base_parent = {b: b for b in group_beams}

        def find(parent, x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in direct_pairs:
            if a in base_parent and b in base_parent:
                base_parent[find(base_parent, a)] = find(base_parent, b)

        def connects(subset) -> bool:
            parent = dict(base_parent)
            for u in subset:
                beams = [b for b in u.beams if b in parent]
                for b1, b2 in zip(beams, beams[1:]):
                    parent[find(parent, b1)] = find(parent, b2)
            roots = {find(parent, b) for b in group_beams}
            return len(roots) == 1

        if connects(()):
            return []
        if not candidates:
            return None

        def disjoint(subset) -> bool:
            seen = set()
            holes = set()
            for u in subset:
                for c in u.body_cells:
                    if c in seen:
                        return False
                    seen.add(c)
                for cell, _axis, _t, beam in u.heads:
                    hk = (beam, cell)
                    if hk in holes:
                        return False
                    holes.add(hk)
            for u in subset:
                for cell, *_ in u.heads:
                    if cell in seen:
                        return False
            return True

        def score(subset):
            return (
                -sum(u.rho for u in subset),
                sum(u.brick_count for u in subset),
                tuple(sorted((u.mechanism_id, u.heads) for u in subset)),
            )

        shortlist = candidates[:24]
        for size in (1, 2, 3):
            feasible = []
            pool = candidates if size == 1 else shortlist
            for subset in combinations(pool, size):
                if not connects(subset):
                    continue
                if size > 1:
                    if any(connects(sub) for sub in combinations(subset, size - 1)):
                        continue  # not minimal
                    if not disjoint(subset):
                        continue
                feasible.append(subset)
            if feasible:
                best = min(feasible, key=score)
                return list(best)
        return None

    # -- entry point -----------------------------------------------------------

    def __call__(self, layout: Layout) -> ConnectionPlan:
        used: set = set()
        uses = self._direct_joins(layout, used)
        direct_pairs = {u.beams for u in uses}

        groups: list[GroupResult] = []
        placed_cells: set = set()
        for group in self._edge_groups(layout):
            ok, group_uses, group_beams = self._solve_group(
                layout, used, group, direct_pairs, placed_cells
            )
            idxs = []
            if ok:
                for u in group_uses:
                    for cell, _a, _t, beam in u.heads:
                        used.add((beam, cell))
                    placed_cells.update(u.cells)
                    idxs.append(len(uses))
                    uses.append(u)
            groups.append(
                GroupResult(
                    edges=group,
                    beams=group_beams,
                    connected=ok,
                    use_indexes=tuple(idxs),
                )
            )

        records = [
            (
                tuple((cell, beam) for cell, _a, _t, beam in u.heads),
                u.beams,
                u.rigid_heads,
                u.joint,
                u.rho,
            )
            for u in uses
        ]
        connected_pairs = frozenset(
            pair
            for rec in records
            for pair in combinations(sorted(set(rec[1])), 2)
        )
        rigid_pairs = _pair_flags(records)
        n_cfail = _unconnected_adjacent(layout, records)
        rho_bar = (sum(u.rho for u in uses) / len(uses)) if uses else 1.0
        return ConnectionPlan(
            uses=tuple(uses),
            groups=tuple(groups),
            n_cfail=n_cfail,
            rho_bar=rho_bar,
            connected_pairs=connected_pairs,
            rigid_pairs=rigid_pairs,
        )


def connect_beams(layout: Layout, graph: GuidingGraph, catalog: Catalog) -> ConnectionPlan:
    """One-shot connection synthesis (builds a fresh Connector)."""
    return Connector(graph, catalog)(layout)


def use_links(use: ConnectionUse, catalog: Catalog) -> tuple[tuple[Vec, Vec], ...]:
    """Unit line-graph edges of a placed connection, in world coordinates."""
    if not use.body_cells:  # a pin: its cells form one straight link chain
        cells = sorted(use.head_cells)
        return tuple((a, b) for a, b in zip(cells, cells[1:]))
    mech = catalog.mechanism(use.mechanism_id)
    # recover the anchored node positions: heads first (in slot order is lost,
    # so match by congruence), fall back to pairing every adjacent cell pair
    cells = use.cells
    links = []
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            dx = cells[i][0] - cells[j][0]
            dy = cells[i][1] - cells[j][1]
            dz = cells[i][2] - cells[j][2]
            if abs(dx * dx + dy * dy + dz * dz - 1.0) <= 1e-9:
                links.append((cells[i], cells[j]))
    return tuple(links)


def edges_covered_by_plan(
    layout: Layout, plan: ConnectionPlan, catalog: Catalog
) -> set[int]:
    """Guiding-graph edges covered by connection bricks.

    A mechanism link covers an edge under the same predicate as a beam: it is
    parallel to the edge and displaced at most one unit.
    """
    graph = layout.graph
    out: set[int] = set()
    if not layout.uncovered:
        return out
    links = []
    for u in plan.uses:
        links.extend(use_links(u, catalog))
    for eid in layout.uncovered:
        un, vn = graph.edge_nodes(eid)
        p, q = graph.nodes[un].pos, graph.nodes[vn].pos
        for a, b in links:
            for (s, t) in ((a, b), (b, a)):
                off1 = (s[0] - p[0], s[1] - p[1], s[2] - p[2])
                off2 = (t[0] - q[0], t[1] - q[1], t[2] - q[2])
                if (
                    abs(off1[0] - off2[0]) <= 1e-9
                    and abs(off1[1] - off2[1]) <= 1e-9
                    and abs(off1[2] - off2[2]) <= 1e-9
                    and off1[0] ** 2 + off1[1] ** 2 + off1[2] ** 2 <= 1.0 + 1e-9
                ):
                    out.add(eid)
                    break
            if eid in out:
                break
    return out


def uncovered_after_plan(
    layout: Layout, plan: ConnectionPlan, catalog: Catalog
) -> set[int]:
    """Edges covered neither by beams nor by connection bricks."""
    return set(layout.uncovered) - edges_covered_by_plan(layout, plan, catalog)
