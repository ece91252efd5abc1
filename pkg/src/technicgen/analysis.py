"""Post-generation analysis: static balance, assemblability, assembly order.

The model here is the physical brick list (beams plus connection bricks).
Pin heads intentionally share cells with the beam holes they engage; every
check below knows that a head-in-hole overlap is engagement, not collision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import Catalog
from .connect import ConnectionPlan
from .geometry import Vec, convex_hull_2d, point_to_hull_margin
from .layout import Layout
from .sketch import GuidingGraph, SymmetryIndex

_DIRECTIONS = (
    ("X", (1, 0, 0)), ("X", (-1, 0, 0)),
    ("Y", (0, 1, 0)), ("Y", (0, -1, 0)),
    ("Z", (0, 0, 1)), ("Z", (0, 0, -1)),
)


@dataclass(frozen=True)
class ModelBrick:
    id: int
    kind: str  # "beam" | "mechanism"
    ref: str   # catalog id
    cells: tuple[Vec, ...]
    mass: float
    hole_axis: str | None = None             # beams: axis of every hole
    head_cells: tuple[Vec, ...] = ()          # mechanisms: cells inside holes
    body_cells: tuple[Vec, ...] = ()
    source_uid: int | None = None             # beam uid or use index
    layer: int | None = None
    segments: tuple[str, ...] = ()


@dataclass
class BrickModel:
    bricks: list[ModelBrick]
    graph: GuidingGraph | None = None

    @property
    def beam_bricks(self) -> list[ModelBrick]:
        return [b for b in self.bricks if b.kind == "beam"]

    def bounding_box(self) -> tuple[Vec, Vec]:
        cells = [c for b in self.bricks for c in b.cells]
        lo = tuple(min(c[i] for c in cells) for i in range(3))
        hi = tuple(max(c[i] for c in cells) for i in range(3))
        return lo, hi


def build_model(
    layout: Layout, plan: ConnectionPlan, catalog: Catalog,
    graph: GuidingGraph | None = None,
) -> BrickModel:
    bricks: list[ModelBrick] = []
    g = graph or layout.graph
    for uid in sorted(layout.beams):
        beam = layout.beams[uid]
        segs = tuple(
            sorted({g.edges[e].segment for e in beam.placement.covered_edges})
        )
        bricks.append(
            ModelBrick(
                id=len(bricks),
                kind="beam",
                ref=beam.placement.brick_id,
                cells=layout.beam_cells(beam),
                mass=beam.placement.mass,
                hole_axis=beam.axis,
                source_uid=uid,
                layer=beam.layer,
                segments=segs,
            )
        )
    for i, use in enumerate(plan.uses):
        mech = catalog.mechanisms.get(use.mechanism_id)
        bricks.append(
            ModelBrick(
                id=len(bricks),
                kind="mechanism",
                ref=use.mechanism_id,
                cells=use.cells,
                mass=mech.mass if mech else 0.4,
                head_cells=use.head_cells,
                body_cells=use.body_cells,
                source_uid=i,
            )
        )
    return BrickModel(bricks=bricks, graph=g)


# -- balance -----------------------------------------------------------------


@dataclass
class BalanceReport:
    center_of_gravity: Vec
    support_polygon: list[tuple[float, float]]
    balanced: bool
    margin: float
    grounded: bool
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "centerOfGravity": list(self.center_of_gravity),
            "supportPolygon": [list(p) for p in self.support_polygon],
            "balanced": self.balanced,
            "margin": self.margin,
            "grounded": self.grounded,
            "diagnostics": self.diagnostics,
        }


def balance_check(model: BrickModel, catalog: Catalog | None = None) -> BalanceReport:
    """Support-polygon criterion: COG projection inside the hull of ground cells."""
    if not model.bricks:
        return BalanceReport(
            center_of_gravity=(0.0, 0.0, 0.0),
            support_polygon=[],
            balanced=False,
            margin=-math.inf,
            grounded=False,
            diagnostics=["empty model"],
        )
    masses = np.array([b.mass for b in model.bricks])
    centroids = np.array(
        [np.mean(np.array(b.cells, dtype=float), axis=0) for b in model.bricks]
    )
    cog = tuple((masses[:, None] * centroids).sum(axis=0) / masses.sum())

    cells = [c for b in model.bricks for c in b.cells]
    min_z = min(c[2] for c in cells)
    diagnostics = []
    if min_z > 1e-9:
        return BalanceReport(
            center_of_gravity=cog,
            support_polygon=[],
            balanced=False,
            margin=-math.inf,
            grounded=False,
            diagnostics=[f"model floats above the ground plane (lowest cell z={min_z:g})"],
        )
    if min_z < -1e-9:
        diagnostics.append(
            f"model dips below the ground plane (lowest cell z={min_z:g}); "
            f"contact evaluated at that level"
        )
    contact = [
        (c[0], c[1]) for c in cells if abs(c[2] - min_z) <= 1e-9
    ]
    hull = convex_hull_2d(contact)
    margin = point_to_hull_margin((cog[0], cog[1]), hull)
    return BalanceReport(
        center_of_gravity=cog,
        support_polygon=hull,
        balanced=margin >= -1e-9,
        margin=margin,
        grounded=True,
        diagnostics=diagnostics,
    )


# -- assemblability -----------------------------------------------------------


def _occupancy(bricks) -> dict[Vec, list[int]]:
    occ: dict[Vec, list[int]] = {}
    for b in bricks:
        for c in b.cells:
            occ.setdefault(c, []).append(b.id)
    return occ


def _engagement_axes(brick: ModelBrick, others: dict[int, ModelBrick],
                     occ: dict[Vec, list[int]]) -> set[str]:
    """Axes of every head-in-hole engagement touching this brick."""
    axes: set[str] = set()
    if brick.kind == "mechanism":
        for c in brick.head_cells:
            for other_id in occ.get(c, ()):
                if other_id != brick.id and others[other_id].kind == "beam":
                    axes.add(others[other_id].hole_axis)
    else:
        for c in brick.cells:
            for other_id in occ.get(c, ()):
                other = others.get(other_id)
                if other is None or other_id == brick.id:
                    continue
                if other.kind == "mechanism" and c in other.head_cells:
                    axes.add(brick.hole_axis)
    return axes


def _removable(brick: ModelBrick, remaining: dict[int, ModelBrick],
               occ: dict[Vec, list[int]], span: int) -> str | None:
    """First axis direction along which the brick slides free, if any."""
    engaged = _engagement_axes(brick, remaining, occ)
    for axis, d in _DIRECTIONS:
        if engaged and (len(engaged) > 1 or axis not in engaged):
            continue
        blocked = False
        for c in brick.cells:
            x, y, z = c
            for k in range(1, span + 1):
                cell = (x + k * d[0], y + k * d[1], z + k * d[2])
                hit = occ.get(cell)
                if not hit:
                    continue
                for other_id in hit:
                    if other_id == brick.id:
                        continue
                    other = remaining[other_id]
                    # a mechanism shaft may slide through an aligned hole
                    if (
                        brick.kind == "mechanism"
                        and other.kind == "beam"
                        and other.hole_axis == axis
                    ):
                        continue
                    blocked = True
                    break
                if blocked:
                    break
            if blocked:
                break
        if not blocked:
            return f"{'-' if min(d) < 0 else '+'}{axis}"
    return None


@dataclass
class DisassemblyResult:
    order: list[int]              # brick ids in removal order
    directions: list[str]
    success: bool
    residual: list[int] = field(default_factory=list)


def disassembly_order(model: BrickModel) -> DisassemblyResult:
    """Greedy peel: repeatedly remove any brick that slides out along an axis.

    Smallest bricks are tried first; any valid peel suffices. Failure reports
    the stuck residual set instead of raising.
    """
    remaining = {b.id: b for b in model.bricks}
    if not remaining:
        return DisassemblyResult(order=[], directions=[], success=True)
    lo, hi = model.bounding_box()
    span = int(max(hi[i] - lo[i] for i in range(3))) + 2
    order: list[int] = []
    directions: list[str] = []
    while remaining:
        occ = _occupancy(remaining.values())
        pick = None
        for bid in sorted(remaining, key=lambda i: (len(remaining[i].cells), i)):
            d = _removable(remaining[bid], remaining, occ, span)
            if d is not None:
                pick = (bid, d)
                break
        if pick is None:
            return DisassemblyResult(
                order=order,
                directions=directions,
                success=False,
                residual=sorted(remaining),
            )
        order.append(pick[0])
        directions.append(pick[1])
        del remaining[pick[0]]
    return DisassemblyResult(order=order, directions=directions, success=True)


# -- assembly instructions ------------------------------------------------------


@dataclass
class AssemblyStep:
    index: int
    brick: ModelBrick
    direction: str
    attaches: list[tuple[Vec, int]]  # (engaged cell, already-placed brick id)

    def to_dict(self) -> dict:
        return {
            "step": self.index,
            "brick": self.brick.ref,
            "kind": self.brick.kind,
            "cells": [list(c) for c in self.brick.cells],
            "insertFrom": self.direction,
            "attachments": [
                {"cell": list(c), "brick": other} for c, other in self.attaches
            ],
        }


def _counterpart_map(model: BrickModel, symmetry: SymmetryIndex | None) -> dict[int, int]:
    if symmetry is None or not len(symmetry):
        return {}
    by_cells = {tuple(sorted(b.cells)): b.id for b in model.bricks}
    pairs: dict[int, int] = {}
    for group in symmetry.groups:
        t = group.transform
        for b in model.bricks:
            if b.id in pairs or b.kind != "beam":
                continue
            if not set(b.segments) & set(group.right_segments):
                continue
            image = tuple(sorted(t.apply(c) for c in b.cells))
            other = by_cells.get(image)
            if other is not None and other != b.id:
                pairs[b.id] = other
                pairs[other] = b.id
    return pairs


def _assembly_valid(model: BrickModel, order: list[int]) -> bool:
    bricks = {b.id: b for b in model.bricks}
    placed: dict[int, ModelBrick] = {}
    occ: dict[Vec, list[int]] = {}
    lo, hi = model.bounding_box()
    span = int(max(hi[i] - lo[i] for i in range(3))) + 2
    for bid in order:
        brick = bricks[bid]
        placed[bid] = brick
        for c in brick.cells:
            occ.setdefault(c, []).append(bid)
        # inserting the brick is the reverse of removing it from the prefix
        if _removable(brick, placed, occ, span) is None:
            return False
        # overlap sanity: only head-in-hole co-occupancy is allowed
        for c in brick.cells:
            for other_id in occ.get(c, ()):
                if other_id == bid:
                    continue
                other = placed[other_id]
                pair = {brick.kind, other.kind}
                if pair == {"beam"} or pair == {"mechanism"}:
                    return False
                mech = brick if brick.kind == "mechanism" else other
                if c not in mech.head_cells:
                    return False
    return True


def assembly_instructions(
    model: BrickModel,
    symmetry: SymmetryIndex | None = None,
    peel: DisassemblyResult | None = None,
) -> list[AssemblyStep]:
    """Assembly steps (reversed peel), symmetric counterparts kept adjacent."""
    peel = peel or disassembly_order(model)
    if not peel.success:
        raise ValueError(
            f"model is not assemblable; stuck bricks: {peel.residual}"
        )
    base = list(reversed(peel.order))
    counterparts = _counterpart_map(model, symmetry)
    if counterparts:
        order: list[int] = []
        used = set()
        for bid in base:
            if bid in used:
                continue
            order.append(bid)
            used.add(bid)
            mate = counterparts.get(bid)
            if mate is not None and mate not in used:
                candidate = order + [mate]
                rest = [x for x in base if x not in used and x != mate]
                if _assembly_valid(model, candidate + rest):
                    order.append(mate)
                    used.add(mate)
        order.extend(x for x in base if x not in set(order))
        if _assembly_valid(model, order):
            base = order

    bricks = {b.id: b for b in model.bricks}
    rev_dir = {bid: d for bid, d in zip(peel.order, peel.directions)}
    flip = lambda d: ("-" if d[0] == "+" else "+") + d[1]
    steps: list[AssemblyStep] = []
    occ: dict[Vec, list[int]] = {}
    placed: set[int] = set()
    for i, bid in enumerate(base):
        brick = bricks[bid]
        attaches = []
        for c in brick.cells:
            for other in occ.get(c, ()):
                attaches.append((c, other))
        steps.append(
            AssemblyStep(
                index=i,
                brick=brick,
                direction=flip(rev_dir.get(bid, "+Z")),
                attaches=attaches,
            )
        )
        placed.add(bid)
        for c in brick.cells:
            occ.setdefault(c, []).append(bid)
    return steps


# -- the full report -----------------------------------------------------------


@dataclass
class ModelReport:
    balance: BalanceReport
    assemblable: bool
    assembly_steps: list[AssemblyStep]
    residual: list[int]
    diagnostics: list[str]

    def to_dict(self) -> dict:
        return {
            "balance": self.balance.to_dict(),
            "assemblable": self.assemblable,
            "assemblyOrder": [s.to_dict() for s in self.assembly_steps],
            "stuckBricks": self.residual,
            "diagnostics": self.diagnostics,
        }


def analyze_model(
    model: BrickModel,
    catalog: Catalog | None = None,
    symmetry: SymmetryIndex | None = None,
) -> ModelReport:
    balance = balance_check(model, catalog)
    peel = disassembly_order(model)
    steps: list[AssemblyStep] = []
    diagnostics = list(balance.diagnostics)
    if peel.success:
        steps = assembly_instructions(model, symmetry, peel)
    else:
        diagnostics.append(
            f"disassembly blocked; residual bricks {peel.residual}"
        )
    return ModelReport(
        balance=balance,
        assemblable=peel.success,
        assembly_steps=steps,
        residual=peel.residual,
        diagnostics=diagnostics,
    )
