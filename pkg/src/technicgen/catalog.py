"""Brick and connection-mechanism catalog.

Each brick is abstracted as a 3D line graph: beam holes sit one unit apart
along the brick's arms, and connection mechanisms carry labelled nodes
(pin heads that enter beam holes, connector bodies that do not). The catalog
is loaded from a versioned JSON document and is immutable afterwards, so it
can be shared freely between concurrent searches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .geometry import (
    ROTATIONS_24,
    Vec,
    axis_of_vector,
    quantize,
    rotate,
    vdist,
    vsub,
)

HOLE_TYPES = ("regular", "axle")


class CatalogError(ValueError):
    """Malformed catalog document or brick geometry."""


@dataclass(frozen=True)
class Hole:
    at: Vec
    type: str


@dataclass(frozen=True)
class Brick:
    id: str
    kind: str
    holes: tuple[Hole, ...]
    mass: float
    arms: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        """Hole count; for beams this equals the occupancy cell count."""
        return len(self.holes)

    @property
    def occupancy(self) -> tuple[Vec, ...]:
        return tuple(h.at for h in self.holes)


@dataclass(frozen=True)
class MechNode:
    at: Vec
    label: str                    # "pin-head" | "connector-body"
    head_type: str | None = None  # for pin heads: "regular" | "axle"
    axis: str | None = None       # insertion axis, derived from incident edges

    @property
    def is_head(self) -> bool:
        return self.label == "pin-head"


@dataclass(frozen=True)
class ConnectionMechanism:
    id: str
    name: str
    nodes: tuple[MechNode, ...]
    edges: tuple[tuple[int, int], ...]
    parts: tuple[tuple[str, Vec], ...]
    mass: float

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def pin_head_count(self) -> int:
        return sum(1 for n in self.nodes if n.is_head)

    @property
    def rho(self) -> Fraction:
        return pin_head_ratio(self)


@dataclass(frozen=True)
class HeadSlot:
    at: Vec
    axis: str
    head_type: str


@dataclass(frozen=True)
class MechanismPose:
    mechanism_id: str
    rotation: tuple[tuple[int, int, int], ...]
    head_slots: tuple[HeadSlot, ...]
    body_cells: tuple[Vec, ...]

    @property
    def cells(self) -> tuple[Vec, ...]:
        return tuple(h.at for h in self.head_slots) + self.body_cells


def pin_head_ratio(mechanism: ConnectionMechanism) -> Fraction:
    """Pin heads over total nodes; in (0, 1] for every valid mechanism."""
    if mechanism.node_count == 0:
        raise CatalogError(f"mechanism {mechanism.id!r} has zero nodes")
    return Fraction(mechanism.pin_head_count, mechanism.node_count)


@dataclass
class Catalog:
    bricks: dict[str, Brick]
    mechanisms: dict[str, ConnectionMechanism]
    version: int = 1
    _pose_cache: dict[str, tuple[MechanismPose, ...]] = field(
        default_factory=dict, repr=False
    )

    def brick(self, brick_id: str) -> Brick:
        try:
            return self.bricks[brick_id]
        except KeyError:
            raise CatalogError(f"unknown brick id {brick_id!r}") from None

    def mechanism(self, mech_id: str) -> ConnectionMechanism:
        try:
            return self.mechanisms[mech_id]
        except KeyError:
            raise CatalogError(f"unknown mechanism id {mech_id!r}") from None

    @property
    def beams(self) -> list[Brick]:
        return self.beams_by_length()

    def beams_by_length(self, max_length: int | None = None) -> list[Brick]:
        out = [b for b in self.bricks.values() if b.kind == "beam"]
        if max_length is not None:
            out = [b for b in out if b.length <= max_length]
        return sorted(out, key=lambda b: (b.length, b.id))

    def by_kind(self, kind: str) -> list[Brick]:
        return sorted(
            (b for b in self.bricks.values() if b.kind == kind), key=lambda b: b.id
        )

    def poses(self, mech_id: str) -> tuple[MechanismPose, ...]:
        if mech_id not in self._pose_cache:
            self._pose_cache[mech_id] = tuple(
                enumerate_mechanism_poses(self.mechanism(mech_id), self)
            )
        return self._pose_cache[mech_id]


def _check_line_graph(brick_id: str, cells: list[Vec]) -> None:
    if not cells:
        raise CatalogError(f"brick {brick_id!r} has no holes")
    if len(set(quantize(c) for c in cells)) != len(cells):
        raise CatalogError(f"brick {brick_id!r} repeats a hole position")
    if len(cells) == 1:
        return
    # unit-spacing adjacency must connect the whole graph
    adj: dict[int, list[int]] = {i: [] for i in range(len(cells))}
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            d = vdist(cells[i], cells[j])
            if abs(d - 1.0) <= 1e-9:
                adj[i].append(j)
                adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != len(cells):
        raise CatalogError(
            f"brick {brick_id!r} holes are not a connected unit-spaced line graph"
        )


def _node_axis(nodes: list[dict], edges: list[tuple[int, int]], idx: int) -> str | None:
    dirs = []
    at = tuple(float(c) for c in nodes[idx]["at"])
    for a, b in edges:
        if idx in (a, b):
            other = tuple(float(c) for c in nodes[b if a == idx else a]["at"])
            dirs.append(vsub(other, at))
    if not dirs:
        return None
    axes = {axis_of_vector(d) for d in dirs}
    if len(axes) != 1 or None in axes:
        return None
    return axes.pop()


def load_catalog(document: str | Path | dict) -> Catalog:
    """Load and validate a catalog document (path, JSON text, or dict)."""
    if isinstance(document, dict):
        doc = document
    else:
        text = Path(document).read_text() if Path(str(document)).exists() else str(document)
        doc = json.loads(text)

    version = int(doc.get("version", 1))
    bricks: dict[str, Brick] = {}
    for raw in doc.get("bricks", []):
        bid = str(raw["id"])
        if bid in bricks:
            raise CatalogError(f"duplicate brick id {bid!r}")
        holes = []
        for h in raw.get("holes", []):
            htype = h.get("type", "regular")
            if htype not in HOLE_TYPES:
                raise CatalogError(f"brick {bid!r}: unknown hole type {htype!r}")
            holes.append(Hole(at=tuple(float(c) for c in h["at"]), type=htype))
        cells = [h.at for h in holes]
        _check_line_graph(bid, cells)
        kind = raw.get("kind", "beam")
        if kind == "beam":
            # beams must be straight and unit spaced hole-to-hole
            for i in range(1, len(cells)):
                if abs(vdist(cells[i - 1], cells[i]) - 1.0) > 1e-9:
                    raise CatalogError(f"beam {bid!r}: holes are not unit spaced")
                if axis_of_vector(vsub(cells[i], cells[0])) is None and i > 0:
                    raise CatalogError(f"beam {bid!r}: holes are not collinear")
        bricks[bid] = Brick(
            id=bid,
            kind=kind,
            holes=tuple(holes),
            mass=float(raw.get("mass", 0.5 * len(holes))),
            arms=tuple(int(a) for a in raw.get("arms", [])),
        )

    mechanisms: dict[str, ConnectionMechanism] = {}
    for raw in doc.get("mechanisms", []):
        mid = str(raw["id"])
        if mid in mechanisms or mid in bricks:
            raise CatalogError(f"duplicate id {mid!r}")
        raw_nodes = raw.get("nodes", [])
        if not raw_nodes:
            raise CatalogError(f"mechanism {mid!r} has zero nodes")
        edges = tuple((int(a), int(b)) for a, b in raw.get("edges", []))
        nodes = []
        for i, n in enumerate(raw_nodes):
            label = n.get("label", "connector-body")
            head_type = n.get("headType")
            if label == "pin-head":
                if head_type not in HOLE_TYPES:
                    raise CatalogError(
                        f"mechanism {mid!r}: pin head without a valid headType"
                    )
                axis = _node_axis(raw_nodes, list(edges), i)
                if axis is None:
                    raise CatalogError(
                        f"mechanism {mid!r}: pin head {i} lacks a unique insertion axis"
                    )
            else:
                head_type, axis = None, None
            nodes.append(
                MechNode(
                    at=tuple(float(c) for c in n["at"]),
                    label=label,
                    head_type=head_type,
                    axis=axis,
                )
            )
        _check_line_graph(mid, [n.at for n in nodes])
        mechanisms[mid] = ConnectionMechanism(
            id=mid,
            name=str(raw.get("name", mid)),
            nodes=tuple(nodes),
            edges=edges,
            parts=tuple(
                (str(p["brick"]), tuple(float(c) for c in p.get("offset", (0, 0, 0))))
                for p in raw.get("parts", [])
            ),
            mass=float(raw.get("mass", 0.4 * len(nodes))),
        )

    return Catalog(bricks=bricks, mechanisms=mechanisms, version=version)


def default_catalog() -> Catalog:
    """The bundled catalog (loaded fresh; callers may mutate their own copy)."""
    text = resources.files("technicgen.data").joinpath("catalog.json").read_text()
    return load_catalog(json.loads(text))


def _pose_signature(head_slots, body_cells) -> tuple:
    heads = tuple(sorted((quantize(h.at), h.axis, h.head_type) for h in head_slots))
    bodies = tuple(sorted(quantize(c) for c in body_cells))
    return heads, bodies


def enumerate_mechanism_poses(
    mechanism: ConnectionMechanism | Brick, catalog: Catalog | None = None
) -> list[MechanismPose]:
    """All distinct axis-aligned poses of a mechanism's line graph.

    Rotates the canonical graph by each of the 24 proper rotations, normalizes
    the anchor to the cell-wise minimum corner, and drops congruent duplicates
    (same labelled cells and head axes). Single-hole bricks enumerate like a
    1-node mechanism whose hole axis is the free label.
    """
    if isinstance(mechanism, Brick):
        nodes = [
            MechNode(at=h.at, label="pin-head", head_type=h.type, axis="Z")
            for h in mechanism.holes
        ]
        mech_id = mechanism.id
    else:
        nodes = list(mechanism.nodes)
        mech_id = mechanism.id

    seen = set()
    poses = []
    for rot in ROTATIONS_24:
        pts = [rotate(rot, n.at) for n in nodes]
        lo = (
            min(p[0] for p in pts),
            min(p[1] for p in pts),
            min(p[2] for p in pts),
        )
        pts = [quantize(vsub(p, lo)) for p in pts]
        head_slots = []
        body_cells = []
        for n, p in zip(nodes, pts):
            if n.is_head:
                axis = n.axis or "Z"
                img = rotate(rot, {"X": (1, 0, 0), "Y": (0, 1, 0), "Z": (0, 0, 1)}[axis])
                head_slots.append(
                    HeadSlot(at=p, axis=axis_of_vector(img), head_type=n.head_type)
                )
            else:
                body_cells.append(p)
        sig = _pose_signature(head_slots, body_cells)
        if sig in seen:
            continue
        seen.add(sig)
        poses.append(
            MechanismPose(
                mechanism_id=mech_id,
                rotation=rot,
                head_slots=tuple(head_slots),
                body_cells=tuple(body_cells),
            )
        )
    poses.sort(key=lambda p: _pose_signature(p.head_slots, p.body_cells))
    return poses
