"""Input sketches and their unit-lattice guiding graph.

A sketch is a set of integer-length line segments plus optional annotations:
joint rotations (hinge axes), pass-through lines (covering beams must stay at
layer 0), and symmetry groups (reflection across a principal plane or lattice
translation). The guiding graph distributes nodes one unit apart along every
segment and is the substrate for all later search stages.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import AXES, Vec, is_lattice_point, quantize, vadd, vdist, vscale, vsub


class SketchError(ValueError):
    """Sketch document that cannot be parsed into a usable sketch."""

    def __init__(self, message: str, diagnostics: list["Diagnostic"] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    subject: str
    message: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "subject": self.subject, "message": self.message}


@dataclass(frozen=True)
class Segment:
    id: str
    a: Vec
    b: Vec

    @property
    def length(self) -> int:
        return int(round(vdist(self.a, self.b)))

    @property
    def exact_length(self) -> float:
        return vdist(self.a, self.b)

    @property
    def direction(self) -> Vec:
        d = vsub(self.b, self.a)
        n = self.exact_length
        return quantize(vscale(d, 1.0 / n)) if n > 0 else (0.0, 0.0, 0.0)

    def point_at(self, offset: int) -> Vec:
        return quantize(vadd(self.a, vscale(self.direction, float(offset))))

    def node_positions(self) -> list[Vec]:
        return [self.point_at(k) for k in range(self.length + 1)]


@dataclass(frozen=True)
class JointAnnotation:
    at: Vec
    axis: str


@dataclass(frozen=True)
class Transform:
    kind: str  # "reflection" | "translation"
    plane: str | None = None   # "x" | "y" | "z" for reflections
    value: float = 0.0         # reflection plane offset
    by: Vec = (0.0, 0.0, 0.0)  # translation vector

    def apply(self, p: Vec) -> Vec:
        if self.kind == "translation":
            return quantize(vadd(p, self.by))
        i = "xyz".index(self.plane)
        q = list(p)
        q[i] = 2.0 * self.value - q[i]
        return quantize(tuple(q))

    def to_dict(self) -> dict:
        if self.kind == "translation":
            return {"type": "translation", "by": list(self.by)}
        return {"type": "reflection", "plane": self.plane, "value": self.value}


@dataclass(frozen=True)
class SymmetryGroup:
    left: tuple[str, ...]
    right: tuple[str, ...]
    transform: Transform


@dataclass(frozen=True)
class Sketch:
    segments: tuple[Segment, ...]
    joints: tuple[JointAnnotation, ...] = ()
    pass_through: tuple[str, ...] = ()
    symmetry: tuple[SymmetryGroup, ...] = ()
    orientation_hints: tuple[tuple[Vec, str], ...] = ()

    def segment(self, seg_id: str) -> Segment:
        for s in self.segments:
            if s.id == seg_id:
                return s
        raise KeyError(seg_id)

    def to_dict(self) -> dict:
        doc: dict = {
            "version": 1,
            "segments": [
                {"id": s.id, "a": [c for c in s.a], "b": [c for c in s.b]}
                for s in self.segments
            ],
        }
        if self.joints:
            doc["joints"] = [{"at": list(j.at), "axis": j.axis} for j in self.joints]
        if self.pass_through:
            doc["passThrough"] = list(self.pass_through)
        if self.symmetry:
            doc["symmetry"] = [
                {
                    "left": list(g.left),
                    "right": list(g.right),
                    "transform": g.transform.to_dict(),
                }
                for g in self.symmetry
            ]
        if self.orientation_hints:
            doc["orientationHints"] = [
                {"at": list(p), "axis": a} for p, a in self.orientation_hints
            ]
        return doc


SNAP_TOLERANCE = 0.5


def _snap_endpoints(raw_segments: list[tuple[str, Vec, Vec]]) -> list[tuple[str, Vec, Vec]]:
    """Cluster endpoints within the snap tolerance, then round to the lattice.

    Snapping is deterministic: each cluster collapses to its centroid, which
    is then rounded to the nearest lattice point.
    """
    pts: list[Vec] = []
    for _, a, b in raw_segments:
        pts.extend((a, b))
    parent = list(range(len(pts)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if vdist(pts[i], pts[j]) <= SNAP_TOLERANCE:
                parent[find(i)] = find(j)

    clusters: dict[int, list[int]] = {}
    for i in range(len(pts)):
        clusters.setdefault(find(i), []).append(i)
    snapped: dict[int, Vec] = {}
    for members in clusters.values():
        cx = sum(pts[i][0] for i in members) / len(members)
        cy = sum(pts[i][1] for i in members) / len(members)
        cz = sum(pts[i][2] for i in members) / len(members)
        target = (float(round(cx)), float(round(cy)), float(round(cz)))
        for i in members:
            snapped[i] = target

    out = []
    for k, (sid, _, _) in enumerate(raw_segments):
        out.append((sid, snapped[2 * k], snapped[2 * k + 1]))
    return out


def parse_sketch(document: dict | str | Path) -> Sketch:
    """Parse a sketch document (dict, JSON text, or file path), snapping endpoints."""
    if isinstance(document, dict):
        doc = document
    else:
        p = Path(str(document))
        text = p.read_text() if p.exists() else str(document)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SketchError(f"sketch document is not valid JSON: {e}") from e

    raw = []
    for i, s in enumerate(doc.get("segments", [])):
        sid = str(s.get("id", f"s{i}"))
        a = tuple(float(c) for c in s["a"])
        b = tuple(float(c) for c in s["b"])
        raw.append((sid, a, b))
    if len({sid for sid, _, _ in raw}) != len(raw):
        raise SketchError("duplicate segment ids in sketch document")

    segments = tuple(
        Segment(id=sid, a=quantize(a), b=quantize(b))
        for sid, a, b in _snap_endpoints(raw)
    )

    joints = []
    for j in doc.get("joints", []):
        axis = str(j["axis"]).upper()
        if axis not in AXES:
            raise SketchError(f"joint axis must be one of X/Y/Z, got {axis!r}")
        joints.append(JointAnnotation(at=quantize(tuple(float(c) for c in j["at"])), axis=axis))

    pass_through = tuple(str(x) for x in doc.get("passThrough", []))

    symmetry = []
    for g in doc.get("symmetry", []):
        t = g["transform"]
        if t.get("type") == "translation":
            tr = Transform(kind="translation", by=tuple(float(c) for c in t["by"]))
        elif t.get("type") == "reflection":
            plane = str(t["plane"]).lower()
            if plane not in ("x", "y", "z"):
                raise SketchError(f"reflection plane must be x/y/z, got {plane!r}")
            tr = Transform(kind="reflection", plane=plane, value=float(t["value"]))
        else:
            raise SketchError(f"unknown symmetry transform {t!r}")
        symmetry.append(
            SymmetryGroup(
                left=tuple(str(x) for x in g["left"]),
                right=tuple(str(x) for x in g["right"]),
                transform=tr,
            )
        )

    hints = []
    for h in doc.get("orientationHints", []):
        axis = str(h["axis"]).upper()
        if axis not in AXES:
            raise SketchError(f"orientation hint axis must be X/Y/Z, got {axis!r}")
        hints.append((quantize(tuple(float(c) for c in h["at"])), axis))

    return Sketch(
        segments=segments,
        joints=tuple(joints),
        pass_through=pass_through,
        symmetry=tuple(symmetry),
        orientation_hints=tuple(hints),
    )


def _segments_intersect_badly(s1: Segment, s2: Segment) -> str | None:
    """Classify how two distinct segments touch: None, "overlap", or "cross".

    Sharing endpoints is legal (that is a junction); anything else — collinear
    overlap, a T-touch mid-segment, or a crossing — is reported.
    """
    ends1 = {quantize(s1.a), quantize(s1.b)}
    ends2 = {quantize(s2.a), quantize(s2.b)}
    d1, d2 = s1.direction, s2.direction
    cross = (
        d1[1] * d2[2] - d1[2] * d2[1],
        d1[2] * d2[0] - d1[0] * d2[2],
        d1[0] * d2[1] - d1[1] * d2[0],
    )
    collinear = all(abs(c) <= 1e-9 for c in cross)
    if collinear:
        # same infinite line?
        off = vsub(s2.a, s1.a)
        oc = (
            d1[1] * off[2] - d1[2] * off[1],
            d1[2] * off[0] - d1[0] * off[2],
            d1[0] * off[1] - d1[1] * off[0],
        )
        if any(abs(c) > 1e-9 for c in oc):
            return None
        t_a = sum(x * y for x, y in zip(vsub(s2.a, s1.a), d1))
        t_b = sum(x * y for x, y in zip(vsub(s2.b, s1.a), d1))
        lo, hi = min(t_a, t_b), max(t_a, t_b)
        if hi <= 1e-9 or lo >= s1.exact_length - 1e-9:
            return None  # touch at a shared endpoint at most
        return "overlap"
    # skew or intersecting lines: find closest approach
    w0 = vsub(s1.a, s2.a)
    a = sum(x * x for x in d1)
    b = sum(x * y for x, y in zip(d1, d2))
    c = sum(x * x for x in d2)
    d = sum(x * y for x, y in zip(d1, w0))
    e = sum(x * y for x, y in zip(d2, w0))
    denom = a * c - b * b
    if abs(denom) <= 1e-12:
        return None
    t1 = (b * e - c * d) / denom
    t2 = (a * e - b * d) / denom
    if t1 < -1e-9 or t1 > s1.exact_length + 1e-9:
        return None
    if t2 < -1e-9 or t2 > s2.exact_length + 1e-9:
        return None
    p1 = vadd(s1.a, vscale(d1, t1))
    p2 = vadd(s2.a, vscale(d2, t2))
    if vdist(p1, p2) > 1e-6:
        return None
    p = quantize(p1)
    if p in ends1 and p in ends2:
        return None  # legal junction
    return "cross"


def validate_sketch(sketch: Sketch) -> list[Diagnostic]:
    """Check all sketch invariants; an empty list means the sketch is valid."""
    diags: list[Diagnostic] = []
    for s in sketch.segments:
        exact = s.exact_length
        if exact <= 1e-9:
            diags.append(Diagnostic("zero-length", s.id, f"segment {s.id} has zero length"))
            continue
        if abs(exact - round(exact)) > 1e-6:
            diags.append(
                Diagnostic(
                    "non-integer-length",
                    s.id,
                    f"segment {s.id} has length {exact:.4f}; diagonals must follow "
                    f"Pythagorean-triple lengths",
                )
            )
        for name, p in (("a", s.a), ("b", s.b)):
            if not is_lattice_point(p):
                diags.append(
                    Diagnostic(
                        "endpoint-off-lattice",
                        s.id,
                        f"segment {s.id} endpoint {name}={p} is not on the lattice",
                    )
                )

    clean = [s for s in sketch.segments if s.exact_length > 1e-9]
    for i in range(len(clean)):
        for j in range(i + 1, len(clean)):
            kind = _segments_intersect_badly(clean[i], clean[j])
            if kind == "overlap":
                diags.append(
                    Diagnostic(
                        "segments-overlap",
                        f"{clean[i].id},{clean[j].id}",
                        f"segments {clean[i].id} and {clean[j].id} overlap; merge them",
                    )
                )
            elif kind == "cross":
                diags.append(
                    Diagnostic(
                        "segments-cross",
                        f"{clean[i].id},{clean[j].id}",
                        f"segments {clean[i].id} and {clean[j].id} touch away from "
                        f"shared endpoints",
                    )
                )

    node_positions = set()
    for s in clean:
        if abs(s.exact_length - round(s.exact_length)) <= 1e-6:
            node_positions.update(s.node_positions())
    for jt in sketch.joints:
        if quantize(jt.at) not in node_positions:
            diags.append(
                Diagnostic(
                    "dangling-joint",
                    f"joint@{jt.at}",
                    f"joint annotation at {jt.at} lies on no segment node",
                )
            )
    seg_ids = {s.id for s in sketch.segments}
    for sid in sketch.pass_through:
        if sid not in seg_ids:
            diags.append(
                Diagnostic("unknown-segment", sid, f"passThrough names unknown segment {sid!r}")
            )
    for gi, g in enumerate(sketch.symmetry):
        for sid in g.left + g.right:
            if sid not in seg_ids:
                diags.append(
                    Diagnostic(
                        "unknown-segment", sid, f"symmetry group {gi} names unknown segment {sid!r}"
                    )
                )
                continue
        for sid in g.right:
            if sid not in seg_ids:
                continue
            s = sketch.segment(sid)
            for p in (s.a, s.b):
                if not is_lattice_point(g.transform.apply(p)):
                    diags.append(
                        Diagnostic(
                            "non-lattice-transform",
                            f"group{gi}",
                            f"symmetry transform of group {gi} maps {p} off the lattice",
                        )
                    )
    return diags


@dataclass(frozen=True)
class GraphNode:
    id: int
    pos: Vec
    segments: frozenset[str]
    junction: bool
    joint_axes: tuple[str, ...] = ()
    hint_axis: str | None = None

    @property
    def joint_axis(self) -> str | None:
        return self.joint_axes[0] if len(self.joint_axes) == 1 else None

    @property
    def is_joint(self) -> bool:
        return bool(self.joint_axes)


@dataclass(frozen=True)
class GraphEdge:
    id: int
    u: int
    v: int
    segment: str


@dataclass
class GuidingGraph:
    nodes: list[GraphNode]
    edges: list[GraphEdge]
    node_at: dict[Vec, int] = field(default_factory=dict)
    adjacency: dict[int, tuple[tuple[int, int], ...]] = field(default_factory=dict)
    edges_by_segment: dict[str, tuple[int, ...]] = field(default_factory=dict)
    pass_through_segments: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.node_at:
            self.node_at = {n.pos: n.id for n in self.nodes}
        if not self.adjacency:
            adj: dict[int, list[tuple[int, int]]] = {n.id: [] for n in self.nodes}
            for e in self.edges:
                adj[e.u].append((e.id, e.v))
                adj[e.v].append((e.id, e.u))
            self.adjacency = {k: tuple(sorted(v)) for k, v in adj.items()}
        if not self.edges_by_segment:
            per: dict[str, list[int]] = {}
            for e in self.edges:
                per.setdefault(e.segment, []).append(e.id)
            self.edges_by_segment = {k: tuple(v) for k, v in per.items()}

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, node_id: int) -> int:
        return len(self.adjacency[node_id])

    def edge_nodes(self, edge_id: int) -> tuple[int, int]:
        e = self.edges[edge_id]
        return e.u, e.v


def build_guiding_graph(sketch: Sketch) -> GuidingGraph:
    """Distribute unit-spaced nodes along every segment and dedupe junctions.

    Requires a valid sketch (validate_sketch returns nothing); collinear
    overlaps raise because merged segments are the user's responsibility.
    """
    diags = validate_sketch(sketch)
    hard = [d for d in diags if d.rule in ("segments-overlap", "non-integer-length",
                                           "endpoint-off-lattice", "zero-length")]
    if hard:
        raise SketchError(
            "sketch has blocking diagnostics: " + "; ".join(d.message for d in hard),
            diagnostics=diags,
        )

    joint_at: dict[Vec, list[str]] = {}
    for j in sketch.joints:
        axes = joint_at.setdefault(quantize(j.at), [])
        if j.axis not in axes:
            axes.append(j.axis)
    hint_at = {quantize(p): a for p, a in sketch.orientation_hints}

    owner: dict[Vec, set[str]] = {}
    for s in sketch.segments:
        for p in s.node_positions():
            owner.setdefault(p, set()).add(s.id)

    positions = sorted(owner)
    node_ids = {p: i for i, p in enumerate(positions)}
    nodes = [
        GraphNode(
            id=node_ids[p],
            pos=p,
            segments=frozenset(owner[p]),
            junction=len(owner[p]) >= 2,
            joint_axes=tuple(joint_at.get(p, ())),
            hint_axis=hint_at.get(p),
        )
        for p in positions
    ]

    edges: list[GraphEdge] = []
    seen_pairs: dict[tuple[int, int], str] = {}
    for s in sorted(sketch.segments, key=lambda s: s.id):
        pts = s.node_positions()
        for k in range(len(pts) - 1):
            u, v = node_ids[pts[k]], node_ids[pts[k + 1]]
            key = (min(u, v), max(u, v))
            if key in seen_pairs:
                raise SketchError(
                    f"segments {seen_pairs[key]} and {s.id} produce a duplicate edge; "
                    f"merge overlapping segments"
                )
            seen_pairs[key] = s.id
            edges.append(GraphEdge(id=len(edges), u=key[0], v=key[1], segment=s.id))

    return GuidingGraph(
        nodes=nodes,
        edges=edges,
        pass_through_segments=frozenset(sketch.pass_through),
    )


@dataclass(frozen=True)
class ResolvedGroup:
    index: int
    left_segments: tuple[str, ...]
    right_segments: tuple[str, ...]
    transform: Transform
    node_pairs: tuple[tuple[int, int], ...]  # (left node, right node mapped by T)
    left_nodes: frozenset[int]
    right_nodes: frozenset[int]


@dataclass
class SymmetryIndex:
    groups: tuple[ResolvedGroup, ...]

    def __len__(self) -> int:
        return len(self.groups)

    def orientation_pairs(self) -> list[tuple[int, int]]:
        pairs = []
        for g in self.groups:
            pairs.extend(g.node_pairs)
        return pairs


def expand_symmetry(sketch: Sketch, graph: GuidingGraph) -> SymmetryIndex:
    """Resolve per-group node correspondences under each group's transform."""
    groups = []
    for gi, g in enumerate(sketch.symmetry):
        left_nodes = set()
        right_nodes = set()
        for n in graph.nodes:
            if n.segments & set(g.left):
                left_nodes.add(n.id)
            if n.segments & set(g.right):
                right_nodes.add(n.id)
        pairs = []
        for rid in sorted(right_nodes):
            image = g.transform.apply(graph.nodes[rid].pos)
            lid = graph.node_at.get(image)
            if lid is None or lid not in left_nodes:
                raise SketchError(
                    f"symmetry group {gi}: node {graph.nodes[rid].pos} maps to {image}, "
                    f"which is not a node of the left group"
                )
            pairs.append((lid, rid))
        groups.append(
            ResolvedGroup(
                index=gi,
                left_segments=g.left,
                right_segments=g.right,
                transform=g.transform,
                node_pairs=tuple(pairs),
                left_nodes=frozenset(left_nodes),
                right_nodes=frozenset(right_nodes),
            )
        )
    return SymmetryIndex(groups=tuple(groups))
