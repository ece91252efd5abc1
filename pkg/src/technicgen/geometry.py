"""Lattice geometry helpers shared by the catalog, sketch, and search modules.

Positions live on (or between) integer lattice points; everything is kept as
plain tuples so it can be hashed, compared, and serialized without ceremony.
Axes are unsigned principal directions ("X", "Y", "Z"): a hole drilled along
+X is the same hole as one drilled along -X.
"""

from __future__ import annotations

import math
from itertools import permutations, product

Vec = tuple[float, float, float]

AXES = ("X", "Y", "Z")

AXIS_VECTORS: dict[str, Vec] = {
    "X": (1.0, 0.0, 0.0),
    "Y": (0.0, 1.0, 0.0),
    "Z": (0.0, 0.0, 1.0),
}

_QUANT = 1e-6


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vscale(a: Vec, s: float) -> Vec:
    return (a[0] * s, a[1] * s, a[2] * s)


def vdot(a: Vec, b: Vec) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def vnorm(a: Vec) -> float:
    return math.sqrt(vdot(a, a))

def vdist(a: Vec, b: Vec) -> float:
    return vnorm(vsub(a, b))


def quantize(p: Vec) -> Vec:
    """Round coordinates so float positions can be used as dict keys.

    Diagonal (Pythagorean) segments step by rational offsets such as 0.6;
    rounding to 1e-6 keeps those distinct while absorbing float noise.
    """
    return (round(p[0], 6) + 0.0, round(p[1], 6) + 0.0, round(p[2], 6) + 0.0)


def is_lattice_point(p: Vec, tol: float = 1e-6) -> bool:
    return all(abs(c - round(c)) <= tol for c in p)


def axis_of_vector(v: Vec) -> str | None:
    """Return the principal axis name of an axis-aligned vector, else None."""
    nz = [i for i, c in enumerate(v) if abs(c) > _QUANT]
    if len(nz) != 1:
        return None
    return AXES[nz[0]]


def perpendicular_axes(direction: Vec) -> tuple[str, ...]:
    """Principal axes perpendicular to an arbitrary direction vector."""
    return tuple(a for a in AXES if abs(vdot(AXIS_VECTORS[a], direction)) <= _QUANT)


def parallel_axis(direction: Vec) -> str | None:
    """Principal axis parallel to the direction, if any."""
    for a in AXES:
        av = AXIS_VECTORS[a]
        cross = (
            av[1] * direction[2] - av[2] * direction[1],
            av[2] * direction[0] - av[0] * direction[2],
            av[0] * direction[1] - av[1] * direction[0],
        )
        if vnorm(cross) <= _QUANT:
            return a
    return None


def _rotation_matrices() -> tuple[tuple[tuple[int, int, int], ...], ...]:
    """The 24 proper (det = +1) axis-aligned rotation matrices."""
    mats = []
    for perm in permutations(range(3)):
        for signs in product((1, -1), repeat=3):
            m = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
            for row, (col, s) in enumerate(zip(perm, signs)):
                m[row][col] = s
            det = (
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            )
            if det == 1:
                mats.append(tuple(tuple(r) for r in m))
    return tuple(mats)


ROTATIONS_24 = _rotation_matrices()


def rotate(m: tuple[tuple[int, int, int], ...], p: Vec) -> Vec:
    return (
        m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2],
        m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2],
        m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2],
    )


def rotate_axis(m: tuple[tuple[int, int, int], ...], axis: str) -> str:
    """Image of an unsigned principal axis under a rotation matrix."""
    img = rotate(m, AXIS_VECTORS[axis])
    out = axis_of_vector(img)
    assert out is not None
    return out


def convex_hull_2d(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Andrew's monotone chain; returns hull vertices in CCW order."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def point_to_hull_margin(point: tuple[float, float], hull: list[tuple[float, float]]) -> float:
    """Signed distance from a point to a convex hull boundary.

    Positive inside, negative outside. Degenerate hulls (point/segment) give
    zero margin on the hull and negative off it.
    """
    if not hull:
        return -math.inf
    if len(hull) == 1:
        return -math.hypot(point[0] - hull[0][0], point[1] - hull[0][1])
    if len(hull) == 2:
        return -_point_segment_distance(point, hull[0], hull[1])
    dists = []
    inside = True
    n = len(hull)
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        cross = (b[0] - a[0]) * (point[1] - a[1]) - (b[1] - a[1]) * (point[0] - a[0])
        if cross < 0:
            inside = False
        dists.append(_point_segment_distance(point, a, b))
    margin = min(dists)
    return margin if inside else -margin


def _point_segment_distance(p, a, b) -> float:
    ab = (b[0] - a[0], b[1] - a[1])
    ap = (p[0] - a[0], p[1] - a[1])
    denom = ab[0] * ab[0] + ab[1] * ab[1]
    if denom == 0:
        return math.hypot(*ap)
    t = max(0.0, min(1.0, (ap[0] * ab[0] + ap[1] * ab[1]) / denom))
    proj = (a[0] + t * ab[0], a[1] + t * ab[1])
    return math.hypot(p[0] - proj[0], p[1] - proj[1])
