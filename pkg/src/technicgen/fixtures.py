"""Bundled fixture sketches: squares, grids, a cube, a kite, a lifter, a plane.

Fixtures are produced as sketch documents (plain dicts) so they can be fed to
parse_sketch, written to disk, or posted to the service unchanged.
"""

from __future__ import annotations

from .sketch import Sketch, parse_sketch


def square_sketch(side: int = 9, z: int = 1) -> dict:
    """A single square in an XY plane; floats at z=1 so a flat model can
    layer on both sides of the sketch and still rest on the ground."""
    s = side
    return {
        "version": 1,
        "segments": [
            {"id": "bottom", "a": [0, 0, z], "b": [s, 0, z]},
            {"id": "right", "a": [s, 0, z], "b": [s, s, z]},
            {"id": "top", "a": [s, s, z], "b": [0, s, z]},
            {"id": "left", "a": [0, s, z], "b": [0, 0, z]},
        ],
    }


def line_sketch(length: int = 8, z: int = 1) -> dict:
    return {
        "version": 1,
        "segments": [{"id": "s0", "a": [0, 0, z], "b": [length, 0, z]}],
    }


def grid_sketch(n: int, cell: int = 4, z: int = 1) -> dict:
    """An n-by-n uniform grid of square cells in an XY plane.

    Grid lines are split at junctions, giving 2n(n+1) segments of length
    `cell` and (n+1)^2 junction nodes. The plane floats at z=1 by default so
    the flat model may layer on both sides of the sketch and still rest on
    the ground: connecting pins never have to dip below z=0.
    """
    if not 1 <= n <= 10:
        raise ValueError(f"grid size n must be in 1..10, got {n}")
    segments = []
    for j in range(n + 1):  # horizontal lines
        for i in range(n):
            segments.append(
                {
                    "id": f"h{j}_{i}",
                    "a": [i * cell, j * cell, z],
                    "b": [(i + 1) * cell, j * cell, z],
                }
            )
    for i in range(n + 1):  # vertical lines
        for j in range(n):
            segments.append(
                {
                    "id": f"v{i}_{j}",
                    "a": [i * cell, j * cell, z],
                    "b": [i * cell, (j + 1) * cell, z],
                }
            )
    return {"version": 1, "segments": segments}


def cube_sketch(edge: int = 6) -> dict:
    """A cube wireframe with its base on z=0."""
    e = edge
    corners = {
        "a": (0, 0, 0), "b": (e, 0, 0), "c": (e, e, 0), "d": (0, e, 0),
        "e": (0, 0, e), "f": (e, 0, e), "g": (e, e, e), "h": (0, e, e),
    }
    pairs = [
        ("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"),  # base
        ("e", "f"), ("f", "g"), ("g", "h"), ("h", "e"),  # top
        ("a", "e"), ("b", "f"), ("c", "g"), ("d", "h"),  # verticals
    ]
    return {
        "version": 1,
        "segments": [
            {"id": f"{u}{v}", "a": list(corners[u]), "b": list(corners[v])}
            for u, v in pairs
        ],
    }


def kite_sketch() -> dict:
    """A kite: a 3-4-5 right-triangle sail on a cross spar, all in one plane."""
    return {
        "version": 1,
        "segments": [
            {"id": "spine-low", "a": [3, 0, 1], "b": [3, 4, 1]},
            {"id": "spine-high", "a": [3, 4, 1], "b": [3, 8, 1]},
            {"id": "spar-left", "a": [0, 4, 1], "b": [3, 4, 1]},
            {"id": "spar-right", "a": [3, 4, 1], "b": [6, 4, 1]},
            {"id": "edge-left", "a": [0, 4, 1], "b": [3, 8, 1]},
            {"id": "edge-right", "a": [6, 4, 1], "b": [3, 8, 1]},
        ],
        "symmetry": [
            {
                "left": ["edge-left"],
                "right": ["edge-right"],
                "transform": {"type": "reflection", "plane": "x", "value": 3},
            }
        ],
    }


def lifter_sketch() -> dict:
    """A lifter: a four-legged deck carrying a fork mast and a control lever.

    Shaped so the orientation stage typically decomposes it into nine
    components: the deck plane, four legs, the mast ladder, two fork prongs,
    and the lever.
    """
    return {
        "version": 1,
        "segments": [
            # deck rectangle z=4; side edges split at y=3 for the crossbar,
            # front edge at x=4 for the lever mount
            {"id": "d0a", "a": [0, 0, 4], "b": [4, 0, 4]},
            {"id": "d0b", "a": [4, 0, 4], "b": [8, 0, 4]},
            {"id": "d1a", "a": [8, 0, 4], "b": [8, 3, 4]},
            {"id": "d1b", "a": [8, 3, 4], "b": [8, 6, 4]},
            {"id": "d2", "a": [8, 6, 4], "b": [0, 6, 4]},
            {"id": "d3a", "a": [0, 6, 4], "b": [0, 3, 4]},
            {"id": "d3b", "a": [0, 3, 4], "b": [0, 0, 4]},
            # deck crossbar at y=3, split at the mast rail mounts x=2,6
            {"id": "cx0", "a": [0, 3, 4], "b": [2, 3, 4]},
            {"id": "cx1", "a": [2, 3, 4], "b": [6, 3, 4]},
            {"id": "cx2", "a": [6, 3, 4], "b": [8, 3, 4]},
            # corner legs
            {"id": "leg0", "a": [0, 0, 0], "b": [0, 0, 4]},
            {"id": "leg1", "a": [8, 0, 0], "b": [8, 0, 4]},
            {"id": "leg2", "a": [8, 6, 0], "b": [8, 6, 4]},
            {"id": "leg3", "a": [0, 6, 0], "b": [0, 6, 4]},
            # mast ladder (plane y=3), rails split at z=7 for the fork prongs
            {"id": "m0a", "a": [2, 3, 4], "b": [2, 3, 7]},
            {"id": "m0b", "a": [2, 3, 7], "b": [2, 3, 10]},
            {"id": "m1a", "a": [6, 3, 4], "b": [6, 3, 7]},
            {"id": "m1b", "a": [6, 3, 7], "b": [6, 3, 10]},
            {"id": "m2", "a": [2, 3, 10], "b": [6, 3, 10]},
            # fork prongs pointing forward at z=7
            {"id": "fork0", "a": [2, 3, 7], "b": [2, 0, 7]},
            {"id": "fork1", "a": [6, 3, 7], "b": [6, 0, 7]},
            # control lever on the deck front edge
            {"id": "lever", "a": [4, 0, 4], "b": [4, 0, 7]},
        ],
    }


def plane_sketch() -> dict:
    """A small plane-like craft: fuselage, mirrored wings, tail fin."""
    return {
        "version": 1,
        "segments": [
            {"id": "fuselage", "a": [0, 0, 1], "b": [12, 0, 1]},
            {"id": "wing-l", "a": [5, 0, 1], "b": [5, 7, 1]},
            {"id": "wing-r", "a": [5, 0, 1], "b": [5, -7, 1]},
            {"id": "wing-l-tip", "a": [5, 7, 1], "b": [8, 7, 1]},
            {"id": "wing-r-tip", "a": [5, -7, 1], "b": [8, -7, 1]},
            {"id": "tail-fin", "a": [12, 0, 1], "b": [12, 0, 5]},
            {"id": "tail-l", "a": [12, 0, 1], "b": [12, 3, 1]},
            {"id": "tail-r", "a": [12, 0, 1], "b": [12, -3, 1]},
        ],
        "symmetry": [
            {
                "left": ["wing-l", "wing-l-tip"],
                "right": ["wing-r", "wing-r-tip"],
                "transform": {"type": "reflection", "plane": "y", "value": 0},
            },
            {
                "left": ["tail-l"],
                "right": ["tail-r"],
                "transform": {"type": "reflection", "plane": "y", "value": 0},
            },
        ],
    }


def hinge_sketch() -> dict:
    """Two bars meeting at an annotated rotating joint."""
    return {
        "version": 1,
        "segments": [
            {"id": "arm-a", "a": [0, 0, 1], "b": [5, 0, 1]},
            {"id": "arm-b", "a": [5, 0, 1], "b": [10, 0, 1]},
        ],
        "joints": [{"at": [5, 0, 1], "axis": "Z"}],
    }


FIXTURES: dict[str, dict] = {}


def _register() -> None:
    FIXTURES.update(
        {
            "square": square_sketch(),
            "line": line_sketch(),
            "grid1": grid_sketch(1),
            "grid2": grid_sketch(2),
            "cube": cube_sketch(),
            "kite": kite_sketch(),
            "lifter": lifter_sketch(),
            "plane": plane_sketch(),
            "hinge": hinge_sketch(),
        }
    )


_register()


def fixture_sketch(name: str) -> Sketch:
    return parse_sketch(FIXTURES[name])
