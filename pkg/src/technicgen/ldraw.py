"""Best-effort LDraw (.ldr) export.

Catalog ids double as LDraw part numbers where a real part exists; composite
mechanisms without a single part file are emitted as comments. Units: one
hole pitch = 20 LDU; LDraw's vertical axis is -Y, ours is +Z.
"""

from __future__ import annotations

from .analysis import AssemblyStep, BrickModel
from .geometry import Vec

LDU = 20.0

# our catalog id -> LDraw part file (straight beams, pins, axles)
PART_FILES = {
    "18654": "18654.dat",
    "43857": "43857.dat",
    "32523": "32523.dat",
    "32449": "32449.dat",
    "32316": "32316.dat",
    "32063": "32063.dat",
    "32524": "32524.dat",
    "40490": "40490.dat",
    "32525": "32525.dat",
    "41239": "41239.dat",
    "32278": "32278.dat",
    "32056": "32056.dat",
    "32526": "32526.dat",
    "2780": "2780.dat",
    "32556": "32556.dat",
    "43093": "43093.dat",
    "3704": "3704.dat",
    "4519": "4519.dat",
    "32138": "32138.dat",
}

_COLORS = {"beam": 14, "mechanism": 0}  # yellow beams, black connectors


def _to_ldraw(p: Vec) -> tuple[float, float, float]:
    return (p[0] * LDU, -p[2] * LDU, p[1] * LDU)


def _basis(direction: Vec, axis: Vec) -> tuple[Vec, Vec, Vec]:
    # column vectors: part X along the brick direction, part Y along the axis
    d = direction
    a = axis
    c = (
        d[1] * a[2] - d[2] * a[1],
        d[2] * a[0] - d[0] * a[2],
        d[0] * a[1] - d[1] * a[0],
    )
    return d, a, c


def export_ldr(model: BrickModel, steps: list[AssemblyStep] | None = None,
               name: str = "technicgen model") -> str:
    """Serialize the model as an LDraw file, one STEP per assembly step."""
    lines = [f"0 {name}", "0 Name: model.ldr", "0 Author: technicgen"]
    ordered = (
        [s.brick for s in steps] if steps else sorted(model.bricks, key=lambda b: b.id)
    )
    from .geometry import AXIS_VECTORS, vsub

    for brick in ordered:
        part = PART_FILES.get(brick.ref)
        center = tuple(
            sum(c[i] for c in brick.cells) / len(brick.cells) for i in range(3)
        )
        x, y, z = _to_ldraw(center)
        if part is None:
            lines.append(
                f"0 // composite mechanism {brick.ref} at {center} (no part file)"
            )
            if steps:
                lines.append("0 STEP")
            continue
        if len(brick.cells) > 1:
            d = vsub(brick.cells[1], brick.cells[0])
        else:
            d = (1.0, 0.0, 0.0)
        axis = AXIS_VECTORS.get(brick.hole_axis or "Z", (0.0, 0.0, 1.0))
        bx, by, bz = _basis(d, axis)
        mx, my, mz = _to_ldraw(bx), _to_ldraw(by), _to_ldraw(bz)
        rot = [
            mx[0] / LDU, my[0] / LDU, mz[0] / LDU,
            mx[1] / LDU, my[1] / LDU, mz[1] / LDU,
            mx[2] / LDU, my[2] / LDU, mz[2] / LDU,
        ]
        color = _COLORS.get(brick.kind, 7)
        nums = " ".join(f"{v:g}" for v in rot)
        lines.append(f"1 {color} {x:g} {y:g} {z:g} {nums} {part}")
        if steps:
            lines.append("0 STEP")
    return "\n".join(lines) + "\n"
