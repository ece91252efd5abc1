"""End-to-end generation: sketch document in, model + report documents out.

This is the one code path behind both the CLI and the HTTP service, so equal
inputs and seeds produce identical documents regardless of entry point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .analysis import BrickModel, ModelReport, analyze_model, build_model
from .catalog import Catalog, default_catalog
from .connect import ConnectionPlan, uncovered_after_plan
from .engine import AnnealParams, RefineResult, refine
from .layout import Layout
from .objective import ObjectiveWeights
from .orientation import (
    OrientationAssignment,
    SAParams,
    decompose_components,
    solve_orientations,
)
from .placements import index_placements
from .sketch import (
    GuidingGraph,
    Sketch,
    SymmetryIndex,
    build_guiding_graph,
    expand_symmetry,
    parse_sketch,
    validate_sketch,
)


@dataclass
class GenerationResult:
    sketch: Sketch
    graph: GuidingGraph
    symmetry: SymmetryIndex
    assignment: OrientationAssignment
    components: list
    refine_result: RefineResult
    model: BrickModel
    report: ModelReport
    preset: str | None
    weights: ObjectiveWeights
    seed: int
    params: AnnealParams

    @property
    def layout(self) -> Layout:
        return self.refine_result.layout

    @property
    def plan(self) -> ConnectionPlan:
        return self.refine_result.plan


def generate(
    sketch_doc,
    preset: str | None = "faithful",
    weights: ObjectiveWeights | None = None,
    seed: int = 0,
    cooling_rate: float = 0.999,
    catalog: Catalog | None = None,
    orientation_attempts: int = 5,
    progress=None,
    reorient_prob: float = 0.2,
) -> GenerationResult:
    """Run the full pipeline on a sketch document (dict, JSON text, or path)."""
    catalog = catalog or default_catalog()
    sketch = sketch_doc if isinstance(sketch_doc, Sketch) else parse_sketch(sketch_doc)
    graph = build_guiding_graph(sketch)
    symmetry = expand_symmetry(sketch, graph)
    assignment = solve_orientations(
        graph, symmetry, SAParams(rng_seed=seed), attempts=orientation_attempts
    )
    components = decompose_components(graph, assignment)
    index = index_placements(components, graph, catalog, assignment)
    if weights is None:
        weights = ObjectiveWeights.preset(preset or "faithful")
    params = AnnealParams(r=cooling_rate, rng_seed=seed, reorient_prob=reorient_prob)
    result = refine(
        graph, index, weights, params, catalog, symmetry=symmetry, progress=progress
    )
    model = build_model(result.layout, result.plan, catalog, graph)
    report = analyze_model(model, catalog, symmetry)
    return GenerationResult(
        sketch=sketch,
        graph=graph,
        symmetry=symmetry,
        assignment=assignment,
        components=components,
        refine_result=result,
        model=model,
        report=report,
        preset=preset,
        weights=weights,
        seed=seed,
        params=params,
    )


def model_document(res: GenerationResult, catalog: Catalog | None = None) -> dict:
    catalog = catalog or default_catalog()
    layout = res.layout
    graph = res.graph
    beams = []
    for uid in sorted(layout.beams):
        b = layout.beams[uid]
        beams.append(
            {
                "uid": uid,
                "brick": b.placement.brick_id,
                "kind": b.placement.kind,
                "component": b.placement.component,
                "nodes": [list(graph.nodes[n].pos) for n in b.placement.nodes],
                "cells": [list(c) for c in layout.beam_cells(b)],
                "layer": b.layer,
                "axis": b.axis,
                "coveredEdges": list(b.placement.covered_edges),
            }
        )
    connections = []
    for use in res.plan.uses:
        connections.append(
            {
                "mechanism": use.mechanism_id,
                "rho": use.rho,
                "heads": [
                    {"cell": list(c), "axis": a, "holeType": t, "beam": uid}
                    for c, a, t, uid in use.heads
                ],
                "bodyCells": [list(c) for c in use.body_cells],
                "beams": list(use.beams),
                "rigidHeads": use.rigid_heads,
                "joint": use.joint,
            }
        )
    still_uncovered = sorted(uncovered_after_plan(layout, res.plan, catalog))
    components = [
        {"id": c.id, "axis": c.axis, "nodes": sorted(c.nodes), "normal": c.normal}
        for c in res.components
    ]
    return {
        "version": 1,
        "preset": res.preset,
        "seed": res.seed,
        "coolingRate": res.params.r,
        "weights": res.weights.to_dict(),
        "sketch": res.sketch.to_dict(),
        "orientation": {"axes": list(res.assignment.axes)},
        "components": components,
        "beams": beams,
        "connections": connections,
        "uncoveredEdges": [
            list(graph.edge_nodes(e)) for e in still_uncovered
        ],
        "objective": res.refine_result.breakdown.to_dict(),
        "stats": {
            "beamCount": len(layout.beams),
            "brickCount": len(layout.beams) + len(res.plan.uses),
            "totalBeamLength": layout.sum_length,
            "gaps": res.refine_result.breakdown.n_gap,
            "collisions": res.refine_result.breakdown.n_col,
            "connectionFailures": res.refine_result.breakdown.n_cfail,
            "iterations": res.refine_result.iterations,
            "switchIteration": res.refine_result.switch_iteration,
        },
    }


def report_document(res: GenerationResult) -> dict:
    doc = res.report.to_dict()
    doc["version"] = 1
    doc["objective"] = res.refine_result.breakdown.to_dict()
    return doc


def dumps_document(doc: dict) -> str:
    """Canonical JSON serialization (stable key order, stable floats)."""
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def validation_diagnostics(sketch_doc) -> list[dict]:
    sketch = sketch_doc if isinstance(sketch_doc, Sketch) else parse_sketch(sketch_doc)
    return [d.to_dict() for d in validate_sketch(sketch)]
