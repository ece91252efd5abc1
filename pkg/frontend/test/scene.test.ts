import { describe, expect, it } from "vitest";

import { TraceBuffer, buildScene, componentColor, project } from "../src/scene.js";
import { ModelDoc, ReportDoc } from "../src/types.js";
import { loadRecorded } from "./stub.js";

describe("scene building", () => {
  const recorded = loadRecorded();
  const model = recorded.model as unknown as ModelDoc;
  const report = recorded.report as unknown as ReportDoc;

  it("emits one box per beam cell plus connection pegs", () => {
    const scene = buildScene(model, report);
    const beamCells = model.beams.reduce((acc, b) => acc + b.cells.length, 0);
    const beamBoxes = scene.boxes.filter((b) => b.kind === "beam");
    expect(beamBoxes).toHaveLength(beamCells);
    const mechBoxes = scene.boxes.filter((b) => b.kind === "mechanism");
    expect(mechBoxes.length).toBeGreaterThan(0);
  });

  it("colors beams by component", () => {
    const scene = buildScene(model, report);
    for (const box of scene.boxes.filter((b) => b.kind === "beam")) {
      expect(box.color).toBe(componentColor(box.component));
    }
  });

  it("exploded view moves components apart", () => {
    const flat = buildScene(model, report, 0);
    const exploded = buildScene(model, report, 2);
    const moved = exploded.boxes.some((box, i) => {
      const other = flat.boxes[i];
      return (
        box.kind === "beam" &&
        (box.center[0] !== other.center[0] ||
          box.center[1] !== other.center[1] ||
          box.center[2] !== other.center[2])
      );
    });
    expect(moved).toBe(true);
  });

  it("carries the balance overlay", () => {
    const scene = buildScene(model, report);
    expect(scene.overlay.cog).toBeDefined();
    expect(scene.overlay.cog!.inside).toBe(true);
    expect(scene.overlay.supportPolygon.length).toBeGreaterThanOrEqual(3);
    expect(scene.stepCount).toBeGreaterThan(0);
  });

  it("projects distinct lattice points to distinct screen points", () => {
    const a = project([0, 0, 0]);
    const b = project([1, 0, 0]);
    const c = project([0, 0, 1]);
    expect(a).not.toEqual(b);
    expect(a).not.toEqual(c);
  });
});

describe("trace buffer", () => {
  it("normalizes points into the plot area", () => {
    const trace = new TraceBuffer();
    trace.push(0, 100, "simplified");
    trace.push(500, 60, "simplified");
    trace.push(1000, 20, "full");
    trace.push(1500, null, "full"); // ignored
    const line = trace.polyline(200, 100);
    expect(line).toHaveLength(3);
    expect(line[0][0]).toBe(0);
    expect(line[2][0]).toBe(200);
    expect(line[0][1]).toBe(0); // highest F at the top
    expect(line[2][1]).toBe(100);
  });
});
