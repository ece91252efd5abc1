/**
 * Turns model/report documents into drawable primitives: one box per beam
 * cell, one peg per connection head, plus overlays (center of gravity,
 * support polygon) and an exploded-by-component view. Rendering stays
 * simple: axonometric projection onto a 2D canvas.
 */

import { BalanceDoc, ModelDoc, ReportDoc, Vec3 } from "./types.js";

export interface Box {
  kind: "beam" | "mechanism";
  center: Vec3;
  component: number;
  color: string;
  beam: number | null;
}

export interface Overlay {
  cog?: { at: Vec3; inside: boolean };
  supportPolygon: [number, number][];
}

export interface Scene {
  boxes: Box[];
  overlay: Overlay;
  gapFree: boolean;
  balanced: boolean | null;
  stepCount: number;
}

const PALETTE = [
  "#e6b422", "#2e86de", "#d63031", "#10ac84", "#8e44ad",
  "#e67e22", "#16a085", "#c0392b", "#2c3e50", "#7f8c8d",
];

export function componentColor(component: number): string {
  return PALETTE[component % PALETTE.length];
}

export function explodedOffset(
  model: ModelDoc,
  component: number,
  magnitude: number,
): Vec3 {
  const comp = model.components.find((c) => c.id === component);
  if (!comp || magnitude === 0) return [0, 0, 0];
  const axis = comp.axis;
  const direction: Vec3 =
    axis === "X" ? [1, 0, 0] : axis === "Y" ? [0, 1, 0] : [0, 0, 1];
  const sign = component % 2 === 0 ? 1 : -1;
  return [
    direction[0] * magnitude * sign * (1 + component * 0.25),
    direction[1] * magnitude * sign * (1 + component * 0.25),
    direction[2] * magnitude * sign * (1 + component * 0.25),
  ];
}

export function buildScene(
  model: ModelDoc,
  report: ReportDoc | null,
  explode = 0,
): Scene {
  const boxes: Box[] = [];
  for (const beam of model.beams) {
    const off = explodedOffset(model, beam.component, explode);
    for (const cell of beam.cells) {
      boxes.push({
        kind: "beam",
        center: [cell[0] + off[0], cell[1] + off[1], cell[2] + off[2]],
        component: beam.component,
        color: componentColor(beam.component),
        beam: beam.uid,
      });
    }
  }
  for (const conn of model.connections) {
    for (const head of conn.heads) {
      boxes.push({
        kind: "mechanism",
        center: head.cell,
        component: -1,
        color: "#222222",
        beam: head.beam,
      });
    }
    for (const cell of conn.bodyCells) {
      boxes.push({
        kind: "mechanism",
        center: cell,
        component: -1,
        color: "#555555",
        beam: null,
      });
    }
  }
  const balance: BalanceDoc | null = report?.balance ?? null;
  const overlay: Overlay = {
    supportPolygon: balance?.supportPolygon ?? [],
  };
  if (balance) {
    overlay.cog = { at: balance.centerOfGravity, inside: balance.balanced };
  }
  return {
    boxes,
    overlay,
    gapFree: (model.stats["gaps"] ?? 0) === 0,
    balanced: balance ? balance.balanced : null,
    stepCount: report?.assemblyOrder.length ?? 0,
  };
}

/** Axonometric projection used by the canvas view. */
export function project(p: Vec3, scale = 18): [number, number] {
  const x = (p[0] - p[1]) * 0.866 * scale;
  const y = (p[0] + p[1]) * 0.5 * scale - p[2] * scale;
  return [x, -y];
}

export interface TracePoint {
  iteration: number;
  bestF: number;
  stage: string;
}

export class TraceBuffer {
  points: TracePoint[] = [];

  push(iteration: number, bestF: number | null, stage: string): void {
    if (bestF === null || Number.isNaN(bestF)) return;
    this.points.push({ iteration, bestF, stage });
  }

  /** Normalized polyline for a width x height plot area. */
  polyline(width: number, height: number): [number, number][] {
    if (!this.points.length) return [];
    const xs = this.points.map((p) => p.iteration);
    const ys = this.points.map((p) => p.bestF);
    const x0 = Math.min(...xs);
    const x1 = Math.max(...xs, x0 + 1);
    const y0 = Math.min(...ys);
    const y1 = Math.max(...ys, y0 + 1e-9);
    return this.points.map((p) => [
      ((p.iteration - x0) / (x1 - x0)) * width,
      height - ((p.bestF - y0) / (y1 - y0)) * height,
    ]);
  }
}
