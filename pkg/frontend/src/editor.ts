/**
 * Editor state: segments drawn on principal-plane grids, annotations, and
 * import/export of sketch documents. All generation happens server-side;
 * this module only enforces what the client can check locally (integer
 * lengths, endpoint snapping, annotation targets).
 */

import {
  AxisName,
  Diagnostic,
  PlaneName,
  SegmentDoc,
  SketchDoc,
  Vec3,
} from "./types.js";

export const SNAP_TOLERANCE = 0.5;

export interface DrawResult {
  segment?: SegmentDoc;
  rejected?: string;
}

function dist(a: Vec3, b: Vec3): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

function roundVec(p: Vec3): Vec3 {
  return [Math.round(p[0]), Math.round(p[1]), Math.round(p[2])];
}

/** Map a 2D grid point on the active plane (with offset) into 3D. */
export function planePoint(plane: PlaneName, u: number, v: number, offset = 0): Vec3 {
  switch (plane) {
    case "xy":
      return [u, v, offset];
    case "yz":
      return [offset, u, v];
    case "zx":
      return [v, offset, u];
  }
}

export class EditorState {
  plane: PlaneName = "xy";
  planeOffset = 0;
  segments: SegmentDoc[] = [];
  joints: { at: Vec3; axis: AxisName }[] = [];
  passThrough: string[] = [];
  symmetry: SketchDoc["symmetry"] = [];
  private counter = 0;
  private importedExtras: Record<string, unknown> = {};

  /** Snap a raw point to the lattice, merging with nearby endpoints. */
  snapPoint(p: Vec3): Vec3 {
    for (const seg of this.segments) {
      for (const q of [seg.a, seg.b]) {
        if (dist(p, q) <= SNAP_TOLERANCE) {
          return [...q] as Vec3;
        }
      }
    }
    return roundVec(p);
  }

  /** Draw a segment between two raw points on the active plane. */
  drawSegment(rawA: Vec3, rawB: Vec3): DrawResult {
    const a = this.snapPoint(rawA);
    const b = this.snapPoint(rawB);
    const length = dist(a, b);
    if (length < 1e-9) {
      return { rejected: "zero-length drag discarded" };
    }
    if (Math.abs(length - Math.round(length)) > 1e-6) {
      return {
        rejected: `non-integer length ${length.toFixed(3)}; diagonals must ` +
          `follow Pythagorean triples`,
      };
    }
    const segment: SegmentDoc = { id: `s${this.counter++}`, a, b };
    this.segments.push(segment);
    return { segment };
  }

  removeSegment(id: string): boolean {
    const before = this.segments.length;
    this.segments = this.segments.filter((s) => s.id !== id);
    this.passThrough = this.passThrough.filter((p) => p !== id);
    return this.segments.length < before;
  }

  /** Annotate a joint rotation at a node position. */
  annotateJoint(at: Vec3, axis: AxisName): DrawResult & { ok?: boolean } {
    const onNode = this.segments.some((seg) => {
      const len = dist(seg.a, seg.b);
      for (let k = 0; k <= Math.round(len); k++) {
        const t = k / Math.max(Math.round(len), 1);
        const p: Vec3 = [
          seg.a[0] + (seg.b[0] - seg.a[0]) * t,
          seg.a[1] + (seg.b[1] - seg.a[1]) * t,
          seg.a[2] + (seg.b[2] - seg.a[2]) * t,
        ];
        if (dist(p, at) < 1e-6) return true;
      }
      return false;
    });
    if (!onNode) {
      return { rejected: "joint must sit on a segment node" };
    }
    this.joints.push({ at: [...at] as Vec3, axis });
    return { ok: true };
  }

  /** Toggle the pass-through flag of a segment (idempotent per state). */
  togglePassThrough(segmentId: string): boolean {
    if (!this.segments.some((s) => s.id === segmentId)) {
      return false;
    }
    if (this.passThrough.includes(segmentId)) {
      this.passThrough = this.passThrough.filter((x) => x !== segmentId);
    } else {
      this.passThrough.push(segmentId);
    }
    return true;
  }

  /** Pair two segment groups as symmetric under a transform. */
  annotateSymmetry(
    left: string[],
    right: string[],
    transform: NonNullable<SketchDoc["symmetry"]>[number]["transform"],
  ): DrawResult & { ok?: boolean } {
    if (left.length !== right.length) {
      return { rejected: "symmetric groups need matching segment counts" };
    }
    const known = new Set(this.segments.map((s) => s.id));
    for (const id of [...left, ...right]) {
      if (!known.has(id)) {
        return { rejected: `unknown segment ${id}` };
      }
    }
    this.symmetry = [...(this.symmetry ?? []), { left, right, transform }];
    return { ok: true };
  }

  /** Local validity checks the editor can run before submitting. */
  localDiagnostics(): Diagnostic[] {
    const out: Diagnostic[] = [];
    for (const seg of this.segments) {
      const len = dist(seg.a, seg.b);
      if (Math.abs(len - Math.round(len)) > 1e-6) {
        out.push({
          rule: "non-integer-length",
          subject: seg.id,
          message: `segment ${seg.id} has non-integer length`,
        });
      }
    }
    return out;
  }

  toSketchDoc(): SketchDoc {
    const doc: SketchDoc = {
      version: 1,
      segments: this.segments.map((s) => ({
        id: s.id,
        a: [...s.a] as Vec3,
        b: [...s.b] as Vec3,
      })),
      ...this.importedExtras,
    };
    if (this.joints.length) {
      doc.joints = this.joints.map((j) => ({ at: [...j.at] as Vec3, axis: j.axis }));
    }
    if (this.passThrough.length) doc.passThrough = [...this.passThrough];
    if (this.symmetry && this.symmetry.length) doc.symmetry = this.symmetry;
    return doc;
  }

  loadSketchDoc(doc: SketchDoc): void {
    this.segments = doc.segments.map((s, i) => ({
      id: s.id ?? `s${i}`,
      a: [...s.a] as Vec3,
      b: [...s.b] as Vec3,
    }));
    this.joints = (doc.joints ?? []).map((j) => ({
      at: [...j.at] as Vec3,
      axis: j.axis,
    }));
    this.passThrough = [...(doc.passThrough ?? [])];
    this.symmetry = doc.symmetry ? [...doc.symmetry] : [];
    this.counter = this.segments.length;
    // preserve fields this editor does not model so round-trips are lossless
    const known = new Set([
      "version", "segments", "joints", "passThrough", "symmetry",
    ]);
    this.importedExtras = {};
    for (const [key, value] of Object.entries(doc)) {
      if (!known.has(key)) this.importedExtras[key] = value;
    }
  }
}

/** Canonical serialization: stable key order, so round-trips compare equal. */
export function canonicalSketchJson(doc: SketchDoc): string {
  const ordered: Record<string, unknown> = { version: doc.version ?? 1 };
  ordered.segments = doc.segments.map((s) => ({ id: s.id, a: s.a, b: s.b }));
  if (doc.joints?.length) {
    ordered.joints = doc.joints.map((j) => ({ at: j.at, axis: j.axis }));
  }
  if (doc.passThrough?.length) ordered.passThrough = doc.passThrough;
  if (doc.symmetry?.length) ordered.symmetry = doc.symmetry;
  for (const [key, value] of Object.entries(doc)) {
    if (!(key in ordered)) ordered[key] = value;
  }
  return JSON.stringify(ordered, null, 1);
}
