/** Shared document shapes: sketches, jobs, models, reports. */

export type Vec3 = [number, number, number];
export type AxisName = "X" | "Y" | "Z";
export type PlaneName = "xy" | "yz" | "zx";
export type PresetName = "faithful" | "simple" | "rigid-faithful" | "rigid-simple";

export interface SegmentDoc {
  id: string;
  a: Vec3;
  b: Vec3;
}

export interface JointDoc {
  at: Vec3;
  axis: AxisName;
}

export interface SymmetryDoc {
  left: string[];
  right: string[];
  transform:
    | { type: "reflection"; plane: "x" | "y" | "z"; value: number }
    | { type: "translation"; by: Vec3 };
}

export interface SketchDoc {
  version: number;
  segments: SegmentDoc[];
  joints?: JointDoc[];
  passThrough?: string[];
  symmetry?: SymmetryDoc[];
}

export interface Diagnostic {
  rule: string;
  subject: string;
  message: string;
}

export interface JobProgress {
  stage: string;
  temperature: number;
  bestF: number | null;
  iteration: number;
}

export interface JobState {
  id: string;
  state: "queued" | "running" | "done" | "failed";
  progress?: JobProgress;
  reason?: string;
}

export interface BeamDoc {
  uid: number;
  brick: string;
  kind: string;
  component: number;
  nodes: Vec3[];
  cells: Vec3[];
  layer: number;
  axis: AxisName;
  coveredEdges: number[];
}

export interface ConnectionDoc {
  mechanism: string;
  rho: number;
  heads: { cell: Vec3; axis: AxisName; holeType: string; beam: number }[];
  bodyCells: Vec3[];
  beams: number[];
  rigidHeads: boolean;
  joint: boolean;
}

export interface ModelDoc {
  version: number;
  preset: string | null;
  seed: number;
  sketch: SketchDoc;
  components: { id: number; axis: AxisName; nodes: number[] }[];
  beams: BeamDoc[];
  connections: ConnectionDoc[];
  uncoveredEdges: [number, number][];
  objective: {
    terms: Record<string, number>;
    counters: Record<string, number>;
    total: number;
  };
  stats: Record<string, number | null>;
}

export interface BalanceDoc {
  centerOfGravity: Vec3;
  supportPolygon: [number, number][];
  balanced: boolean;
  margin: number;
  grounded: boolean;
  diagnostics: string[];
}

export interface ReportDoc {
  version: number;
  balance: BalanceDoc;
  assemblable: boolean;
  assemblyOrder: {
    step: number;
    brick: string;
    kind: string;
    cells: Vec3[];
    insertFrom: string;
  }[];
  diagnostics: string[];
}
