/**
 * The studio controller: one tracked job, edit -> run -> review -> revise.
 * Headless (no DOM) so the whole loop is scriptable in tests; main.ts wires
 * it to the canvas and controls.
 */

import { ApiClient } from "./api.js";
import { EditorState } from "./editor.js";
import { Scene, TraceBuffer, buildScene } from "./scene.js";
import { Diagnostic, JobState, ModelDoc, PresetName, ReportDoc } from "./types.js";

export type StudioMode = "edit" | "running" | "review";

export class Studio {
  mode: StudioMode = "edit";
  editor = new EditorState();
  preset: PresetName = "simple";
  seed = 0;
  coolingRate = 0.999;
  jobId: string | null = null;
  trace = new TraceBuffer();
  model: ModelDoc | null = null;
  report: ReportDoc | null = null;
  scene: Scene | null = null;
  diagnostics: Diagnostic[] = [];
  failure: string | null = null;
  explode = 0;

  constructor(private api: ApiClient) {}

  get balanceVerdict(): string {
    if (!this.report) return "";
    const b = this.report.balance;
    if (!b.grounded) return "not grounded";
    return b.balanced
      ? `balanced (margin ${b.margin.toFixed(2)})`
      : `unbalanced (margin ${b.margin.toFixed(2)})`;
  }

  /** Validate locally and remotely; keep diagnostics for the editor view. */
  async validate(): Promise<boolean> {
    this.diagnostics = this.editor.localDiagnostics();
    if (this.diagnostics.length) return false;
    this.diagnostics = await this.api.validate(this.editor.toSketchDoc());
    return this.diagnostics.length === 0;
  }

  /** Submit the sketch, poll to completion, and build the review scene. */
  async run(
    sleep?: (ms: number) => Promise<void>,
  ): Promise<JobState> {
    if (!(await this.validate())) {
      this.failure = "sketch has diagnostics";
      return { id: "", state: "failed", reason: this.failure };
    }
    this.failure = null;
    this.trace = new TraceBuffer();
    this.mode = "running";
    this.jobId = await this.api.submit(this.editor.toSketchDoc(), {
      preset: this.preset,
      seed: this.seed,
      coolingRate: this.coolingRate,
    });
    const final = await this.api.pollUntilDone(
      this.jobId,
      (state) => {
        if (state.progress) {
          this.trace.push(
            state.progress.iteration,
            state.progress.bestF,
            state.progress.stage,
          );
        }
      },
      100,
      sleep,
    );
    if (final.state !== "done") {
      this.failure = final.reason ?? "job failed";
      this.mode = "edit";
      return final;
    }
    this.model = await this.api.model(this.jobId);
    this.report = await this.api.report(this.jobId);
    this.scene = buildScene(this.model, this.report, this.explode);
    this.mode = "review";
    return final;
  }

  /** Toggle the exploded-component view. */
  setExplode(magnitude: number): void {
    this.explode = magnitude;
    if (this.model) {
      this.scene = buildScene(this.model, this.report, magnitude);
    }
  }

  /** Back to the editor; the sketch stays intact for revision. */
  revise(): void {
    this.mode = "edit";
    this.jobId = null;
    this.model = null;
    this.report = null;
    this.scene = null;
  }

  async cancel(): Promise<void> {
    if (this.jobId) {
      await this.api.cancel(this.jobId);
    }
  }
}
