/** Browser wiring: canvas grid editor, controls, trace plot, model review. */

import { ApiClient } from "./api.js";
import { planePoint } from "./editor.js";
import { project } from "./scene.js";
import { Studio } from "./studio.js";
import { PlaneName, PresetName, Vec3 } from "./types.js";

const GRID = 24; // pixels per lattice unit in the editor

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setup(): void {
  const api = new ApiClient(
    (window as { TECHNICGEN_API?: string }).TECHNICGEN_API ?? "http://127.0.0.1:7777",
  );
  const studio = new Studio(api);

  const editorCanvas = el<HTMLCanvasElement>("editor");
  const viewCanvas = el<HTMLCanvasElement>("viewer");
  const traceCanvas = el<HTMLCanvasElement>("trace");
  const status = el<HTMLDivElement>("status");
  const verdict = el<HTMLDivElement>("verdict");
  const presetSelect = el<HTMLSelectElement>("preset");
  const planeSelect = el<HTMLSelectElement>("plane");
  const modeSelect = el<HTMLSelectElement>("tool");
  const runButton = el<HTMLButtonElement>("run");
  const reviseButton = el<HTMLButtonElement>("revise");
  const explodeRange = el<HTMLInputElement>("explode");
  const stepRange = el<HTMLInputElement>("steps");
  const importInput = el<HTMLTextAreaElement>("sketch-json");

  let pending: Vec3 | null = null;

  function toLattice(event: MouseEvent): [number, number] {
    const rect = editorCanvas.getBoundingClientRect();
    const u = Math.round((event.clientX - rect.left - 30) / GRID);
    const v = Math.round((rect.bottom - event.clientY - 30) / GRID);
    return [u, v];
  }

  function drawEditor(): void {
    const ctx = editorCanvas.getContext("2d")!;
    ctx.clearRect(0, 0, editorCanvas.width, editorCanvas.height);
    ctx.strokeStyle = "#ddd";
    for (let u = 0; u <= 20; u++) {
      ctx.beginPath();
      ctx.moveTo(30 + u * GRID, editorCanvas.height - 30);
      ctx.lineTo(30 + u * GRID, 30);
      ctx.stroke();
      ctx.beginPath();
      ctx.moveTo(30, editorCanvas.height - 30 - u * GRID);
      ctx.lineTo(editorCanvas.width - 30, editorCanvas.height - 30 - u * GRID);
      ctx.stroke();
    }
    ctx.strokeStyle = "#1456c4";
    ctx.lineWidth = 4;
    const plane = planeSelect.value as PlaneName;
    for (const seg of studio.editor.segments) {
      const [au, av] = planeToUV(plane, seg.a);
      const [bu, bv] = planeToUV(plane, seg.b);
      ctx.beginPath();
      ctx.moveTo(30 + au * GRID, editorCanvas.height - 30 - av * GRID);
      ctx.lineTo(30 + bu * GRID, editorCanvas.height - 30 - bv * GRID);
      ctx.stroke();
    }
    ctx.lineWidth = 1;
    ctx.fillStyle = "#c0392b";
    for (const joint of studio.editor.joints) {
      const [u, v] = planeToUV(plane, joint.at);
      ctx.beginPath();
      ctx.arc(30 + u * GRID, editorCanvas.height - 30 - v * GRID, 6, 0, 7);
      ctx.fill();
    }
    importInput.value = JSON.stringify(studio.editor.toSketchDoc());
  }

  function planeToUV(plane: PlaneName, p: Vec3): [number, number] {
    switch (plane) {
      case "xy":
        return [p[0], p[1]];
      case "yz":
        return [p[1], p[2]];
      case "zx":
        return [p[2], p[0]];
    }
  }

  function drawViewer(): void {
    const ctx = viewCanvas.getContext("2d")!;
    ctx.clearRect(0, 0, viewCanvas.width, viewCanvas.height);
    if (!studio.scene) return;
    const cx = viewCanvas.width / 2;
    const cy = viewCanvas.height / 2;
    const limit = Number(stepRange.value);
    const boxes = [...studio.scene.boxes].sort(
      (a, b) =>
        a.center[0] + a.center[1] + a.center[2] -
        (b.center[0] + b.center[1] + b.center[2]),
    );
    let drawn = 0;
    for (const box of boxes) {
      if (limit && drawn / boxes.length > limit / 100) break;
      drawn += 1;
      const [x, y] = project(box.center);
      ctx.fillStyle = box.color;
      const size = box.kind === "beam" ? 14 : 8;
      ctx.fillRect(cx + x - size / 2, cy + y - size / 2, size, size);
    }
    const overlay = studio.scene.overlay;
    if (overlay.supportPolygon.length >= 2) {
      ctx.strokeStyle = "#10ac84";
      ctx.beginPath();
      overlay.supportPolygon.forEach(([px, py], i) => {
        const [x, y] = project([px, py, 0]);
        if (i === 0) ctx.moveTo(cx + x, cy + y);
        else ctx.lineTo(cx + x, cy + y);
      });
      ctx.closePath();
      ctx.stroke();
    }
    if (overlay.cog) {
      const [x, y] = project(overlay.cog.at);
      ctx.fillStyle = overlay.cog.inside ? "#10ac84" : "#d63031";
      ctx.beginPath();
      ctx.arc(cx + x, cy + y, 7, 0, 7);
      ctx.fill();
    }
  }

  function drawTrace(): void {
    const ctx = traceCanvas.getContext("2d")!;
    ctx.clearRect(0, 0, traceCanvas.width, traceCanvas.height);
    const line = studio.trace.polyline(traceCanvas.width - 10, traceCanvas.height - 10);
    if (!line.length) return;
    ctx.strokeStyle = "#2e86de";
    ctx.beginPath();
    line.forEach(([x, y], i) => {
      if (i === 0) ctx.moveTo(5 + x, 5 + y);
      else ctx.lineTo(5 + x, 5 + y);
    });
    ctx.stroke();
  }

  editorCanvas.addEventListener("mousedown", (event) => {
    const [u, v] = toLattice(event);
    const plane = planeSelect.value as PlaneName;
    const p = planePoint(plane, u, v, 0);
    if (modeSelect.value === "draw") {
      if (pending === null) {
        pending = p;
        status.textContent = `from ${JSON.stringify(p)}...`;
      } else {
        const result = studio.editor.drawSegment(pending, p);
        status.textContent = result.rejected ?? `drew ${result.segment?.id}`;
        pending = null;
        drawEditor();
      }
    } else if (modeSelect.value === "joint") {
      const result = studio.editor.annotateJoint(p, "Z");
      status.textContent = result.rejected ?? "joint added";
      drawEditor();
    }
  });

  runButton.addEventListener("click", async () => {
    studio.preset = presetSelect.value as PresetName;
    status.textContent = "running...";
    const timer = setInterval(() => {
      drawTrace();
    }, 250);
    try {
      const final = await studio.run();
      if (final.state === "done") {
        status.textContent =
          `done: ${studio.model?.stats["beamCount"]} beams, ` +
          `${studio.model?.stats["gaps"]} gaps`;
        verdict.textContent = studio.balanceVerdict;
        drawViewer();
      } else {
        status.textContent = `failed: ${studio.failure}`;
        verdict.textContent = "";
      }
    } finally {
      clearInterval(timer);
      drawTrace();
    }
  });

  reviseButton.addEventListener("click", () => {
    studio.revise();
    verdict.textContent = "";
    status.textContent = "editing (sketch preserved)";
    drawEditor();
  });

  explodeRange.addEventListener("input", () => {
    studio.setExplode(Number(explodeRange.value) / 20);
    drawViewer();
  });
  stepRange.addEventListener("input", drawViewer);

  importInput.addEventListener("change", () => {
    try {
      studio.editor.loadSketchDoc(JSON.parse(importInput.value));
      status.textContent = "sketch imported";
      drawEditor();
    } catch (error) {
      status.textContent = `import failed: ${error}`;
    }
  });

  drawEditor();
}

if (typeof document !== "undefined") {
  window.addEventListener("DOMContentLoaded", setup);
}
