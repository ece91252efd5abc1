import { describe, expect, it } from "vitest";

import { EditorState, canonicalSketchJson, planePoint } from "../src/editor.js";
import { SketchDoc } from "../src/types.js";

describe("editor drawing", () => {
  it("draws an 8-unit segment along x", () => {
    const editor = new EditorState();
    const result = editor.drawSegment([0, 0, 0], [8, 0, 0]);
    expect(result.segment).toBeDefined();
    expect(editor.segments).toHaveLength(1);
    expect(editor.segments[0].b).toEqual([8, 0, 0]);
  });

  it("merges endpoints within half a unit of an existing junction", () => {
    const editor = new EditorState();
    editor.drawSegment([0, 0, 0], [5, 0, 0]);
    const result = editor.drawSegment([5.3, 0.2, 0], [5.3, 4, 0]);
    expect(result.segment!.a).toEqual([5, 0, 0]);
  });

  it("rejects the unit diagonal inline", () => {
    const editor = new EditorState();
    const result = editor.drawSegment([0, 0, 0], [1, 1, 0]);
    expect(result.rejected).toContain("non-integer");
    expect(editor.segments).toHaveLength(0);
  });

  it("accepts Pythagorean diagonals", () => {
    const editor = new EditorState();
    const result = editor.drawSegment([0, 0, 0], [3, 4, 0]);
    expect(result.segment).toBeDefined();
  });

  it("discards zero-length drags", () => {
    const editor = new EditorState();
    const result = editor.drawSegment([2, 2, 0], [2.2, 2.1, 0]);
    expect(result.rejected).toContain("zero-length");
  });
});

describe("annotations", () => {
  it("places joints on segment nodes only", () => {
    const editor = new EditorState();
    editor.drawSegment([0, 0, 0], [6, 0, 0]);
    expect(editor.annotateJoint([3, 0, 0], "Z").ok).toBe(true);
    expect(editor.annotateJoint([3, 5, 0], "Z").rejected).toBeDefined();
    expect(editor.joints).toHaveLength(1);
  });

  it("pass-through toggle is idempotent", () => {
    const editor = new EditorState();
    const { segment } = editor.drawSegment([0, 0, 0], [4, 0, 0]);
    editor.togglePassThrough(segment!.id);
    expect(editor.passThrough).toEqual([segment!.id]);
    editor.togglePassThrough(segment!.id);
    editor.togglePassThrough(segment!.id);
    expect(editor.passThrough).toEqual([segment!.id]);
  });

  it("rejects symmetry groups with mismatched segment counts", () => {
    const editor = new EditorState();
    editor.drawSegment([0, 1, 0], [4, 1, 0]);
    editor.drawSegment([0, -1, 0], [4, -1, 0]);
    editor.drawSegment([0, 3, 0], [4, 3, 0]);
    const bad = editor.annotateSymmetry(
      ["s0", "s2"],
      ["s1"],
      { type: "reflection", plane: "y", value: 0 },
    );
    expect(bad.rejected).toContain("matching segment counts");
    const good = editor.annotateSymmetry(
      ["s0"],
      ["s1"],
      { type: "reflection", plane: "y", value: 0 },
    );
    expect(good.ok).toBe(true);
  });
});

describe("plane mapping", () => {
  it("maps grid points onto each principal plane", () => {
    expect(planePoint("xy", 2, 3, 0)).toEqual([2, 3, 0]);
    expect(planePoint("yz", 2, 3, 1)).toEqual([1, 2, 3]);
    expect(planePoint("zx", 2, 3, 0)).toEqual([3, 0, 2]);
  });
});

describe("sketch document round-trip", () => {
  it("export(import(doc)) is byte-identical for canonical docs", () => {
    const doc: SketchDoc = {
      version: 1,
      segments: [
        { id: "h0_0", a: [0, 0, 0], b: [4, 0, 0] },
        { id: "v0_0", a: [0, 0, 0], b: [0, 4, 0] },
      ],
      joints: [{ at: [0, 0, 0], axis: "Z" }],
      passThrough: ["h0_0"],
    };
    const canonical = canonicalSketchJson(doc);
    const editor = new EditorState();
    editor.loadSketchDoc(JSON.parse(canonical));
    expect(canonicalSketchJson(editor.toSketchDoc())).toBe(canonical);
  });

  it("preserves fields it does not model", () => {
    const doc = {
      version: 1,
      segments: [{ id: "s0", a: [0, 0, 0], b: [4, 0, 0] }],
      orientationHints: [{ at: [0, 0, 0], axis: "Z" }],
    } as unknown as SketchDoc;
    const editor = new EditorState();
    editor.loadSketchDoc(doc);
    const out = editor.toSketchDoc() as unknown as Record<string, unknown>;
    expect(out.orientationHints).toEqual([{ at: [0, 0, 0], axis: "Z" }]);
  });
});
