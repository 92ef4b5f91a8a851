import { describe, expect, it } from "vitest";

import type { DiffOpDict, ProjectDict, StepResultDict } from "../src/api.js";
import {
  applyConflict,
  applyStepResult,
  changedLineIndexes,
  errorsForStep,
  initialState,
  paletteContext,
  setActiveStep,
  setPending,
  withProject,
} from "../src/state.js";

function fakeProject(overrides: Partial<ProjectDict> = {}): ProjectDict {
  return {
    id: "p1",
    revision: 3,
    name: "demo",
    analysis_type: "classification",
    data: null,
    training: {
      optimizer: null,
      outer_cv: null,
      inner_cv: null,
      metrics: [],
      best_config_metric: null,
    },
    elements: [],
    step_progress: { project_data: "empty" },
    last_script: "import pandas as pd\n",
    ...overrides,
  };
}

function fakeResult(script: string, diff: DiffOpDict[] = []): StepResultDict {
  return {
    project: fakeProject({ revision: 4 }),
    report: [],
    script,
    diff,
    step_status: { project_data: "complete" },
  };
}

describe("view state", () => {
  it("adopts the server script verbatim and never synthesizes code", () => {
    const state = withProject(initialState(), fakeProject());
    expect(state.script).toBe("import pandas as pd\n");
    const next = applyStepResult(state, fakeResult("x = 1\n"));
    expect(next.script).toBe("x = 1\n");
    expect(next.stepStatus.project_data).toBe("complete");
    expect(next.pending).toEqual({});
  });

  it("keeps pending edits until a submission lands", () => {
    let state = withProject(initialState(), fakeProject());
    state = setPending(state, "data.file_path", "a.csv");
    state = setPending(state, "data.n_samples", "10");
    expect(state.pending).toEqual({ "data.file_path": "a.csv", "data.n_samples": "10" });
    state = applyStepResult(state, fakeResult(""));
    expect(state.pending).toEqual({});
  });

  it("drops pending edits when the step changes", () => {
    let state = withProject(initialState(), fakeProject());
    state = setPending(state, "data.file_path", "a.csv");
    state = setActiveStep(state, "optimization");
    expect(state.pending).toEqual({});
    expect(state.activeStep).toBe("optimization");
  });

  it("flags conflicts without touching the script", () => {
    const state = withProject(initialState(), fakeProject());
    const conflicted = applyConflict(state);
    expect(conflicted.conflict).toBe(true);
    expect(conflicted.script).toBe(state.script);
  });
});

describe("changedLineIndexes", () => {
  it("collects new-range lines from inserts and replaces", () => {
    const diff: DiffOpDict[] = [
      { op: "replace", old_range: [2, 3], new_range: [2, 4], lines: ["a", "b"], owner: null },
      { op: "insert", old_range: [9, 9], new_range: [10, 11], lines: ["c"], owner: null },
    ];
    expect([...changedLineIndexes(diff)].sort((x, y) => x - y)).toEqual([2, 3, 10]);
  });

  it("ignores deletes (nothing to highlight in the new text)", () => {
    const diff: DiffOpDict[] = [
      { op: "delete", old_range: [1, 3], new_range: [1, 1], lines: [], owner: null },
    ];
    expect(changedLineIndexes(diff).size).toBe(0);
  });
});

describe("helpers", () => {
  it("filters report entries by step path prefixes", () => {
    const report = [
      { path: "data.file_path", severity: "error" as const, message: "m" },
      { path: "training.metrics[0]", severity: "error" as const, message: "m" },
      { path: "database", severity: "error" as const, message: "m" },
    ];
    expect(errorsForStep(report, ["data"]).map((issue) => issue.path)).toEqual([
      "data.file_path",
    ]);
  });

  it("palette context carries the analysis type", () => {
    expect(paletteContext(null)).toEqual([]);
    expect(paletteContext(fakeProject())).toEqual(["classification"]);
  });
});
