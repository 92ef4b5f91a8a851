/** Wizard view state and its pure transitions (rendering reads, never writes). */

import type {
  DiffOpDict,
  ProjectDict,
  StepResultDict,
  ValidationIssueDict,
} from "./api.js";

export const STEP_ORDER = [
  "project_data",
  "optimization",
  "transformers",
  "estimators",
  "review",
] as const;

export type StepId = (typeof STEP_ORDER)[number];

export interface WizardViewState {
  project: ProjectDict | null;
  activeStep: StepId;
  stepStatus: Record<string, string>;
  /** Code pane bytes. Always the last server-rendered script, never local. */
  script: string;
  lastDiff: DiffOpDict[];
  report: ValidationIssueDict[];
  /** Unsaved form values keyed by binding path. */
  pending: Record<string, string>;
  conflict: boolean;
}

export function initialState(): WizardViewState {
  return {
    project: null,
    activeStep: "project_data",
    stepStatus: {},
    script: "",
    lastDiff: [],
    report: [],
    pending: {},
    conflict: false,
  };
}

export function withProject(state: WizardViewState, project: ProjectDict): WizardViewState {
  return {
    ...state,
    project,
    stepStatus: project.step_progress,
    script: project.last_script,
    lastDiff: [],
    report: [],
    pending: {},
    conflict: false,
  };
}

/** Fold a step submission result in; the script is taken verbatim. */
export function applyStepResult(state: WizardViewState, result: StepResultDict): WizardViewState {
  return {
    ...state,
    project: result.project,
    stepStatus: result.step_status,
    script: result.script,
    lastDiff: result.diff,
    report: result.report,
    pending: {},
    conflict: false,
  };
}

export function applyConflict(state: WizardViewState): WizardViewState {
  return { ...state, conflict: true };
}

export function setActiveStep(state: WizardViewState, step: StepId): WizardViewState {
  return { ...state, activeStep: step, pending: {} };
}

export function setPending(state: WizardViewState, path: string, value: string): WizardViewState {
  return { ...state, pending: { ...state.pending, [path]: value } };
}

/** Line numbers (0-based) of the current script that the last diff touched. */
export function changedLineIndexes(diff: DiffOpDict[]): Set<number> {
  const changed = new Set<number>();
  for (const op of diff) {
    if (op.op === "delete") {
      continue; // nothing to highlight in the new text
    }
    for (let line = op.new_range[0]; line < op.new_range[1]; line += 1) {
      changed.add(line);
    }
  }
  return changed;
}

export function errorsForStep(report: ValidationIssueDict[], prefixes: string[]): ValidationIssueDict[] {
  return report.filter((issue) =>
    prefixes.some(
      (prefix) =>
        issue.path === prefix ||
        issue.path.startsWith(`${prefix}.`) ||
        issue.path.startsWith(`${prefix}[`),
    ),
  );
}

/** Context tags for palette queries. Mirrors the analysis-type tag only;
 * sample-size tags influence server-side defaults, not element availability
 * in the bundled content. */
export function paletteContext(project: ProjectDict | null): string[] {
  return project === null || !project.analysis_type ? [] : [project.analysis_type];
}
