/** Typed client for the pipegen HTTP API. All code shown in the UI comes
 * from these responses; the client never synthesizes script text. */

export interface HyperparamSpaceDict {
  kind: string;
  values?: unknown[];
  min?: number;
  max?: number;
  step?: number;
}

export interface ElementInstanceDict {
  element_id: string;
  position: number;
  fixed_params: Record<string, unknown>;
  hyperparams: Record<string, HyperparamSpaceDict>;
  user_set: string[];
}

export interface CvConfigDict {
  strategy: string;
  params: Record<string, unknown>;
  user_set: string[];
}

export interface TrainingDict {
  optimizer: ElementInstanceDict | null;
  outer_cv: CvConfigDict | null;
  inner_cv: CvConfigDict | null;
  metrics: string[];
  best_config_metric: string | null;
}

export interface DataSourceDict {
  file_path: string;
  feature_columns: string[];
  target_column: string;
  n_samples: number;
}

export interface ProjectDict {
  id: string;
  revision: number;
  name: string;
  analysis_type: string;
  data: DataSourceDict | null;
  training: TrainingDict;
  elements: ElementInstanceDict[];
  step_progress: Record<string, string>;
  last_script: string;
}

export interface DiffOpDict {
  op: "insert" | "delete" | "replace";
  old_range: [number, number];
  new_range: [number, number];
  lines: string[];
  owner: string | null;
}

export interface ValidationIssueDict {
  path: string;
  severity: "error" | "warning";
  message: string;
}

export interface StepResultDict {
  project: ProjectDict;
  report: ValidationIssueDict[];
  script: string;
  diff: DiffOpDict[];
  step_status: Record<string, string>;
}

export interface RegistryElementDict {
  element_id: string;
  category: string;
  display_name: string;
  tags: string[];
  imports: string[];
  construct_template: string;
  tooltip: string;
  doc_url: string;
}

export interface ParameterRowDict {
  param_name: string;
  kind: "fixed" | "hyperparameter";
  value_type: string;
  default: string;
  applies_tags: string[];
  tooltip: string;
  doc_url: string;
}

export interface ElementDetailDict extends RegistryElementDict {
  parameters: ParameterRowDict[];
}

export interface StepDefinitionDict {
  step_id: string;
  ordinal: number;
  title: string;
  description: string;
  required_fields: string[];
}

export interface ProjectSummaryDict {
  id: string;
  name: string;
  analysis_type: string;
  revision: number;
  updated_at: string;
}

export type FormPair = [string, string];

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`API error ${status}`);
  }
}

export class ConflictError extends ApiError {
  constructor(readonly currentRevision: number) {
    super(409, { current_revision: currentRevision });
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 204) {
      return undefined as T;
    }
    if (!response.ok) {
      let detail: unknown = null;
      try {
        detail = (await response.json()).detail;
      } catch {
        detail = await response.text().catch(() => null);
      }
      if (
        response.status === 409 &&
        detail !== null &&
        typeof detail === "object" &&
        "current_revision" in (detail as Record<string, unknown>)
      ) {
        throw new ConflictError((detail as { current_revision: number }).current_revision);
      }
      throw new ApiError(response.status, detail);
    }
    const text = await response.text();
    const contentType = response.headers.get("content-type") ?? "";
    return (contentType.includes("application/json") ? JSON.parse(text) : text) as T;
  }

  createProject(name: string, analysisType: string): Promise<ProjectDict> {
    return this.request("POST", "/projects", { name, analysis_type: analysisType });
  }

  listProjects(): Promise<ProjectSummaryDict[]> {
    return this.request("GET", "/projects");
  }

  getProject(id: string): Promise<ProjectDict> {
    return this.request("GET", `/projects/${id}`);
  }

  submitStep(id: string, stepId: string, revision: number, pairs: FormPair[]): Promise<StepResultDict> {
    return this.request("PUT", `/projects/${id}/steps/${stepId}`, { revision, pairs });
  }

  reorder(id: string, revision: number, from: number, to: number): Promise<StepResultDict> {
    return this.request("POST", `/projects/${id}/reorder`, { revision, from, to });
  }

  getScriptText(id: string): Promise<string> {
    return this.request("GET", `/projects/${id}/script`);
  }

  registryElements(category?: string, tags?: string[]): Promise<RegistryElementDict[]> {
    const query = new URLSearchParams();
    if (category) query.set("category", category);
    if (tags !== undefined) query.set("tags", tags.join(","));
    const suffix = query.toString() ? `?${query}` : "";
    return this.request("GET", `/registry/elements${suffix}`);
  }

  registryElement(elementId: string): Promise<ElementDetailDict> {
    return this.request("GET", `/registry/elements/${elementId}`);
  }

  steps(): Promise<StepDefinitionDict[]> {
    return this.request("GET", "/steps");
  }
}
