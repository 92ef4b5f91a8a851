/** App controller: wires the API, view state, forms, code pane, and DnD. */

import {
  ApiClient,
  ConflictError,
  type ElementDetailDict,
  type ElementInstanceDict,
  type FormPair,
  type ProjectDict,
  type RegistryElementDict,
  type StepDefinitionDict,
  type StepResultDict,
} from "./api.js";
import { DiffPane } from "./diffview.js";
import type { ReorderMove } from "./dnd.js";
import {
  buildOptimizationForm,
  buildPipelineForm,
  buildProjectDataForm,
  buildReviewForm,
  fixedInputText,
  spaceInputText,
  type FormResources,
} from "./forms.js";
import {
  applyConflict,
  applyStepResult,
  initialState,
  paletteContext,
  setActiveStep,
  setPending,
  withProject,
  type StepId,
  type WizardViewState,
} from "./state.js";
import { TooltipManager } from "./tooltip.js";

const PALETTE_CATEGORIES = ["transformer", "estimator", "optimizer",
                            "cv_strategy", "metric"] as const;

export class App {
  readonly api: ApiClient;
  state: WizardViewState = initialState();
  steps: StepDefinitionDict[] = [];
  palette = new Map<string, RegistryElementDict[]>();
  details = new Map<string, ElementDetailDict>();
  tooltips: TooltipManager;
  /** Test hook: resolves once the most recent UI-triggered request settled. */
  lastOperation: Promise<void> = Promise.resolve();

  constructor(private readonly root: HTMLElement, private readonly baseUrl: string) {
    this.api = new ApiClient(baseUrl);
    this.tooltips = new TooltipManager(root.ownerDocument);
  }

  private get doc(): Document {
    return this.root.ownerDocument;
  }

  async boot(): Promise<void> {
    this.steps = await this.api.steps();
    await this.loadRegistry();
    this.renderLanding(await this.api.listProjects());
  }

  private async loadRegistry(): Promise<void> {
    const all = await this.api.registryElements();
    await Promise.all(all.map(async (element) => {
      this.details.set(element.element_id,
        await this.api.registryElement(element.element_id));
    }));
  }

  private async refreshPalette(): Promise<void> {
    const context = paletteContext(this.state.project);
    await Promise.all(PALETTE_CATEGORIES.map(async (category) => {
      this.palette.set(category,
        await this.api.registryElements(category, context));
    }));
  }

  async openProject(project: ProjectDict): Promise<void> {
    this.state = withProject(this.state, project);
    await this.refreshPalette();
    this.render();
  }

  async createAndOpen(name: string, analysisType: string): Promise<void> {
    const project = await this.api.createProject(name, analysisType);
    await this.openProject(project);
  }

  /** Collect pending edits and submit the active step. */
  async submitActiveStep(): Promise<void> {
    const project = this.state.project;
    if (project === null) {
      return;
    }
    const pairs: FormPair[] = Object.entries(this.state.pending);
    try {
      const result = await this.api.submitStep(
        project.id, this.state.activeStep, project.revision, pairs);
      await this.acceptResult(result);
    } catch (error) {
      await this.handleMutationError(error);
    }
  }

  private async acceptResult(result: StepResultDict): Promise<void> {
    this.state = applyStepResult(this.state, result);
    await this.refreshPalette();
    this.render();
  }

  private async handleMutationError(error: unknown): Promise<void> {
    if (error instanceof ConflictError && this.state.project !== null) {
      const fresh = await this.api.getProject(this.state.project.id);
      this.state = applyConflict(withProject(this.state, fresh));
      this.render();
      return;
    }
    throw error;
  }

  private track(work: Promise<void>): void {
    this.lastOperation = work;
  }

  private stepDefinition(stepId: string): StepDefinitionDict | undefined {
    return this.steps.find((step) => step.step_id === stepId);
  }

  /** Full form pairs reconstructing one element at a given position. */
  private elementPairs(instance: ElementInstanceDict, position: number): FormPair[] {
    const prefix = `elements[${position}]`;
    const pairs: FormPair[] = [[`${prefix}.element_id`, instance.element_id]];
    const seen = new Set<string>();
    for (const row of this.details.get(instance.element_id)?.parameters ?? []) {
      if (seen.has(row.param_name)) {
        continue;
      }
      seen.add(row.param_name);
      if (row.kind === "fixed") {
        pairs.push([`${prefix}.fixed_params.${row.param_name}`,
          row.param_name in instance.fixed_params
            ? fixedInputText(instance.fixed_params[row.param_name], row.value_type)
            : ""]);
      } else {
        pairs.push([`${prefix}.hyperparams.${row.param_name}`,
          row.param_name in instance.hyperparams
            ? spaceInputText(instance.hyperparams[row.param_name])
            : ""]);
      }
    }
    return pairs;
  }

  /** Insert at the end of the category zone. When estimators already exist,
   * a new transformer lands in the middle: the displaced elements are
   * rewritten one position later in the same atomic submission. */
  async addElement(category: "transformer" | "estimator", elementId: string): Promise<void> {
    const project = this.state.project;
    if (project === null) {
      return;
    }
    const elements = project.elements;
    const insertAt = category === "transformer"
      ? elements.filter((instance) =>
          this.details.get(instance.element_id)?.category === "transformer").length
      : elements.length;
    const pairs: FormPair[] = [[`elements[${insertAt}].element_id`, elementId]];
    for (let position = insertAt; position < elements.length; position += 1) {
      pairs.push(...this.elementPairs(elements[position], position + 1));
    }
    try {
      const result = await this.api.submitStep(
        project.id, this.state.activeStep, project.revision, pairs);
      await this.acceptResult(result);
    } catch (error) {
      await this.handleMutationError(error);
    }
  }

  async removeElement(position: number): Promise<void> {
    const project = this.state.project;
    if (project === null) {
      return;
    }
    try {
      const result = await this.api.submitStep(
        project.id, this.state.activeStep, project.revision,
        [[`elements[${position}].element_id`, ""]]);
      await this.acceptResult(result);
    } catch (error) {
      await this.handleMutationError(error);
    }
  }

  /** Optimistic local reorder, then the server call; revert on rejection. */
  async reorderZone(category: "transformer" | "estimator", move: ReorderMove): Promise<void> {
    const project = this.state.project;
    if (project === null) {
      return;
    }
    const zone = project.elements.filter((instance) =>
      this.details.get(instance.element_id)?.category === category);
    const from = zone[move.from]?.position;
    const to = zone[move.to]?.position;
    if (from === undefined || to === undefined) {
      return;
    }
    const before = project.elements.slice();
    const optimistic = project.elements.slice();
    const [dragged] = optimistic.splice(from, 1);
    optimistic.splice(to, 0, dragged);
    project.elements = optimistic;
    this.render();
    try {
      const result = await this.api.reorder(project.id, project.revision, from, to);
      await this.acceptResult(result);
    } catch (error) {
      project.elements = before;
      this.render();
      if (!(error instanceof ConflictError)) {
        this.showToast("Reorder rejected: steps cannot cross the algorithm boundary.");
        return;
      }
      await this.handleMutationError(error);
    }
  }

  showToast(message: string): void {
    const toast = this.doc.createElement("div");
    toast.className = "banner conflict";
    toast.dataset.role = "toast";
    toast.textContent = message;
    this.root.querySelector("main.step-pane")?.prepend(toast);
  }

  private renderLanding(projects: { id: string; name: string }[]): void {
    this.root.textContent = "";
    const panel = this.doc.createElement("div");
    panel.className = "landing";
    const heading = this.doc.createElement("h2");
    heading.textContent = "pipegen";
    panel.appendChild(heading);

    const nameInput = this.doc.createElement("input");
    nameInput.type = "text";
    nameInput.placeholder = "project name";
    nameInput.dataset.role = "new-name";
    const typeSelect = this.doc.createElement("select");
    typeSelect.dataset.role = "new-type";
    for (const value of ["classification", "regression"]) {
      const option = this.doc.createElement("option");
      option.value = value;
      option.textContent = value;
      typeSelect.appendChild(option);
    }
    const create = this.doc.createElement("button");
    create.className = "primary";
    create.textContent = "Create project";
    create.dataset.role = "create-project";
    create.addEventListener("click", () => {
      if (nameInput.value.trim()) {
        this.track(this.createAndOpen(nameInput.value.trim(), typeSelect.value));
      }
    });
    panel.appendChild(nameInput);
    panel.appendChild(typeSelect);
    panel.appendChild(create);

    if (projects.length > 0) {
      const listHeading = this.doc.createElement("h3");
      listHeading.textContent = "Existing projects";
      panel.appendChild(listHeading);
      const list = this.doc.createElement("ul");
      for (const summary of projects) {
        const item = this.doc.createElement("li");
        const open = this.doc.createElement("button");
        open.className = "ghost";
        open.textContent = summary.name;
        open.addEventListener("click", () => {
          this.track(this.api.getProject(summary.id)
            .then((project) => this.openProject(project)));
        });
        item.appendChild(open);
        list.appendChild(item);
      }
      panel.appendChild(list);
    }
    this.root.appendChild(panel);
  }

  render(): void {
    const project = this.state.project;
    if (project === null) {
      return;
    }
    this.tooltips.hide();
    this.root.textContent = "";

    const topbar = this.doc.createElement("header");
    topbar.className = "topbar";
    const brand = this.doc.createElement("h1");
    brand.textContent = "pipegen";
    const projectName = this.doc.createElement("span");
    projectName.className = "project-name";
    projectName.textContent = `${project.name} · ${project.analysis_type} · rev ${project.revision}`;
    topbar.appendChild(brand);
    topbar.appendChild(projectName);
    this.root.appendChild(topbar);

    const layout = this.doc.createElement("div");
    layout.className = "layout";
    layout.appendChild(this.renderNav());
    layout.appendChild(this.renderStepPane());
    layout.appendChild(this.renderCodePane());
    this.root.appendChild(layout);
  }

  private renderNav(): HTMLElement {
    const nav = this.doc.createElement("nav");
    nav.className = "steps";
    for (const step of this.steps) {
      const button = this.doc.createElement("button");
      button.dataset.step = step.step_id;
      if (step.step_id === this.state.activeStep) {
        button.classList.add("active");
      }
      const title = this.doc.createElement("span");
      title.textContent = `${step.ordinal}. ${step.title}`;
      const badge = this.doc.createElement("span");
      const status = this.state.stepStatus[step.step_id] ?? "empty";
      badge.className = `badge ${status}`;
      badge.textContent = status;
      button.appendChild(title);
      button.appendChild(badge);
      button.addEventListener("click", () => {
        this.state = setActiveStep(this.state, step.step_id as StepId);
        this.render();
      });
      nav.appendChild(button);
    }
    return nav;
  }

  private formResources(): FormResources {
    return {
      doc: this.doc,
      project: this.state.project as ProjectDict,
      pending: this.state.pending,
      palette: this.palette,
      details: this.details,
      tooltips: this.tooltips,
      hooks: {
        onPending: (path, value) => {
          this.state = setPending(this.state, path, value);
        },
        onAddElement: (category, elementId) =>
          this.track(this.addElement(category, elementId)),
        onRemoveElement: (position) => this.track(this.removeElement(position)),
        onReorder: (category, move) => this.track(this.reorderZone(category, move)),
      },
    };
  }

  private renderStepPane(): HTMLElement {
    const pane = this.doc.createElement("main");
    pane.className = "step-pane";
    const step = this.stepDefinition(this.state.activeStep);
    if (step === undefined) {
      return pane;
    }

    if (this.state.conflict) {
      const banner = this.doc.createElement("div");
      banner.className = "banner conflict";
      banner.dataset.role = "conflict-banner";
      banner.textContent = "Someone else changed this project; the latest "
        + "version has been reloaded. Please review and submit again.";
      pane.appendChild(banner);
    }

    const heading = this.doc.createElement("h2");
    heading.textContent = step.title;
    pane.appendChild(heading);
    const description = this.doc.createElement("p");
    description.className = "step-description";
    description.textContent = step.description;
    pane.appendChild(description);

    const resources = this.formResources();
    const body = this.doc.createElement("form");
    body.className = "step-form";
    body.addEventListener("submit", (event) => event.preventDefault());
    switch (this.state.activeStep) {
      case "project_data":
        body.appendChild(buildProjectDataForm(resources));
        break;
      case "optimization":
        body.appendChild(buildOptimizationForm(resources));
        break;
      case "transformers":
        body.appendChild(buildPipelineForm(resources, "transformer"));
        break;
      case "estimators":
        body.appendChild(buildPipelineForm(resources, "estimator"));
        break;
      case "review":
        body.appendChild(buildReviewForm(resources, this.baseUrl));
        break;
    }
    pane.appendChild(body);

    const issues = this.doc.createElement("ul");
    issues.className = "issues";
    for (const issue of this.state.report) {
      const item = this.doc.createElement("li");
      item.className = issue.severity;
      item.textContent = `${issue.path}: ${issue.message}`;
      issues.appendChild(item);
    }
    pane.appendChild(issues);

    const submitRow = this.doc.createElement("div");
    submitRow.className = "submit-row";
    const submit = this.doc.createElement("button");
    submit.className = "primary";
    submit.dataset.role = "submit-step";
    submit.textContent = "Apply step";
    submit.addEventListener("click", () => this.track(this.submitActiveStep()));
    submitRow.appendChild(submit);
    pane.appendChild(submitRow);
    return pane;
  }

  private renderCodePane(): HTMLElement {
    const aside = this.doc.createElement("aside");
    aside.className = "code-pane";
    const head = this.doc.createElement("div");
    head.className = "pane-head";
    const title = this.doc.createElement("span");
    title.dataset.role = "pane-title";
    title.textContent = `generated script · rev ${this.state.project?.revision ?? 0}`;
    head.appendChild(title);
    if (this.state.script !== "" && this.state.project !== null) {
      const download = this.doc.createElement("a");
      download.href = `${this.baseUrl}/projects/${this.state.project.id}/script`;
      download.textContent = "download";
      head.appendChild(download);
    }
    aside.appendChild(head);

    const pane = new DiffPane(aside);
    const errors = this.state.report.filter((issue) => issue.severity === "error");
    const placeholder = errors.length > 0
      ? `The script appears once the pipeline is runnable (${errors.length} problem(s) left).`
      : "Complete the steps to generate the script.";
    pane.render(this.state.script, this.state.lastDiff, placeholder);
    return aside;
  }
}
