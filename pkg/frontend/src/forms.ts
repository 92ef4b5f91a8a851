/** Step form builders. Inputs carry their binding path in data-path; edits
 * land in pending state and are submitted as form pairs when the step is
 * finished. Selectable items and parameter labels all carry tooltips. */

import type {
  ElementDetailDict,
  ElementInstanceDict,
  HyperparamSpaceDict,
  ParameterRowDict,
  ProjectDict,
  RegistryElementDict,
} from "./api.js";
import { SortableList, type ReorderMove } from "./dnd.js";
import type { TooltipManager } from "./tooltip.js";

export interface FormHooks {
  onPending(path: string, value: string): void;
  onAddElement(category: "transformer" | "estimator", elementId: string): void;
  onRemoveElement(position: number): void;
  onReorder(category: "transformer" | "estimator", move: ReorderMove): void;
}

export interface FormResources {
  doc: Document;
  project: ProjectDict;
  pending: Record<string, string>;
  palette: Map<string, RegistryElementDict[]>;
  details: Map<string, ElementDetailDict>;
  tooltips: TooltipManager;
  hooks: FormHooks;
}

/** Canonical literal spelling for non-string values; used to prefill inputs. */
export function literalText(value: unknown): string {
  if (typeof value === "string") {
    return `'${value.replace(/\\/g, "\\\\").replace(/'/g, "\\'")}'`;
  }
  if (typeof value === "boolean") {
    return value ? "True" : "False";
  }
  if (Array.isArray(value)) {
    return `[${value.map(literalText).join(", ")}]`;
  }
  return String(value);
}

export function fixedInputText(value: unknown, valueType: string): string {
  return valueType === "string" && typeof value === "string" ? value : literalText(value);
}

export function spaceInputText(space: HyperparamSpaceDict): string {
  if (space.kind === "categorical_list") {
    return literalText(space.values ?? []);
  }
  return `range(${literalText(space.min)}, ${literalText(space.max)}, ${literalText(space.step)})`;
}

function field(res: FormResources, labelText: string, input: HTMLElement,
               tooltip?: { text: string; docUrl?: string }): HTMLElement {
  const wrap = res.doc.createElement("div");
  const label = res.doc.createElement("label");
  label.textContent = labelText;
  if (tooltip) {
    res.tooltips.attach(label, () => Promise.resolve(tooltip));
  }
  wrap.appendChild(label);
  wrap.appendChild(input);
  return wrap;
}

function textInput(res: FormResources, path: string, value: string,
                   type: "text" | "number" = "text"): HTMLInputElement {
  const input = res.doc.createElement("input");
  input.type = type;
  input.value = res.pending[path] ?? value;
  input.dataset.path = path;
  input.addEventListener("input", () => res.hooks.onPending(path, input.value));
  return input;
}

function selectInput(res: FormResources, path: string, value: string,
                     options: { value: string; label: string; tooltip?: string; docUrl?: string }[],
): HTMLSelectElement {
  const select = res.doc.createElement("select");
  select.dataset.path = path;
  for (const option of options) {
    const el = res.doc.createElement("option");
    el.value = option.value;
    el.textContent = option.label;
    select.appendChild(el);
  }
  select.value = res.pending[path] ?? value;
  select.addEventListener("change", () => res.hooks.onPending(path, select.value));
  return select;
}

function elementOptions(elements: RegistryElementDict[]) {
  return elements.map((element) => ({
    value: element.element_id,
    label: element.display_name,
    tooltip: element.tooltip,
    docUrl: element.doc_url,
  }));
}

export function buildProjectDataForm(res: FormResources): HTMLElement {
  const form = res.doc.createElement("div");
  const data = res.project.data;
  form.appendChild(field(res, "Analysis type", selectInput(
    res, "analysis_type", res.project.analysis_type,
    [{ value: "classification", label: "Classification" },
     { value: "regression", label: "Regression" }]),
    { text: "Classification predicts categories; regression predicts continuous values. The choice filters the metrics and algorithms offered later." }));
  form.appendChild(field(res, "CSV file path",
    textInput(res, "data.file_path", data?.file_path ?? ""),
    { text: "Path of the data file the generated script will load." }));
  form.appendChild(field(res, "Feature columns",
    textInput(res, "data.feature_columns",
      data ? literalText(data.feature_columns) : "[]"),
    { text: "Columns used as model input, as a list like ['age', 'weight']." }));
  form.appendChild(field(res, "Target column",
    textInput(res, "data.target_column", data?.target_column ?? ""),
    { text: "The single column the model learns to predict." }));
  form.appendChild(field(res, "Number of samples",
    textInput(res, "data.n_samples", data ? String(data.n_samples) : "", "number"),
    { text: "Row count of the dataset; it steers the suggested number of cross-validation folds." }));
  return form;
}

function instanceParamInputs(res: FormResources, prefix: string,
                             instance: ElementInstanceDict,
                             rows: ParameterRowDict[]): HTMLElement {
  const grid = res.doc.createElement("div");
  grid.className = "param-grid";
  const seen = new Set<string>();
  for (const row of rows) {
    if (seen.has(row.param_name)) {
      continue;
    }
    seen.add(row.param_name);
    const bucket = row.kind === "fixed" ? "fixed_params" : "hyperparams";
    const path = `${prefix}.${bucket}.${row.param_name}`;
    let current = "";
    if (row.kind === "fixed" && row.param_name in instance.fixed_params) {
      current = fixedInputText(instance.fixed_params[row.param_name], row.value_type);
    } else if (row.kind === "hyperparameter" && row.param_name in instance.hyperparams) {
      current = spaceInputText(instance.hyperparams[row.param_name]);
    }
    const input = textInput(res, path, current);
    const labelText = row.kind === "hyperparameter"
      ? `${row.param_name} (search space)` : row.param_name;
    grid.appendChild(field(res, labelText, input,
      { text: row.tooltip, docUrl: row.doc_url }));
  }
  return grid;
}

function cvBlock(res: FormResources, which: "outer_cv" | "inner_cv",
                 title: string): HTMLElement {
  const block = res.doc.createElement("div");
  const cv = res.project.training[which];
  const strategies = res.palette.get("cv_strategy") ?? [];
  block.appendChild(field(res, title, selectInput(
    res, `training.${which}.strategy`, cv?.strategy ?? "",
    elementOptions(strategies)),
    { text: which === "outer_cv"
      ? "Outer loop: estimates how well the tuned pipeline generalizes."
      : "Inner loop: selects the best hyperparameter configuration." }));
  if (cv !== null) {
    const detail = res.details.get(cv.strategy);
    const grid = res.doc.createElement("div");
    grid.className = "param-grid";
    const seen = new Set<string>();
    for (const row of detail?.parameters ?? []) {
      if (row.kind !== "fixed" || seen.has(row.param_name)) {
        continue;
      }
      seen.add(row.param_name);
      const path = `training.${which}.params.${row.param_name}`;
      const current = row.param_name in cv.params
        ? fixedInputText(cv.params[row.param_name], row.value_type) : "";
      grid.appendChild(field(res, row.param_name, textInput(res, path, current),
        { text: row.tooltip, docUrl: row.doc_url }));
    }
    block.appendChild(grid);
  }
  return block;
}

export function buildOptimizationForm(res: FormResources): HTMLElement {
  const form = res.doc.createElement("div");
  const training = res.project.training;

  const optimizers = res.palette.get("optimizer") ?? [];
  form.appendChild(field(res, "Hyperparameter optimizer", selectInput(
    res, "training.optimizer.element_id",
    training.optimizer?.element_id ?? "", elementOptions(optimizers)),
    { text: "Strategy that searches the declared hyperparameter spaces." }));
  if (training.optimizer !== null) {
    const detail = res.details.get(training.optimizer.element_id);
    form.appendChild(instanceParamInputs(res, "training.optimizer",
      training.optimizer, detail?.parameters ?? []));
  }

  form.appendChild(cvBlock(res, "outer_cv", "Outer cross-validation"));
  form.appendChild(cvBlock(res, "inner_cv", "Inner cross-validation"));

  const metrics = res.palette.get("metric") ?? [];
  const metricsWrap = res.doc.createElement("div");
  const metricsLabel = res.doc.createElement("label");
  metricsLabel.textContent = "Performance metrics";
  metricsWrap.appendChild(metricsLabel);
  const chosen = new Set(training.metrics);
  for (const metric of metrics) {
    const row = res.doc.createElement("div");
    row.className = "checkbox-row";
    const box = res.doc.createElement("input");
    box.type = "checkbox";
    box.value = metric.element_id;
    box.checked = chosen.has(metric.element_id);
    box.dataset.metric = metric.element_id;
    box.addEventListener("change", () => {
      if (box.checked) {
        chosen.add(metric.element_id);
      } else {
        chosen.delete(metric.element_id);
      }
      const ordered = metrics.filter((m) => chosen.has(m.element_id))
        .map((m) => `'${m.element_id}'`);
      res.hooks.onPending("training.metrics", `[${ordered.join(", ")}]`);
    });
    const name = res.doc.createElement("span");
    name.textContent = metric.display_name;
    res.tooltips.attach(name, () =>
      Promise.resolve({ text: metric.tooltip, docUrl: metric.doc_url }));
    row.appendChild(box);
    row.appendChild(name);
    metricsWrap.appendChild(row);
  }
  form.appendChild(metricsWrap);

  form.appendChild(field(res, "Select best configuration by", selectInput(
    res, "training.best_config_metric", training.best_config_metric ?? "",
    metrics.map((m) => ({ value: m.element_id, label: m.display_name }))),
    { text: "The metric that decides which hyperparameter configuration wins." }));
  return form;
}

export function buildPipelineForm(res: FormResources,
                                  category: "transformer" | "estimator"): HTMLElement {
  const form = res.doc.createElement("div");
  const zone = res.project.elements.filter((instance) => {
    const element = res.details.get(instance.element_id);
    return element?.category === category;
  });

  const list = res.doc.createElement("ul");
  list.className = "pipeline-list";
  list.dataset.zone = category;
  const sortable = new SortableList((move) => res.hooks.onReorder(category, move));
  zone.forEach((instance, index) => {
    const item = res.doc.createElement("li");
    item.dataset.position = String(instance.position);
    const head = res.doc.createElement("div");
    const title = res.doc.createElement("strong");
    const detail = res.details.get(instance.element_id);
    title.textContent = detail?.display_name ?? instance.element_id;
    res.tooltips.attach(title, () => Promise.resolve(
      detail ? { text: detail.tooltip, docUrl: detail.doc_url } : null));
    head.appendChild(title);
    head.appendChild(instanceParamInputs(
      res, `elements[${instance.position}]`, instance, detail?.parameters ?? []));
    const remove = res.doc.createElement("button");
    remove.className = "ghost";
    remove.textContent = "Remove";
    remove.addEventListener("click", () =>
      res.hooks.onRemoveElement(instance.position));
    item.appendChild(head);
    item.appendChild(remove);
    sortable.attach(item, index);
    list.appendChild(item);
  });
  form.appendChild(list);

  const available = res.palette.get(category) ?? [];
  const addRow = res.doc.createElement("div");
  const picker = res.doc.createElement("select");
  picker.dataset.role = "palette";
  for (const element of available) {
    const option = res.doc.createElement("option");
    option.value = element.element_id;
    option.textContent = element.display_name;
    picker.appendChild(option);
  }
  const button = res.doc.createElement("button");
  button.className = "primary";
  button.textContent = category === "transformer" ? "Add step" : "Add algorithm";
  button.dataset.role = "add-element";
  button.addEventListener("click", () => {
    if (picker.value) {
      res.hooks.onAddElement(category, picker.value);
    }
  });
  addRow.appendChild(picker);
  addRow.appendChild(button);
  form.appendChild(addRow);

  const paletteInfo = res.doc.createElement("ul");
  paletteInfo.className = "issues";
  for (const element of available) {
    const entry = res.doc.createElement("li");
    entry.textContent = element.display_name;
    entry.dataset.paletteItem = element.element_id;
    res.tooltips.attach(entry, () =>
      Promise.resolve({ text: element.tooltip, docUrl: element.doc_url }));
    paletteInfo.appendChild(entry);
  }
  form.appendChild(paletteInfo);
  return form;
}

export function buildReviewForm(res: FormResources, baseUrl: string): HTMLElement {
  const form = res.doc.createElement("div");
  const message = res.doc.createElement("p");
  message.className = "step-description";
  message.textContent = "The full script is shown on the right. Every import, "
    + "parameter, and default you accepted appears explicitly in the code.";
  form.appendChild(message);
  const link = res.doc.createElement("a");
  link.href = `${baseUrl}/projects/${res.project.id}/script`;
  link.textContent = "Download script";
  link.setAttribute("download", "");
  form.appendChild(link);
  return form;
}
