"""Stepwise design flow: apply input, refresh defaults, regenerate, diff.

Every accepted mutation goes through the same cycle: bind the submitted
values, recompute context-dependent defaults for everything the user has not
pinned, validate, re-render the script, and report the line diff against the
previous render. Explicit user choices are never overwritten by defaults.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from pipegen import bindings as bindings_mod
from pipegen.codegen import build_document, diff_scripts, render
from pipegen.linediff import DiffOp
from pipegen.literals import HyperparamSpace
from pipegen.model import (
    Project,
    ValidationIssue,
    context_tags,
    cv_with_defaults,
    has_errors,
    instance_with_defaults,
    new_project,
    validate_project,
)
from pipegen.registry import (
    KFOLD_FAMILY_IDS,
    Registry,
    bundled_content_dir,
    default_fold_count,
    query_elements,
    resolve_defaults,
)

STEP_IDS = ("project_data", "optimization", "transformers", "estimators", "review")
STEPS_HEADER = ["step_id", "ordinal", "title", "description", "required_fields"]

STATUS_EMPTY = "empty"
STATUS_PARTIAL = "partial"
STATUS_COMPLETE = "complete"


class WizardError(Exception):
    pass


class UnknownStep(WizardError):
    pass


class OutOfRange(WizardError):
    pass


class CategoryBoundaryViolation(WizardError):
    pass


@dataclass(frozen=True)
class StepDefinition:
    step_id: str
    ordinal: int
    title: str
    description: str
    required_fields: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "step_id": self.step_id,
            "ordinal": self.ordinal,
            "title": self.title,
            "description": self.description,
            "required_fields": list(self.required_fields),
        }


@dataclass
class StepResult:
    project: Project
    report: list[ValidationIssue]
    script: str
    diff: list[DiffOp]
    step_status: dict[str, str]

    def to_dict(self) -> dict:
        return {
            "project": self.project.to_dict(),
            "report": [issue.to_dict() for issue in self.report],
            "script": self.script,
            "diff": [op.to_dict() for op in self.diff],
            "step_status": dict(self.step_status),
        }


def load_steps(path: str | Path) -> list[StepDefinition]:
    """Load the wizard's step table (didactic texts live there, not in code)."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != STEPS_HEADER:
            raise ValueError(f"{path}: steps header must be exactly {','.join(STEPS_HEADER)}")
        steps = []
        for cells in reader:
            if not cells or all(not c.strip() for c in cells):
                continue
            step_id, ordinal, title, description, required = cells
            steps.append(StepDefinition(
                step_id=step_id,
                ordinal=int(ordinal),
                title=title,
                description=description,
                required_fields=tuple(f.strip() for f in required.split(";") if f.strip()),
            ))
    steps.sort(key=lambda s: s.ordinal)
    if tuple(s.step_id for s in steps) != STEP_IDS:
        raise ValueError(f"{path}: steps must be exactly {', '.join(STEP_IDS)} in order")
    return steps


@lru_cache(maxsize=1)
def bundled_steps() -> tuple[StepDefinition, ...]:
    return tuple(load_steps(bundled_content_dir() / "steps.csv"))


def _refresh_instance_params(instance, registry: Registry, context) -> None:
    """Re-resolve defaults for parameters that are present but not user-pinned.

    Absent parameters stay absent: attaching happens once, at creation, so a
    deliberately removed parameter is not resurrected.
    """
    try:
        defaults = resolve_defaults(registry, instance.element_id, context)
    except KeyError:
        return
    for name, default in defaults.items():
        if name in instance.user_set:
            continue
        if isinstance(default, HyperparamSpace):
            if name in instance.hyperparams:
                instance.hyperparams[name] = default
        elif name in instance.fixed_params:
            instance.fixed_params[name] = default


def _refresh_cv(project: Project, attr: str, registry: Registry, context) -> None:
    training = project.training
    cv = getattr(training, attr)
    candidates = query_elements(registry, "cv_strategy", context)
    if cv is None:
        if not candidates:
            return
        cv = cv_with_defaults(candidates[0].element_id, registry, context)
        setattr(training, attr, cv)
    elif "strategy" not in cv.user_set and candidates \
            and candidates[0].element_id != cv.strategy:
        fresh = cv_with_defaults(candidates[0].element_id, registry, context)
        for name in cv.user_set:
            fresh.user_set.add(name)
            if name in cv.params and name in fresh.params:
                fresh.params[name] = cv.params[name]
            elif name not in cv.params:
                fresh.params.pop(name, None)  # the user removed it; keep it removed
        cv = fresh
        setattr(training, attr, cv)
    try:
        defaults = resolve_defaults(registry, cv.strategy, context)
    except KeyError:
        defaults = {}
    for name, default in defaults.items():
        if name in cv.user_set or isinstance(default, HyperparamSpace):
            continue
        if name in cv.params:
            cv.params[name] = default
    if ("n_splits" in cv.params and "n_splits" not in cv.user_set
            and cv.strategy in KFOLD_FAMILY_IDS
            and project.data is not None and project.data.n_samples >= 2):
        cv.params["n_splits"] = default_fold_count(project.data.n_samples)


def recompute_defaults(project: Project, registry: Registry) -> None:
    """Fill or refresh every defaultable field the user has not pinned."""
    context = context_tags(project)
    training = project.training

    if training.optimizer is None:
        optimizers = query_elements(registry, "optimizer", context)
        if optimizers:
            training.optimizer = instance_with_defaults(
                optimizers[0].element_id, registry, context, user_chosen=False)
    else:
        _refresh_instance_params(training.optimizer, registry, context)

    _refresh_cv(project, "outer_cv", registry, context)
    _refresh_cv(project, "inner_cv", registry, context)

    if "training.metrics" not in project.user_set:
        if project.analysis_type:
            training.metrics = [e.element_id
                                for e in query_elements(registry, "metric", context)]
        else:
            training.metrics = []
    if "training.best_config_metric" not in project.user_set:
        training.best_config_metric = training.metrics[0] if training.metrics else None

    for instance in project.elements:
        _refresh_instance_params(instance, registry, context)


def create_project(name: str, analysis_type: str, registry: Registry,
                   steps=None, project_id: str | None = None) -> Project:
    """New project at revision 1 with context defaults prefilled."""
    project = new_project(name, analysis_type, project_id=project_id)
    recompute_defaults(project, registry)
    project.step_progress = step_status(project, registry, steps)
    return project


def _finalize(old: Project, work: Project, registry: Registry, steps) -> StepResult:
    changed = work.mutation_dict() != old.mutation_dict()
    if changed:
        work.revision = old.revision + 1
    report = validate_project(work, registry)
    if not has_errors(report):
        new_document = build_document(work, registry)
        script = render(new_document)
        old_document = None
        if work.last_script and not has_errors(validate_project(old, registry)):
            old_document = build_document(old, registry)
        diff = diff_scripts(work.last_script, script, old_document, new_document)
        work.last_script = script
    else:
        script = work.last_script
        diff = []
    work.step_progress = step_status(work, registry, steps)
    return StepResult(project=work, report=report, script=script,
                      diff=diff, step_status=work.step_progress)


def apply_step_input(project: Project, step_id: str, bindings, registry: Registry,
                     steps=None) -> StepResult:
    """Apply one step's submitted bindings; all-or-nothing.

    On binding failure nothing changes and BindingBatchError carries the
    per-field problems. Validation problems do not reject the mutation: the
    updated project is returned with its report, the script staying at the
    last error-free render (with an empty diff) until the errors are fixed.
    """
    if step_id not in STEP_IDS:
        raise UnknownStep(f"unknown step {step_id!r}")
    work = project.clone()
    bindings_mod.apply_binding_set(work, bindings, registry)
    recompute_defaults(work, registry)
    work.visited_steps.add(step_id)
    return _finalize(project, work, registry, steps)


def reorder_element(project: Project, from_position: int, to_position: int,
                    registry: Registry, steps=None) -> StepResult:
    """Move a pipeline element; both positions must sit in the same category zone."""
    count = len(project.elements)
    if not (0 <= from_position < count and 0 <= to_position < count):
        raise OutOfRange(f"positions must be within 0..{count - 1}")

    def category_at(position: int) -> str:
        element = registry.elements.get(project.elements[position].element_id)
        return element.category if element else "?"

    if category_at(from_position) != category_at(to_position):
        raise CategoryBoundaryViolation(
            "transformers and estimators cannot change places with each other")
    work = project.clone()
    moved = work.elements.pop(from_position)
    work.elements.insert(to_position, moved)
    for position, instance in enumerate(work.elements):
        instance.position = position
    return _finalize(project, work, registry, steps)


def _step_error_paths(step_id: str, project: Project, registry: Registry):
    if step_id == "project_data":
        return ("name", "analysis_type", "data")
    if step_id == "optimization":
        return ("training",)
    prefixes = []
    wanted = "transformer" if step_id == "transformers" else "estimator"
    for index, instance in enumerate(project.elements):
        element = registry.elements.get(instance.element_id)
        if element is not None and element.category == wanted:
            prefixes.append(f"elements[{index}]")
    if step_id == "estimators":
        prefixes.append("elements")  # structural problems land on the estimator step
    return tuple(prefixes)


def _path_is_set(project: Project, registry: Registry, path: str) -> bool:
    data = project.data
    training = project.training
    if path == "data.file_path":
        return data is not None and bool(data.file_path.strip())
    if path == "data.feature_columns":
        return data is not None and bool(data.feature_columns)
    if path == "data.target_column":
        return data is not None and bool(data.target_column.strip())
    if path == "data.n_samples":
        return data is not None and data.n_samples > 0
    if path == "training.optimizer":
        return training.optimizer is not None
    if path in ("training.outer_cv", "training.inner_cv"):
        cv = getattr(training, path.split(".")[1])
        return cv is not None and bool(cv.strategy)
    if path == "training.metrics":
        return bool(training.metrics)
    if path == "training.best_config_metric":
        return training.best_config_metric is not None
    if path == "elements.transformers":
        return bool(project.transformers(registry))
    if path == "elements.estimators":
        return bool(project.estimators(registry))
    if path == "name":
        return bool(project.name.strip())
    if path == "analysis_type":
        return bool(project.analysis_type)
    return False


def _step_touched(step_id: str, project: Project, registry: Registry) -> bool:
    if step_id in project.visited_steps:
        return True
    if step_id == "project_data":
        return project.data is not None or bool(
            project.user_set & {"name", "analysis_type"}
            or any(flag.startswith("data.") for flag in project.user_set))
    if step_id == "optimization":
        if project.user_set & {"training.metrics", "training.best_config_metric"}:
            return True
        training = project.training
        for instance in (training.optimizer,):
            if instance is not None and instance.user_set:
                return True
        for cv in (training.outer_cv, training.inner_cv):
            if cv is not None and cv.user_set:
                return True
        return False
    if step_id == "transformers":
        return bool(project.transformers(registry))
    if step_id == "estimators":
        return bool(project.estimators(registry))
    return False  # review is only ever visited


def step_status(project: Project, registry: Registry, steps=None) -> dict[str, str]:
    """Per-step progress: empty, partial, or complete.

    A step is complete when everything it requires is set, it has no
    validation errors, and the user has actually worked on it (defaults alone
    do not complete a step). The first not-yet-complete step after completed
    ones is flagged as the one in progress.
    """
    steps = list(steps) if steps is not None else list(bundled_steps())
    report = validate_project(project, registry)
    error_paths = [issue.path for issue in report if issue.severity == "error"]

    statuses: dict[str, str] = {}
    for step in steps:
        if step.step_id == "review":
            if not error_paths:
                statuses["review"] = STATUS_COMPLETE
            elif "review" in project.visited_steps:
                statuses["review"] = STATUS_PARTIAL
            else:
                statuses["review"] = STATUS_EMPTY
            continue
        prefixes = _step_error_paths(step.step_id, project, registry)
        step_errors = [p for p in error_paths
                       if any(p == pre or p.startswith(pre + ".") or p.startswith(pre + "[")
                              for pre in prefixes)]
        required_ok = all(_path_is_set(project, registry, path)
                          for path in step.required_fields)
        touched = _step_touched(step.step_id, project, registry)
        if required_ok and touched and not step_errors:
            statuses[step.step_id] = STATUS_COMPLETE
        elif touched:
            statuses[step.step_id] = STATUS_PARTIAL
        else:
            statuses[step.step_id] = STATUS_EMPTY

    # Flag the frontier: the first incomplete step, once earlier work exists.
    ordered = [s.step_id for s in steps]
    first_incomplete = next((sid for sid in ordered
                             if statuses[sid] != STATUS_COMPLETE), None)
    if first_incomplete is not None and statuses[first_incomplete] == STATUS_EMPTY:
        before = ordered[:ordered.index(first_incomplete)]
        if any(statuses[sid] == STATUS_COMPLETE for sid in before):
            statuses[first_incomplete] = STATUS_PARTIAL
    return statuses
