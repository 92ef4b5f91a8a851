"""The project document: everything a user specifies about one ML analysis.

A project is a plain value object. Mutation, persistence, and rendering live
elsewhere; this module only defines the structure, the canonical JSON form,
the derived tag context, and structural validation against a registry.
"""

from __future__ import annotations

import copy
import json
import uuid
from dataclasses import dataclass, field

from pipegen import registry as registry_mod
from pipegen.literals import HyperparamSpace, LiteralValue, MalformedLiteral, matches_type
from pipegen.registry import KFOLD_FAMILY_IDS, Registry

ANALYSIS_TYPES = ("classification", "regression")

# Projects with fewer samples than these bounds gain the corresponding
# context tag; content tables key conditional defaults off them.
@dataclass(frozen=True)
class TagPolicy:
    small_sample_below: int = 100
    tiny_sample_below: int = 30


DEFAULT_TAG_POLICY = TagPolicy()

# Keys that are wizard bookkeeping rather than analysis content.
_BOOKKEEPING_KEYS = ("user_set", "visited_steps", "step_progress", "last_script", "revision", "id")


@dataclass
class ElementInstance:
    """One configured building block (pipeline step or optimizer)."""

    element_id: str
    position: int = 0
    fixed_params: dict[str, LiteralValue] = field(default_factory=dict)
    hyperparams: dict[str, HyperparamSpace] = field(default_factory=dict)
    user_set: set[str] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "element_id": self.element_id,
            "position": self.position,
            "fixed_params": copy.deepcopy(self.fixed_params),
            "hyperparams": {k: v.to_dict() for k, v in self.hyperparams.items()},
            "user_set": sorted(self.user_set),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ElementInstance":
        return cls(
            element_id=data["element_id"],
            position=int(data.get("position", 0)),
            fixed_params=copy.deepcopy(data.get("fixed_params", {})),
            hyperparams={k: HyperparamSpace.from_dict(v)
                         for k, v in data.get("hyperparams", {}).items()},
            user_set=set(data.get("user_set", ())),
        )


@dataclass
class DataSourceConfig:
    file_path: str = ""
    feature_columns: list[str] = field(default_factory=list)
    target_column: str = ""
    n_samples: int = 0

    def to_dict(self) -> dict:
        return {
            "file_path": self.file_path,
            "feature_columns": list(self.feature_columns),
            "target_column": self.target_column,
            "n_samples": self.n_samples,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DataSourceConfig":
        return cls(
            file_path=data.get("file_path", ""),
            feature_columns=list(data.get("feature_columns", ())),
            target_column=data.get("target_column", ""),
            n_samples=int(data.get("n_samples", 0)),
        )


@dataclass
class CvConfig:
    strategy: str = ""
    params: dict[str, LiteralValue] = field(default_factory=dict)
    user_set: set[str] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "params": copy.deepcopy(self.params),
            "user_set": sorted(self.user_set),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CvConfig":
        return cls(
            strategy=data.get("strategy", ""),
            params=copy.deepcopy(data.get("params", {})),
            user_set=set(data.get("user_set", ())),
        )


@dataclass
class TrainingConfig:
    optimizer: ElementInstance | None = None
    outer_cv: CvConfig | None = None
    inner_cv: CvConfig | None = None
    metrics: list[str] = field(default_factory=list)
    best_config_metric: str | None = None

    def to_dict(self) -> dict:
        return {
            "optimizer": self.optimizer.to_dict() if self.optimizer else None,
            "outer_cv": self.outer_cv.to_dict() if self.outer_cv else None,
            "inner_cv": self.inner_cv.to_dict() if self.inner_cv else None,
            "metrics": list(self.metrics),
            "best_config_metric": self.best_config_metric,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrainingConfig":
        return cls(
            optimizer=ElementInstance.from_dict(data["optimizer"]) if data.get("optimizer") else None,
            outer_cv=CvConfig.from_dict(data["outer_cv"]) if data.get("outer_cv") else None,
            inner_cv=CvConfig.from_dict(data["inner_cv"]) if data.get("inner_cv") else None,
            metrics=list(data.get("metrics", ())),
            best_config_metric=data.get("best_config_metric"),
        )


@dataclass
class Project:
    id: str
    revision: int
    name: str
    analysis_type: str
    data: DataSourceConfig | None = None
    training: TrainingConfig = field(default_factory=TrainingConfig)
    elements: list[ElementInstance] = field(default_factory=list)
    user_set: set[str] = field(default_factory=set)
    visited_steps: set[str] = field(default_factory=set)
    step_progress: dict[str, str] = field(default_factory=dict)
    last_script: str = ""

    def clone(self) -> "Project":
        return copy.deepcopy(self)

    def transformers(self, registry: Registry) -> list[ElementInstance]:
        return [e for e in self.elements
                if registry.elements.get(e.element_id)
                and registry.elements[e.element_id].category == "transformer"]

    def estimators(self, registry: Registry) -> list[ElementInstance]:
        return [e for e in self.elements
                if registry.elements.get(e.element_id)
                and registry.elements[e.element_id].category == "estimator"]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "revision": self.revision,
            "name": self.name,
            "analysis_type": self.analysis_type,
            "data": self.data.to_dict() if self.data else None,
            "training": self.training.to_dict(),
            "elements": [e.to_dict() for e in self.elements],
            "user_set": sorted(self.user_set),
            "visited_steps": sorted(self.visited_steps),
            "step_progress": dict(self.step_progress),
            "last_script": self.last_script,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Project":
        return cls(
            id=data.get("id") or uuid.uuid4().hex,
            revision=int(data.get("revision", 1)),
            name=data.get("name", ""),
            analysis_type=data.get("analysis_type", ""),
            data=DataSourceConfig.from_dict(data["data"]) if data.get("data") else None,
            training=TrainingConfig.from_dict(data.get("training", {})),
            elements=[ElementInstance.from_dict(e) for e in data.get("elements", ())],
            user_set=set(data.get("user_set", ())),
            visited_steps=set(data.get("visited_steps", ())),
            step_progress=dict(data.get("step_progress", {})),
            last_script=data.get("last_script", ""),
        )

    def canonical_json(self) -> str:
        """Canonical document form: UTF-8 JSON with sorted keys."""
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"

    def content_dict(self) -> dict:
        """Analysis content only, with wizard bookkeeping stripped."""

        def strip(value):
            if isinstance(value, dict):
                return {k: strip(v) for k, v in value.items() if k not in _BOOKKEEPING_KEYS}
            if isinstance(value, list):
                return [strip(v) for v in value]
            return value

        return strip(self.to_dict())

    def mutation_dict(self) -> dict:
        """Everything that counts as a change for revision bumping."""
        doc = self.to_dict()
        for key in ("revision", "step_progress", "last_script"):
            doc.pop(key)
        return doc


def new_project(name: str, analysis_type: str, project_id: str | None = None) -> Project:
    if not name.strip():
        raise ValueError("project name must not be empty")
    if analysis_type not in ANALYSIS_TYPES:
        raise ValueError(f"analysis_type must be one of {', '.join(ANALYSIS_TYPES)}")
    return Project(id=project_id or uuid.uuid4().hex, revision=1,
                   name=name.strip(), analysis_type=analysis_type)


def instance_with_defaults(element_id: str, registry: Registry, context,
                           position: int = 0, user_chosen: bool = True) -> ElementInstance:
    """New element instance with its context-sensitive defaults attached.

    Defaults are attached once, here; they stay unflagged so later context
    changes may re-resolve them until the user pins a value.
    """
    instance = ElementInstance(element_id=element_id, position=position,
                               user_set={"element_id"} if user_chosen else set())
    try:
        defaults = registry_mod.resolve_defaults(registry, element_id, context)
    except KeyError:
        return instance
    for name, default in defaults.items():
        if isinstance(default, HyperparamSpace):
            instance.hyperparams[name] = default
        else:
            instance.fixed_params[name] = default
    return instance


def cv_with_defaults(strategy: str, registry: Registry, context) -> CvConfig:
    """New cross-validation config with the strategy's default parameters."""
    cv = CvConfig(strategy=strategy)
    try:
        defaults = registry_mod.resolve_defaults(registry, strategy, context)
    except KeyError:
        return cv
    for name, default in defaults.items():
        if not isinstance(default, HyperparamSpace):
            cv.params[name] = default
    return cv


def context_tags(project: Project, policy: TagPolicy = DEFAULT_TAG_POLICY) -> set[str]:
    """Tag context derived from the project; drives filtering and defaults."""
    tags = {project.analysis_type} if project.analysis_type else set()
    if project.data is not None and project.data.n_samples > 0:
        if project.data.n_samples < policy.small_sample_below:
            tags.add("small_sample")
        if project.data.n_samples < policy.tiny_sample_below:
            tags.add("tiny_sample")
    return tags


@dataclass(frozen=True)
class ValidationIssue:
    path: str
    severity: str  # "error" | "warning"
    message: str

    def to_dict(self) -> dict:
        return {"path": self.path, "severity": self.severity, "message": self.message}


def error_issues(report: list[ValidationIssue]) -> list[ValidationIssue]:
    return [issue for issue in report if issue.severity == "error"]


def has_errors(report: list[ValidationIssue]) -> bool:
    return any(issue.severity == "error" for issue in report)


def _check_instance_params(issues: list[ValidationIssue], prefix: str,
                           instance: ElementInstance, registry: Registry,
                           allow_hyperparams: bool) -> None:
    declared = registry.parameter_names(instance.element_id)
    for name, value in instance.fixed_params.items():
        row = registry.parameter_def(instance.element_id, name)
        path = f"{prefix}.fixed_params.{name}"
        if row is None or name not in declared:
            issues.append(ValidationIssue(path, "error",
                          f"{instance.element_id} has no parameter {name!r}"))
            continue
        if row.kind != "fixed":
            issues.append(ValidationIssue(path, "error",
                          f"{name!r} is a hyperparameter, not a fixed parameter"))
            continue
        if not matches_type(value, row.value_type):
            issues.append(ValidationIssue(path, "error",
                          f"value for {name!r} must be of type {row.value_type}"))
    for name, space in instance.hyperparams.items():
        path = f"{prefix}.hyperparams.{name}"
        if not allow_hyperparams:
            issues.append(ValidationIssue(path, "error",
                          "hyperparameter spaces are not applicable here"))
            continue
        row = registry.parameter_def(instance.element_id, name)
        if row is None:
            issues.append(ValidationIssue(path, "error",
                          f"{instance.element_id} has no parameter {name!r}"))
            continue
        if row.kind != "hyperparameter":
            issues.append(ValidationIssue(path, "error",
                          f"{name!r} is a fixed parameter, not a hyperparameter"))
            continue
        try:
            values = space.grid_values()
        except MalformedLiteral as exc:
            issues.append(ValidationIssue(path, "error", str(exc)))
            continue
        for item in values:
            if not matches_type(item, row.value_type):
                issues.append(ValidationIssue(path, "error",
                              f"candidate {item!r} does not match type {row.value_type}"))
                break


def _check_cv(issues: list[ValidationIssue], prefix: str, cv: CvConfig | None,
              project: Project, registry: Registry) -> None:
    if cv is None or not cv.strategy:
        issues.append(ValidationIssue(prefix, "error", "no cross-validation strategy selected"))
        return
    element = registry.elements.get(cv.strategy)
    if element is None:
        issues.append(ValidationIssue(f"{prefix}.strategy", "error",
                      f"unknown cross-validation strategy {cv.strategy!r}"))
        return
    if element.category != "cv_strategy":
        issues.append(ValidationIssue(f"{prefix}.strategy", "error",
                      f"{cv.strategy!r} is a {element.category}, not a cv_strategy"))
        return
    declared = registry.parameter_names(cv.strategy)
    for name, value in cv.params.items():
        path = f"{prefix}.params.{name}"
        row = registry.parameter_def(cv.strategy, name)
        if row is None:
            issues.append(ValidationIssue(path, "error",
                          f"{cv.strategy} has no parameter {name!r}"))
            continue
        if not matches_type(value, row.value_type):
            issues.append(ValidationIssue(path, "error",
                          f"value for {name!r} must be of type {row.value_type}"))
    for placeholder in element.template_placeholders():
        if placeholder != "element_id" and placeholder not in cv.params:
            issues.append(ValidationIssue(f"{prefix}.params.{placeholder}", "error",
                          f"{cv.strategy} requires a value for {placeholder!r}"))
    n_splits = cv.params.get("n_splits")
    if isinstance(n_splits, int) and not isinstance(n_splits, bool):
        if n_splits < 2:
            issues.append(ValidationIssue(f"{prefix}.params.n_splits", "error",
                          "n_splits must be at least 2"))
        elif (cv.strategy in KFOLD_FAMILY_IDS and project.data is not None
              and project.data.n_samples >= 2 and n_splits > project.data.n_samples):
            issues.append(ValidationIssue(f"{prefix}.params.n_splits", "error",
                          "n_splits exceeds n_samples"))
    _ = declared


def validate_project(project: Project, registry: Registry) -> list[ValidationIssue]:
    """Structural validation; an empty error list means the project is emittable.

    Warnings are advisory and never block emission.
    """
    issues: list[ValidationIssue] = []

    if not project.name.strip():
        issues.append(ValidationIssue("name", "error", "project name must not be empty"))
    if project.analysis_type not in ANALYSIS_TYPES:
        issues.append(ValidationIssue("analysis_type", "error",
                      f"analysis_type must be one of {', '.join(ANALYSIS_TYPES)}"))

    data = project.data
    if data is None:
        issues.append(ValidationIssue("data", "error", "no data source configured"))
    else:
        if not data.file_path.strip():
            issues.append(ValidationIssue("data.file_path", "error", "data file path is empty"))
        if not data.feature_columns:
            issues.append(ValidationIssue("data.feature_columns", "error",
                          "select at least one feature column"))
        elif len(set(data.feature_columns)) != len(data.feature_columns):
            issues.append(ValidationIssue("data.feature_columns", "warning",
                          "feature columns are listed more than once"))
        if not data.target_column.strip():
            issues.append(ValidationIssue("data.target_column", "error",
                          "no target column selected"))
        elif data.target_column in data.feature_columns:
            issues.append(ValidationIssue("data.target_column", "error",
                          "target column must not also be a feature column"))
        if data.n_samples < 2:
            issues.append(ValidationIssue("data.n_samples", "error",
                          "sample count must be at least 2"))

    # Pipeline elements: known ids, valid categories, contiguous positions,
    # transformers strictly before estimators.
    positions = [e.position for e in project.elements]
    if positions != list(range(len(project.elements))):
        issues.append(ValidationIssue("elements", "error",
                      "element positions must be contiguous starting at 0"))
    seen_estimator = False
    estimator_count = 0
    for index, instance in enumerate(project.elements):
        prefix = f"elements[{index}]"
        element = registry.elements.get(instance.element_id)
        if element is None:
            issues.append(ValidationIssue(f"{prefix}.element_id", "error",
                          f"unknown element {instance.element_id!r}"))
            continue
        if element.category not in ("transformer", "estimator"):
            issues.append(ValidationIssue(f"{prefix}.element_id", "error",
                          f"a {element.category} cannot be used as a pipeline step"))
            continue
        if element.category == "estimator":
            seen_estimator = True
            estimator_count += 1
        elif seen_estimator:
            issues.append(ValidationIssue("elements", "error",
                          "transformers must come before estimators"))
            seen_estimator = True  # report once
        _check_instance_params(issues, prefix, instance, registry, allow_hyperparams=True)
    if estimator_count == 0:
        issues.append(ValidationIssue("elements", "error",
                      "at least one estimator is required"))

    training = project.training
    optimizer = training.optimizer
    if optimizer is None:
        issues.append(ValidationIssue("training.optimizer", "error", "no optimizer selected"))
    else:
        element = registry.elements.get(optimizer.element_id)
        if element is None:
            issues.append(ValidationIssue("training.optimizer.element_id", "error",
                          f"unknown optimizer {optimizer.element_id!r}"))
        elif element.category != "optimizer":
            issues.append(ValidationIssue("training.optimizer.element_id", "error",
                          f"{optimizer.element_id!r} is a {element.category}, not an optimizer"))
        else:
            _check_instance_params(issues, "training.optimizer", optimizer, registry,
                                   allow_hyperparams=False)

    _check_cv(issues, "training.outer_cv", training.outer_cv, project, registry)
    _check_cv(issues, "training.inner_cv", training.inner_cv, project, registry)

    context = context_tags(project)
    metric_disc = registry_mod.discriminating_tags(registry, "metric")
    if not training.metrics:
        issues.append(ValidationIssue("training.metrics", "error",
                      "select at least one performance metric"))
    for index, metric_id in enumerate(training.metrics):
        path = f"training.metrics[{index}]"
        element = registry.elements.get(metric_id)
        if element is None:
            issues.append(ValidationIssue(path, "error", f"unknown metric {metric_id!r}"))
            continue
        if element.category != "metric":
            issues.append(ValidationIssue(path, "error",
                          f"{metric_id!r} is a {element.category}, not a metric"))
            continue
        if not (element.tags & metric_disc) <= context:
            issues.append(ValidationIssue(path, "error",
                          f"metric {metric_id!r} is not applicable to "
                          f"{project.analysis_type or 'this'} analyses"))
    if training.best_config_metric is None:
        issues.append(ValidationIssue("training.best_config_metric", "error",
                      "choose the metric that selects the best configuration"))
    elif training.best_config_metric not in training.metrics:
        issues.append(ValidationIssue("training.best_config_metric", "error",
                      "best_config_metric must be one of the selected metrics"))

    # Advisory: an exhaustive grid over many points gets expensive.
    if optimizer is not None and optimizer.element_id == "grid_search":
        points = 1
        for instance in project.elements:
            for space in instance.hyperparams.values():
                try:
                    points *= max(1, len(space.grid_values()))
                except MalformedLiteral:
                    pass
        if points > 10:
            issues.append(ValidationIssue("training.optimizer", "warning",
                          f"grid search will evaluate {points} configurations; "
                          f"consider random_search or sk_opt"))

    return issues
