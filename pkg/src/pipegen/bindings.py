"""Form-binding layer: submitted key/value pairs become project mutations.

Keys follow the grammar `path := segment ('.' segment)*` with
`segment := name | name '[' index ']'`. Values stay raw strings until they
are applied; only then are they coerced against the model's field types and
the registry's declared parameter types. String-typed fields take the raw
text verbatim, everything else uses the canonical literal syntax. An empty
value removes an optional parameter (an explicit choice in its own right).

`project_to_pairs` is the exact inverse: re-binding its output onto a fresh
project of the same name and analysis type reproduces the analysis content.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from pipegen import literals
from pipegen.literals import (
    HyperparamSpace,
    MalformedLiteral,
    parse_hyperparam_text,
    parse_literal,
    render_hyperparam_text,
    render_literal,
)
from pipegen.model import (
    ANALYSIS_TYPES,
    CvConfig,
    DataSourceConfig,
    ElementInstance,
    Project,
    context_tags,
    cv_with_defaults,
    instance_with_defaults,
)
from pipegen.registry import Registry

_SEGMENT_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\[(\d+)\])?$")


class PathSyntaxError(ValueError):
    def __init__(self, key: str, reason: str):
        self.key = key
        super().__init__(f"invalid path {key!r}: {reason}")


@dataclass(frozen=True)
class PathSegment:
    name: str
    index: int | None = None


@dataclass(frozen=True)
class Binding:
    key: str
    path: tuple[PathSegment, ...]
    value: str


BindingSet = list  # list[Binding], order preserved from submission


class BindingError(Exception):
    """One binding could not be applied; code is unknown_path or type_mismatch."""

    def __init__(self, key: str, code: str, message: str):
        self.key = key
        self.code = code
        super().__init__(f"{key}: {message}")

    def to_dict(self) -> dict:
        return {"key": self.key, "code": self.code, "message": self.args[0]}


class BindingBatchError(Exception):
    """The whole submission is rejected; carries one entry per failed binding."""

    def __init__(self, errors: list[BindingError]):
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


def parse_path(key: str) -> tuple[PathSegment, ...]:
    segments = []
    for part in key.split("."):
        match = _SEGMENT_RE.match(part)
        if match is None:
            raise PathSyntaxError(key, f"bad segment {part!r}")
        index = match.group(2)
        segments.append(PathSegment(match.group(1), int(index) if index is not None else None))
    if not segments:
        raise PathSyntaxError(key, "empty path")
    return tuple(segments)


def render_path(path: tuple[PathSegment, ...]) -> str:
    return ".".join(
        f"{seg.name}[{seg.index}]" if seg.index is not None else seg.name for seg in path
    )


def bind_form(pairs) -> BindingSet:
    """Parse submitted (key, value) pairs; raises PathSyntaxError on a bad key."""
    return [Binding(key=key, path=parse_path(key), value=value) for key, value in pairs]


def _unknown(binding: Binding, message: str) -> BindingError:
    return BindingError(binding.key, "unknown_path", message)


def _mismatch(binding: Binding, message: str) -> BindingError:
    return BindingError(binding.key, "type_mismatch", message)


def _coerce_fixed(binding: Binding, value_type: str):
    if value_type == "string":
        return binding.value
    try:
        value = parse_literal(binding.value)
    except MalformedLiteral as exc:
        raise _mismatch(binding, str(exc)) from None
    if not literals.matches_type(value, value_type):
        raise _mismatch(binding, f"expected a {value_type} value")
    return value


def _coerce_space(binding: Binding, value_type: str) -> HyperparamSpace:
    try:
        return parse_hyperparam_text(binding.value, value_type)
    except MalformedLiteral as exc:
        raise _mismatch(binding, str(exc)) from None


def _string_list(binding: Binding) -> list[str]:
    try:
        value = parse_literal(binding.value)
    except MalformedLiteral as exc:
        raise _mismatch(binding, str(exc)) from None
    if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
        raise _mismatch(binding, "expected a list of strings, e.g. ['a', 'b']")
    return value


def _positive_int(binding: Binding) -> int:
    try:
        value = parse_literal(binding.value)
    except MalformedLiteral as exc:
        raise _mismatch(binding, str(exc)) from None
    if isinstance(value, bool) or not isinstance(value, int):
        raise _mismatch(binding, "expected an integer")
    return value


def _apply_instance_param(binding: Binding, instance: ElementInstance,
                          bucket: str, param: str, registry: Registry) -> None:
    row = registry.parameter_def(instance.element_id, param)
    if row is None:
        raise _unknown(binding, f"{instance.element_id} has no parameter {param!r}")
    expected = "fixed" if bucket == "fixed_params" else "hyperparameter"
    if row.kind != expected:
        raise _unknown(binding, f"{param!r} is a {row.kind} parameter; "
                                f"use the {row.kind} form of the path")
    target = instance.fixed_params if bucket == "fixed_params" else instance.hyperparams
    if binding.value == "":
        target.pop(param, None)
        instance.user_set.add(param)
        return
    if bucket == "fixed_params":
        target[param] = _coerce_fixed(binding, row.value_type)
    else:
        target[param] = _coerce_space(binding, row.value_type)
    instance.user_set.add(param)


def _apply_cv(binding: Binding, project: Project, attr: str,
              rest: tuple[PathSegment, ...], registry: Registry) -> None:
    training = project.training
    if len(rest) == 1 and rest[0] == PathSegment("strategy"):
        element = registry.elements.get(binding.value)
        if element is None or element.category != "cv_strategy":
            raise _mismatch(binding, f"{binding.value!r} is not a cross-validation strategy")
        old = getattr(training, attr)
        cv = cv_with_defaults(binding.value, registry, context_tags(project))
        cv.user_set.add("strategy")
        if old is not None:
            for name in old.user_set:
                if name in old.params and registry.parameter_def(binding.value, name):
                    cv.params[name] = old.params[name]
                    cv.user_set.add(name)
        setattr(training, attr, cv)
        return
    if len(rest) == 2 and rest[0] == PathSegment("params") and rest[1].index is None:
        cv = getattr(training, attr)
        if cv is None or not cv.strategy:
            raise _unknown(binding, "choose a cross-validation strategy first")
        param = rest[1].name
        row = registry.parameter_def(cv.strategy, param)
        if row is None:
            raise _unknown(binding, f"{cv.strategy} has no parameter {param!r}")
        if binding.value == "":
            cv.params.pop(param, None)
        else:
            cv.params[param] = _coerce_fixed(binding, row.value_type)
        cv.user_set.add(param)
        return
    raise _unknown(binding, "no such field")


def _apply_element(binding: Binding, project: Project, index: int,
                   rest: tuple[PathSegment, ...], registry: Registry) -> None:
    if len(rest) == 1 and rest[0] == PathSegment("element_id"):
        if binding.value == "":
            if index >= len(project.elements):
                raise _unknown(binding, f"no element at position {index}")
            project.elements.pop(index)
            for position, instance in enumerate(project.elements):
                instance.position = position
            return
        element = registry.elements.get(binding.value)
        if element is None or element.category not in ("transformer", "estimator"):
            raise _mismatch(binding, f"{binding.value!r} is not a pipeline element")
        if index > len(project.elements):
            raise _unknown(binding, f"position {index} is beyond the end of the pipeline")
        instance = instance_with_defaults(binding.value, registry,
                                          context_tags(project), position=index)
        if index == len(project.elements):
            project.elements.append(instance)
        else:
            project.elements[index] = instance
        return
    if index >= len(project.elements):
        raise _unknown(binding, f"no element at position {index}")
    if len(rest) == 2 and rest[0].name in ("fixed_params", "hyperparams") \
            and rest[0].index is None and rest[1].index is None:
        _apply_instance_param(binding, project.elements[index],
                              rest[0].name, rest[1].name, registry)
        return
    raise _unknown(binding, "no such field")


def apply_binding(project: Project, binding: Binding, registry: Registry) -> None:
    """Apply one binding in place; raises BindingError."""
    path = binding.path
    head = path[0]

    if head.index is not None and head.name != "elements":
        raise _unknown(binding, f"{head.name} is not indexable")

    if path == (PathSegment("name"),):
        if not binding.value.strip():
            raise _mismatch(binding, "project name must not be empty")
        project.name = binding.value.strip()
        project.user_set.add("name")
        return
    if path == (PathSegment("analysis_type"),):
        if binding.value not in ANALYSIS_TYPES:
            raise _mismatch(binding, f"must be one of {', '.join(ANALYSIS_TYPES)}")
        project.analysis_type = binding.value
        project.user_set.add("analysis_type")
        return

    if head == PathSegment("data") and len(path) == 2 and path[1].index is None:
        field_name = path[1].name
        if field_name not in ("file_path", "feature_columns", "target_column", "n_samples"):
            raise _unknown(binding, "no such field")
        if project.data is None:
            project.data = DataSourceConfig()
        if field_name in ("file_path", "target_column"):
            setattr(project.data, field_name, binding.value)
        elif field_name == "feature_columns":
            project.data.feature_columns = _string_list(binding)
        else:
            project.data.n_samples = _positive_int(binding)
        project.user_set.add(f"data.{field_name}")
        return

    if head == PathSegment("training") and len(path) >= 2:
        second = path[1]
        if second == PathSegment("metrics") and len(path) == 2:
            project.training.metrics = _string_list(binding)
            project.user_set.add("training.metrics")
            return
        if second == PathSegment("best_config_metric") and len(path) == 2:
            project.training.best_config_metric = binding.value or None
            project.user_set.add("training.best_config_metric")
            return
        if second == PathSegment("optimizer") and len(path) >= 3:
            rest = path[2:]
            if rest == (PathSegment("element_id"),):
                element = registry.elements.get(binding.value)
                if element is None or element.category != "optimizer":
                    raise _mismatch(binding, f"{binding.value!r} is not an optimizer")
                project.training.optimizer = instance_with_defaults(
                    binding.value, registry, context_tags(project))
                return
            optimizer = project.training.optimizer
            if optimizer is None:
                raise _unknown(binding, "choose an optimizer first")
            if len(rest) == 2 and rest[0].name in ("fixed_params", "hyperparams") \
                    and rest[0].index is None and rest[1].index is None:
                _apply_instance_param(binding, optimizer, rest[0].name,
                                      rest[1].name, registry)
                return
            raise _unknown(binding, "no such field")
        if second.name in ("outer_cv", "inner_cv") and second.index is None and len(path) >= 3:
            _apply_cv(binding, project, second.name, path[2:], registry)
            return
        raise _unknown(binding, "no such field")

    if head.name == "elements" and head.index is not None and len(path) >= 2:
        _apply_element(binding, project, head.index, path[1:], registry)
        return

    raise _unknown(binding, "no such field")


def apply_binding_set(project: Project, bindings: BindingSet, registry: Registry) -> None:
    """Apply a submission in order, all-or-nothing.

    Bindings are tried sequentially on the project (later keys may depend on
    earlier ones, and repeated keys are last-write-wins). If any fail, the
    caller must discard the project copy; the collected per-field errors are
    raised together.
    """
    errors: list[BindingError] = []
    for binding in bindings:
        try:
            apply_binding(project, binding, registry)
        except BindingError as exc:
            errors.append(exc)
    if errors:
        raise BindingBatchError(errors)


def _fixed_value_text(value, value_type: str) -> str:
    if value_type == "string" and isinstance(value, str):
        return value
    return render_literal(value)


def _instance_pairs(prefix: str, instance: ElementInstance, registry: Registry) -> list:
    pairs = [(f"{prefix}.element_id", instance.element_id)]
    declared = registry.parameter_names(instance.element_id)
    for name in declared:
        row = registry.parameter_def(instance.element_id, name)
        bucket = "fixed_params" if row.kind == "fixed" else "hyperparams"
        key = f"{prefix}.{bucket}.{name}"
        if row.kind == "fixed" and name in instance.fixed_params:
            pairs.append((key, _fixed_value_text(instance.fixed_params[name], row.value_type)))
        elif row.kind == "hyperparameter" and name in instance.hyperparams:
            pairs.append((key, render_hyperparam_text(instance.hyperparams[name])))
        else:
            pairs.append((key, ""))  # explicitly absent
    return pairs


def _cv_pairs(prefix: str, cv: CvConfig, registry: Registry) -> list:
    pairs = [(f"{prefix}.strategy", cv.strategy)]
    for name in registry.parameter_names(cv.strategy):
        row = registry.parameter_def(cv.strategy, name)
        if row.kind != "fixed":
            continue
        if name in cv.params:
            pairs.append((f"{prefix}.params.{name}",
                          _fixed_value_text(cv.params[name], row.value_type)))
        else:
            pairs.append((f"{prefix}.params.{name}", ""))
    return pairs


def project_to_pairs(project: Project, registry: Registry) -> list[tuple[str, str]]:
    """Serialize a project to form pairs; the inverse of binding them."""
    pairs: list[tuple[str, str]] = [
        ("name", project.name),
        ("analysis_type", project.analysis_type),
    ]
    if project.data is not None:
        pairs.extend([
            ("data.file_path", project.data.file_path),
            ("data.feature_columns", render_literal(list(project.data.feature_columns))),
            ("data.target_column", project.data.target_column),
            ("data.n_samples", str(project.data.n_samples)),
        ])
    training = project.training
    if training.optimizer is not None:
        pairs.extend(_instance_pairs("training.optimizer", training.optimizer, registry))
    if training.outer_cv is not None:
        pairs.extend(_cv_pairs("training.outer_cv", training.outer_cv, registry))
    if training.inner_cv is not None:
        pairs.extend(_cv_pairs("training.inner_cv", training.inner_cv, registry))
    pairs.append(("training.metrics", render_literal(list(training.metrics))))
    if training.best_config_metric is not None:
        pairs.append(("training.best_config_metric", training.best_config_metric))
    for index, instance in enumerate(project.elements):
        pairs.extend(_instance_pairs(f"elements[{index}]", instance, registry))
    return pairs
