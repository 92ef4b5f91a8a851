"""Builds the script document from a project and renders it to text.

The emitter itself knows nothing about the target library beyond the fixed
data-loading and pipeline-scaffold templates and the canonical literal
spellings; every element construction comes from the registry's templates.
Output is byte-deterministic: same project and registry, same bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from pipegen.linediff import DiffOp, line_diff, split_lines
from pipegen.literals import render_kwargs_dict, render_literal
from pipegen.model import ElementInstance, Project
from pipegen.registry import Registry, RegistryElement

PIPE_VAR = "my_pipe"
SWITCH_VAR = "estimator_switch"

# Imports the scaffold always needs, independent of element choices.
DATA_LOADING_IMPORTS = ("import pandas as pd",)
SCAFFOLD_IMPORTS = ("from photonai.base import Hyperpipe, PipelineElement",)
SWITCH_IMPORT = "from photonai.base import Switch"

_PLACEHOLDER_RE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


class UnknownElement(KeyError):
    def __init__(self, element_id: str):
        self.element_id = element_id
        super().__init__(f"element {element_id!r} is not in the registry")


@dataclass
class Section:
    """Consecutive lines owned by one part of the document."""

    owner: str
    lines: list[str]
    positions: tuple[int, ...] = ()  # element positions rendered in this section


@dataclass
class SourceDocument:
    sections: list[Section] = field(default_factory=list)

    def owner_of_position(self, position: int) -> str | None:
        for section in self.sections:
            if position in section.positions:
                return section.owner
        return None

    def line_owners(self) -> list[str | None]:
        """Owner per rendered line; blank separators belong to nobody."""
        owners: list[str | None] = []
        for index, section in enumerate(self.sections):
            if index:
                owners.append(None)
            owners.extend([section.owner] * len(section.lines))
        return owners


def _element(registry: Registry, element_id: str) -> RegistryElement:
    element = registry.elements.get(element_id)
    if element is None:
        raise UnknownElement(element_id)
    return element


def _fill_template(template: str, values: dict[str, str]) -> str:
    def substitute(match: re.Match) -> str:
        name = match.group(1)
        return values.get(name, match.group(0))

    return _PLACEHOLDER_RE.sub(substitute, template)


def _ordered_params(instance: ElementInstance, registry: Registry) -> tuple[list, list]:
    """(fixed, hyper) parameter items in registry row order; unknown names last."""
    declared = registry.parameter_names(instance.element_id)

    def order(names):
        known = [n for n in declared if n in names]
        extra = [n for n in names if n not in declared]
        return known + extra

    fixed = [(n, instance.fixed_params[n]) for n in order(instance.fixed_params)]
    hyper = [(n, instance.hyperparams[n]) for n in order(instance.hyperparams)]
    return fixed, hyper


def element_expression(instance: ElementInstance, registry: Registry) -> str:
    """Construction expression for a pipeline element.

    The registry template provides the call shape; the configured
    hyperparameter dict and fixed keyword arguments are appended inside the
    final closing parenthesis so only user-chosen values ever appear.
    """
    element = _element(registry, instance.element_id)
    expression = _fill_template(element.construct_template,
                                {"element_id": instance.element_id})
    fixed, hyper = _ordered_params(instance, registry)
    args: list[str] = []
    if hyper:
        grids = [(name, space.grid_values()) for name, space in hyper]
        args.append(f"hyperparameters={render_kwargs_dict(grids)}")
    for name, value in fixed:
        args.append(f"{name}={render_literal(value)}")
    if not args:
        return expression
    if not expression.endswith(")"):
        raise ValueError(
            f"template for {instance.element_id!r} cannot take parameters: {expression!r}")
    separator = "" if expression.endswith("(") else ", "
    return expression[:-1] + separator + ", ".join(args) + ")"


def _cv_expression(cv, registry: Registry) -> str:
    element = _element(registry, cv.strategy)
    values = {"element_id": cv.strategy}
    for name, value in cv.params.items():
        values[name] = render_literal(value)
    return _fill_template(element.construct_template, values)


def _optimizer_parts(instance: ElementInstance, registry: Registry) -> tuple[str, str]:
    element = _element(registry, instance.element_id)
    expression = _fill_template(element.construct_template,
                                {"element_id": instance.element_id})
    fixed, _ = _ordered_params(instance, registry)
    return expression, render_kwargs_dict(fixed)


def _sorted_imports(lines: set[str]) -> list[str]:
    """Deduplicated imports: plain `import` lines first, then `from` imports,
    each group in lexicographic order."""
    return sorted(lines, key=lambda line: (0 if line.startswith("import ") else 1, line))


def build_document(project: Project, registry: Registry) -> SourceDocument:
    """Assemble the script document for a validated project.

    Section order is fixed: imports, data loading, pipeline scaffold, one
    section per pipeline element in position order (estimators share a
    single switch section when there are several), and the fit call.
    """
    training = project.training
    data = project.data
    if data is None or training.optimizer is None \
            or training.outer_cv is None or training.inner_cv is None:
        raise ValueError("project is incomplete; validate before building")

    imports: set[str] = set(DATA_LOADING_IMPORTS) | set(SCAFFOLD_IMPORTS)
    referenced = [instance.element_id for instance in project.elements]
    referenced.append(training.optimizer.element_id)
    referenced.extend([training.outer_cv.strategy, training.inner_cv.strategy])
    referenced.extend(training.metrics)
    for element_id in referenced:
        imports.update(_element(registry, element_id).imports)

    estimators = [e for e in project.elements
                  if _element(registry, e.element_id).category == "estimator"]
    transformers = [e for e in project.elements
                    if _element(registry, e.element_id).category != "estimator"]
    if len(estimators) > 1:
        imports.add(SWITCH_IMPORT)

    document = SourceDocument()
    document.sections.append(Section("imports", _sorted_imports(imports)))

    feature_list = render_literal(list(data.feature_columns))
    document.sections.append(Section("data_loading", [
        f"df = pd.read_csv({render_literal(data.file_path)})",
        f"X = df[{feature_list}].values",
        f"y = df[{render_literal(data.target_column)}].values",
    ]))

    optimizer_expr, optimizer_params = _optimizer_parts(training.optimizer, registry)
    head = f"{PIPE_VAR} = Hyperpipe("
    indent = " " * len(head)
    document.sections.append(Section("pipeline_header", [
        head + render_literal(project.name) + ",",
        f"{indent}optimizer={optimizer_expr},",
        f"{indent}optimizer_params={optimizer_params},",
        f"{indent}metrics={render_literal(list(training.metrics))},",
        f"{indent}best_config_metric={render_literal(training.best_config_metric)},",
        f"{indent}outer_cv={_cv_expression(training.outer_cv, registry)},",
        f"{indent}inner_cv={_cv_expression(training.inner_cv, registry)})",
    ]))

    for instance in transformers:
        document.sections.append(Section(
            f"element[{instance.position}]",
            [f"{PIPE_VAR} += {element_expression(instance, registry)}"],
            positions=(instance.position,),
        ))
    if len(estimators) == 1:
        instance = estimators[0]
        document.sections.append(Section(
            f"element[{instance.position}]",
            [f"{PIPE_VAR} += {element_expression(instance, registry)}"],
            positions=(instance.position,),
        ))
    elif estimators:
        lines = [f"{SWITCH_VAR} = Switch({render_literal(SWITCH_VAR)})"]
        for instance in estimators:
            lines.append(f"{SWITCH_VAR} += {element_expression(instance, registry)}")
        lines.append(f"{PIPE_VAR} += {SWITCH_VAR}")
        document.sections.append(Section(
            SWITCH_VAR, lines,
            positions=tuple(instance.position for instance in estimators),
        ))

    document.sections.append(Section("fit_call", [f"{PIPE_VAR}.fit(X, y)"]))
    return document


def render(document: SourceDocument) -> str:
    """Sections joined by one blank line, single trailing newline."""
    return "\n\n".join("\n".join(section.lines) for section in document.sections) + "\n"


def _annotate_owner(op: DiffOp, old_owners: list[str | None],
                    new_owners: list[str | None]) -> DiffOp:
    if op.op == "delete":
        owners_map, (start, end) = old_owners, op.old_range
    else:
        owners_map, (start, end) = new_owners, op.new_range
    touched = {owners_map[i] for i in range(start, min(end, len(owners_map)))
               if owners_map[i] is not None}
    owner = touched.pop() if len(touched) == 1 else None
    return DiffOp(op.op, op.old_range, op.new_range, op.lines, owner)


def diff_scripts(old_text: str, new_text: str,
                 old_document: SourceDocument | None = None,
                 new_document: SourceDocument | None = None) -> list[DiffOp]:
    """Line diff between two renders; empty iff the texts are equal.

    When the documents are supplied, each op is annotated with the owner of
    the section it falls in (None when it spans several sections).
    """
    ops = line_diff(split_lines(old_text), split_lines(new_text))
    if old_document is None and new_document is None:
        return ops
    old_owners = old_document.line_owners() if old_document else []
    new_owners = new_document.line_owners() if new_document else []
    return [_annotate_owner(op, old_owners, new_owners) for op in ops]


def apply_script_diff(ops: list[DiffOp], old_text: str) -> str:
    """Apply a diff back onto the old text; inverse of diff_scripts."""
    from pipegen.linediff import apply_diff

    lines = apply_diff(ops, split_lines(old_text))
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
