"""Catalogue of selectable pipeline building blocks, loaded from CSV tables.

Content authors maintain two spreadsheet-exported tables: `elements.csv`
(the building blocks) and `parameters.csv` (their parameters with
context-dependent defaults). The registry is immutable once loaded and is the
single source of truth for what the wizard offers, which imports an element
needs, and how its construction is written in the generated script.
"""

from __future__ import annotations

import copy
import csv
import re
from dataclasses import dataclass, field
from pathlib import Path

from pipegen import literals
from pipegen.literals import HyperparamSpace, LiteralValue

CATEGORIES = ("transformer", "estimator", "optimizer", "cv_strategy", "metric")
PARAMETER_KINDS = ("fixed", "hyperparameter")

ELEMENTS_HEADER = [
    "element_id", "category", "display_name", "tags",
    "imports", "construct_template", "tooltip", "doc_url",
]
PARAMETERS_HEADER = [
    "element_id", "param_name", "kind", "value_type",
    "default_literal", "applies_tags", "tooltip", "doc_url",
]

# Strategies whose n_splits means "number of folds" and is therefore bounded
# by the sample count. Content policy, kept alongside the fold-count table.
KFOLD_FAMILY_IDS = frozenset({"KFold", "StratifiedKFold", "RepeatedKFold", "GroupKFold"})

_PLACEHOLDER_RE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


class RegistryError(Exception):
    """Content table problem, located by file, row number, and column."""

    def __init__(self, file: str, row: int, column: str, message: str):
        self.file = str(file)
        self.row = row
        self.column = column
        super().__init__(f"{self.file}:{row} [{column}]: {message}")


class MissingColumn(RegistryError):
    pass


class DuplicateId(RegistryError):
    pass


class UnknownElementRef(RegistryError):
    pass


class MalformedLiteral(RegistryError):
    pass


class InvalidRow(RegistryError):
    pass


class NoApplicableDefault(KeyError):
    def __init__(self, element_id: str, param_name: str, context: frozenset):
        self.element_id = element_id
        self.param_name = param_name
        super().__init__(
            f"no default for {element_id}.{param_name} applies in context {sorted(context)}"
        )


@dataclass(frozen=True)
class RegistryElement:
    element_id: str
    category: str
    display_name: str
    tags: frozenset[str]
    imports: tuple[str, ...]
    construct_template: str
    tooltip: str
    doc_url: str
    row_index: int

    def template_placeholders(self) -> list[str]:
        return _PLACEHOLDER_RE.findall(self.construct_template)


@dataclass(frozen=True)
class ParameterRow:
    element_id: str
    param_name: str
    kind: str
    value_type: str
    default_literal: LiteralValue | HyperparamSpace
    applies_tags: frozenset[str]
    tooltip: str
    doc_url: str
    row_index: int


@dataclass
class Registry:
    """Loaded content tables; element and row order follow the files."""

    elements: dict[str, RegistryElement] = field(default_factory=dict)
    parameters: dict[str, list[ParameterRow]] = field(default_factory=dict)

    def category_elements(self, category: str) -> list[RegistryElement]:
        return [e for e in self.elements.values() if e.category == category]

    def parameter_rows(self, element_id: str) -> list[ParameterRow]:
        return self.parameters.get(element_id, [])

    def parameter_names(self, element_id: str) -> list[str]:
        names: list[str] = []
        for row in self.parameter_rows(element_id):
            if row.param_name not in names:
                names.append(row.param_name)
        return names

    def parameter_def(self, element_id: str, param_name: str) -> ParameterRow | None:
        """First row for the parameter; kind/value_type are consistent across rows."""
        for row in self.parameter_rows(element_id):
            if row.param_name == param_name:
                return row
        return None


def _split_cell(cell: str) -> list[str]:
    return [part.strip() for part in cell.split(";") if part.strip()]


def _read_rows(path: Path, expected_header: list[str]) -> list[tuple[int, dict[str, str]]]:
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumn(path, 1, expected_header[0], "file has no header row") from None
        if header != expected_header:
            missing = [c for c in expected_header if c not in header]
            column = missing[0] if missing else next(
                (c for c, e in zip(header, expected_header) if c != e), header[0]
            )
            raise MissingColumn(
                path, 1, column,
                f"header must be exactly {','.join(expected_header)}, got {','.join(header)}",
            )
        rows = []
        for index, cells in enumerate(reader, start=2):
            if not cells or all(not c.strip() for c in cells):
                continue
            if len(cells) != len(expected_header):
                raise InvalidRow(path, index, expected_header[-1],
                                 f"expected {len(expected_header)} cells, got {len(cells)}")
            rows.append((index, dict(zip(expected_header, cells))))
        return rows


def _require(path: Path, row: int, column: str, value: str) -> str:
    if not value.strip():
        raise InvalidRow(path, row, column, f"column {column!r} must not be empty")
    return value.strip()


def load_registry(elements_table: str | Path, parameters_table: str | Path) -> Registry:
    """Load and cross-check both content tables."""
    elements_path = Path(elements_table)
    parameters_path = Path(parameters_table)
    registry = Registry()
    element_rows: dict[str, int] = {}

    for index, cells in _read_rows(elements_path, ELEMENTS_HEADER):
        element_id = _require(elements_path, index, "element_id", cells["element_id"])
        if element_id in registry.elements:
            raise DuplicateId(elements_path, index, "element_id",
                              f"element_id {element_id!r} already defined")
        category = _require(elements_path, index, "category", cells["category"])
        if category not in CATEGORIES:
            raise InvalidRow(elements_path, index, "category",
                             f"category must be one of {', '.join(CATEGORIES)}")
        registry.elements[element_id] = RegistryElement(
            element_id=element_id,
            category=category,
            display_name=_require(elements_path, index, "display_name", cells["display_name"]),
            tags=frozenset(_split_cell(cells["tags"])),
            imports=tuple(_split_cell(cells["imports"])),
            construct_template=_require(elements_path, index, "construct_template",
                                        cells["construct_template"]),
            tooltip=_require(elements_path, index, "tooltip", cells["tooltip"]),
            doc_url=_require(elements_path, index, "doc_url", cells["doc_url"]),
            row_index=index,
        )
        element_rows[element_id] = index

    seen_param_keys: set[tuple[str, str, frozenset[str]]] = set()
    for index, cells in _read_rows(parameters_path, PARAMETERS_HEADER):
        element_id = _require(parameters_path, index, "element_id", cells["element_id"])
        if element_id not in registry.elements:
            raise UnknownElementRef(parameters_path, index, "element_id",
                                    f"element_id {element_id!r} is not in the elements table")
        param_name = _require(parameters_path, index, "param_name", cells["param_name"])
        kind = _require(parameters_path, index, "kind", cells["kind"])
        if kind not in PARAMETER_KINDS:
            raise InvalidRow(parameters_path, index, "kind",
                             f"kind must be one of {', '.join(PARAMETER_KINDS)}")
        value_type = _require(parameters_path, index, "value_type", cells["value_type"])
        if value_type not in literals.VALUE_TYPES:
            raise InvalidRow(parameters_path, index, "value_type",
                             f"value_type must be one of {', '.join(literals.VALUE_TYPES)}")
        applies_tags = frozenset(_split_cell(cells["applies_tags"]))
        key = (element_id, param_name, applies_tags)
        if key in seen_param_keys:
            raise DuplicateId(parameters_path, index, "param_name",
                              f"duplicate default row for {element_id}.{param_name} "
                              f"with tags {sorted(applies_tags)}")
        seen_param_keys.add(key)

        raw_default = cells["default_literal"]
        try:
            if kind == "hyperparameter":
                default: LiteralValue | HyperparamSpace = literals.parse_hyperparam_text(
                    raw_default, value_type)
            else:
                value = literals.parse_literal(raw_default)
                if not literals.matches_type(value, value_type):
                    raise literals.MalformedLiteral(
                        f"default {raw_default!r} does not match type {value_type}")
                default = value
        except literals.MalformedLiteral as exc:
            raise MalformedLiteral(parameters_path, index, "default_literal", str(exc)) from None

        previous = registry.parameter_def(element_id, param_name)
        if previous is not None and (previous.kind != kind or previous.value_type != value_type):
            raise InvalidRow(parameters_path, index, "kind",
                             f"{element_id}.{param_name} redeclared with a different "
                             f"kind or value_type")
        registry.parameters.setdefault(element_id, []).append(ParameterRow(
            element_id=element_id,
            param_name=param_name,
            kind=kind,
            value_type=value_type,
            default_literal=default,
            applies_tags=applies_tags,
            tooltip=_require(parameters_path, index, "tooltip", cells["tooltip"]),
            doc_url=_require(parameters_path, index, "doc_url", cells["doc_url"]),
            row_index=index,
        ))

    for element in registry.elements.values():
        allowed = set(registry.parameter_names(element.element_id)) | {"element_id"}
        for placeholder in element.template_placeholders():
            if placeholder not in allowed:
                raise InvalidRow(elements_path, element_rows[element.element_id],
                                 "construct_template",
                                 f"placeholder {{{placeholder}}} is not a declared parameter "
                                 f"of {element.element_id}")
    return registry


def load_content_dir(directory: str | Path) -> Registry:
    directory = Path(directory)
    return load_registry(directory / "elements.csv", directory / "parameters.csv")


def bundled_content_dir() -> Path:
    """Content pack shipped with the package."""
    return Path(__file__).resolve().parent / "content"


def discriminating_tags(registry: Registry, category: str) -> frozenset[str]:
    """Tags that distinguish availability within a category."""
    tags: set[str] = set()
    for element in registry.category_elements(category):
        tags |= element.tags
    return frozenset(tags)


def query_elements(registry: Registry, category: str, context) -> list[RegistryElement]:
    """Elements of the category available in the given tag context.

    An element matches when its discriminating tags are a subset of the
    context; untagged elements are universally available. Table row order is
    preserved for display.
    """
    context = frozenset(context)
    disc = discriminating_tags(registry, category)
    return [e for e in registry.category_elements(category) if (e.tags & disc) <= context]


def resolve_defaults(registry: Registry, element_id: str, context) -> dict[str, LiteralValue | HyperparamSpace]:
    """Context-sensitive default for every parameter of an element.

    Among the rows whose applies_tags are a subset of the context, the most
    specific (largest tag set) wins; ties go to the later row so content
    authors can override by appending.
    """
    if element_id not in registry.elements:
        raise KeyError(element_id)
    context = frozenset(context)
    defaults: dict[str, LiteralValue | HyperparamSpace] = {}
    for name in registry.parameter_names(element_id):
        rows = [r for r in registry.parameter_rows(element_id) if r.param_name == name]
        applicable = [r for r in rows if r.applies_tags <= context]
        if not applicable:
            raise NoApplicableDefault(element_id, name, context)
        best = max(applicable, key=lambda r: (len(r.applies_tags), r.row_index))
        defaults[name] = copy.deepcopy(best.default_literal)
    return defaults


def default_fold_count(n_samples: int) -> int:
    """Cross-validation fold count adjusted to the amount of training data.

    Below 10 samples this degenerates to leave-one-out.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples to cross-validate")
    if n_samples < 10:
        return n_samples
    if n_samples < 30:
        return 3
    if n_samples < 200:
        return 5
    return 10
