"""pipegen: a wizard-driven code generator for PHOTON ML pipeline scripts.

A project document (data source, ordered pipeline elements, training and
optimization choices) is translated into a complete, explicit Python script.
Every mutation regenerates the script and reports a line diff, so each choice
is directly visible in the emitted code.
"""

from pipegen.codegen import build_document, diff_scripts, render
from pipegen.model import Project, context_tags, validate_project
from pipegen.registry import (
    Registry,
    bundled_content_dir,
    default_fold_count,
    load_content_dir,
    load_registry,
    query_elements,
    resolve_defaults,
)
from pipegen.wizard import apply_step_input, reorder_element, step_status

__version__ = "0.1.0"

__all__ = [
    "Project",
    "Registry",
    "apply_step_input",
    "build_document",
    "bundled_content_dir",
    "context_tags",
    "default_fold_count",
    "diff_scripts",
    "load_content_dir",
    "load_registry",
    "query_elements",
    "render",
    "reorder_element",
    "resolve_defaults",
    "step_status",
    "validate_project",
    "__version__",
]
