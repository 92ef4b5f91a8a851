#!/usr/bin/env python3
"""Walk the five wizard steps headlessly and print the script after each one.

Shows the feedback loop without the web UI: every submission prints the
changed lines (- old / + new) followed by the regenerated script state.

Usage: python scripts/demo_wizard_flow.py
"""

from pipegen import wizard
from pipegen.bindings import bind_form
from pipegen.linediff import split_lines
from pipegen.registry import bundled_content_dir, load_content_dir

SUBMISSIONS = [
    ("project_data", [
        ("data.file_path", "breast_cancer.csv"),
        ("data.feature_columns", "['mean_radius', 'mean_texture']"),
        ("data.target_column", "diagnosis"),
        ("data.n_samples", "569"),
    ]),
    ("optimization", [
        ("training.optimizer.element_id", "grid_search"),
        ("training.outer_cv.strategy", "KFold"),
        ("training.outer_cv.params.n_splits", "5"),
        ("training.inner_cv.strategy", "KFold"),
        ("training.inner_cv.params.n_splits", "5"),
        ("training.metrics", "['accuracy', 'balanced_accuracy']"),
        ("training.best_config_metric", "accuracy"),
    ]),
    ("transformers", [
        ("elements[0].element_id", "StandardScaler"),
        ("elements[1].element_id", "PCA"),
        ("elements[1].hyperparams.n_components", "[5, 10]"),
    ]),
    ("estimators", [
        ("elements[2].element_id", "SVC"),
        ("elements[2].hyperparams.C", "[0.1, 1, 10]"),
        ("elements[2].fixed_params.kernel", ""),
    ]),
    ("review", []),
]


def print_diff(old_script: str, ops) -> None:
    if not ops:
        print("  (no script change)")
        return
    old_lines = split_lines(old_script)
    for op in ops:
        owner = f" [{op.owner}]" if op.owner else ""
        print(f"  {op.op}{owner}")
        for line in old_lines[op.old_range[0]:op.old_range[1]]:
            print(f"    - {line}")
        for line in op.lines:
            print(f"    + {line}")


def main() -> None:
    registry = load_content_dir(bundled_content_dir())
    project = wizard.create_project("demo_project", "classification", registry)
    print(f"created project {project.id} (revision {project.revision})")

    for step_id, pairs in SUBMISSIONS:
        old_script = project.last_script
        result = wizard.apply_step_input(project, step_id, bind_form(pairs), registry)
        project = result.project
        errors = [i for i in result.report if i.severity == "error"]
        print(f"\n=== step {step_id!r} -> revision {project.revision}, "
              f"status {result.step_status[step_id]}, {len(errors)} error(s)")
        for issue in errors:
            print(f"  ! {issue.path}: {issue.message}")
        print_diff(old_script, result.diff)

    print("\n=== final script ===")
    print(project.last_script, end="")


if __name__ == "__main__":
    main()
