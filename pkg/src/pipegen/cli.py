"""Command line entry points: serve the app, emit headlessly, inspect content."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from pipegen.codegen import build_document, render
from pipegen.model import Project, has_errors, validate_project
from pipegen.registry import (
    CATEGORIES,
    RegistryError,
    bundled_content_dir,
    load_content_dir,
    query_elements,
)


def _content_dir(value: str | None) -> Path:
    return Path(value or os.environ.get("PIPEGEN_CONTENT_DIR") or bundled_content_dir())


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        registry = load_content_dir(_content_dir(args.content_dir))
    except (RegistryError, OSError) as exc:
        print(f"error: cannot load content tables: {exc}", file=sys.stderr)
        return 2
    try:
        with open(args.project_file, encoding="utf-8") as handle:
            project = Project.from_dict(json.load(handle))
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read project file: {exc}", file=sys.stderr)
        return 2
    report = validate_project(project, registry)
    for issue in report:
        if issue.severity == "error":
            print(f"error: {issue.path}: {issue.message}", file=sys.stderr)
    if has_errors(report):
        return 2
    script = render(build_document(project, registry))
    if args.output and args.output != "-":
        Path(args.output).write_text(script, encoding="utf-8")
    else:
        sys.stdout.write(script)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from pipegen.service import create_app

    port = args.port or int(os.environ.get("PIPEGEN_PORT", "8000"))
    data_dir = args.data_dir or os.environ.get("PIPEGEN_DATA_DIR") or "pipegen_data"
    app = create_app(content_dir=_content_dir(args.content_dir), data_dir=data_dir)
    uvicorn.run(app, host=args.host, port=port)
    return 0


def cmd_registry_validate(args: argparse.Namespace) -> int:
    try:
        registry = load_content_dir(args.directory)
    except (RegistryError, OSError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    counts = {category: len(registry.category_elements(category))
              for category in CATEGORIES}
    total_params = sum(len(rows) for rows in registry.parameters.values())
    print(f"ok: {len(registry.elements)} elements "
          f"({', '.join(f'{c}={n}' for c, n in counts.items())}), "
          f"{total_params} parameter rows")
    return 0


def cmd_registry_list(args: argparse.Namespace) -> int:
    registry = load_content_dir(_content_dir(args.content_dir))
    context = {t.strip() for t in (args.tags or "").split(",") if t.strip()}
    categories = [args.category] if args.category else list(CATEGORIES)
    for category in categories:
        elements = (query_elements(registry, category, context)
                    if args.tags is not None else registry.category_elements(category))
        for element in elements:
            tags = ",".join(sorted(element.tags)) or "-"
            print(f"{element.element_id}\t{category}\t{element.display_name}\t{tags}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pipegen",
                                     description="Wizard-driven ML pipeline script generator")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--content-dir", default=None)
    serve.add_argument("--data-dir", default=None)
    serve.set_defaults(func=cmd_serve)

    generate = sub.add_parser("generate", help="emit the script for a project file")
    generate.add_argument("--project-file", required=True)
    generate.add_argument("--content-dir", default=None)
    generate.add_argument("-o", "--output", default=None)
    generate.set_defaults(func=cmd_generate)

    registry = sub.add_parser("registry", help="inspect content tables")
    registry_sub = registry.add_subparsers(dest="registry_command", required=True)
    validate = registry_sub.add_parser("validate", help="check a content directory")
    validate.add_argument("directory")
    validate.set_defaults(func=cmd_registry_validate)
    list_cmd = registry_sub.add_parser("list", help="list elements")
    list_cmd.add_argument("--category", choices=CATEGORIES, default=None)
    list_cmd.add_argument("--tags", default=None)
    list_cmd.add_argument("--content-dir", default=None)
    list_cmd.set_defaults(func=cmd_registry_list)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
