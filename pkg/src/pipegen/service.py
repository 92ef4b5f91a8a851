"""HTTP surface: project CRUD, step submission, reorder, registry queries.

The engine and registry are shared read-only; all cross-request state lives
in the document store, ordered by the per-document revision check. A stale
revision never mutates anything: the client gets 409 plus the current
revision and refetches.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from pipegen import wizard
from pipegen.bindings import BindingBatchError, PathSyntaxError, bind_form
from pipegen.model import Project, validate_project
from pipegen.registry import CATEGORIES, Registry, bundled_content_dir, load_content_dir
from pipegen.store import FileDocumentStore, NotFound, RevisionConflict
from pipegen.wizard import (
    CategoryBoundaryViolation,
    OutOfRange,
    StepResult,
    UnknownStep,
    load_steps,
)

PROJECTS = "projects"


class CreateProjectRequest(BaseModel):
    name: str
    analysis_type: str


class StepUpdateRequest(BaseModel):
    revision: int
    pairs: list[tuple[str, str]] = Field(default_factory=list)


class ReorderRequest(BaseModel):
    revision: int
    from_position: int = Field(alias="from")
    to_position: int = Field(alias="to")

    model_config = {"populate_by_name": True}


def _element_dict(element) -> dict:
    return {
        "element_id": element.element_id,
        "category": element.category,
        "display_name": element.display_name,
        "tags": sorted(element.tags),
        "imports": list(element.imports),
        "construct_template": element.construct_template,
        "tooltip": element.tooltip,
        "doc_url": element.doc_url,
    }


def _parameter_dict(row) -> dict:
    from pipegen.literals import HyperparamSpace, render_hyperparam_text, render_literal

    default = row.default_literal
    default_text = (render_hyperparam_text(default)
                    if isinstance(default, HyperparamSpace) else render_literal(default))
    return {
        "param_name": row.param_name,
        "kind": row.kind,
        "value_type": row.value_type,
        "default": default_text,
        "applies_tags": sorted(row.applies_tags),
        "tooltip": row.tooltip,
        "doc_url": row.doc_url,
    }


def create_app(content_dir: str | Path | None = None,
               data_dir: str | Path | None = None,
               registry: Registry | None = None,
               frontend_dir: str | Path | None = None) -> FastAPI:
    content_dir = Path(content_dir or os.environ.get("PIPEGEN_CONTENT_DIR")
                       or bundled_content_dir())
    data_dir = Path(data_dir or os.environ.get("PIPEGEN_DATA_DIR") or "pipegen_data")
    if registry is None:
        registry = load_content_dir(content_dir)
    steps_path = content_dir / "steps.csv"
    steps = load_steps(steps_path) if steps_path.exists() else list(wizard.bundled_steps())
    store = FileDocumentStore(data_dir)

    app = FastAPI(title="pipegen", version="0.1.0")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.registry = registry
    app.state.steps = steps
    app.state.store = store

    def load_project(project_id: str) -> Project:
        try:
            document = store.get(PROJECTS, project_id)
        except ValueError:
            raise HTTPException(status_code=404, detail="no such project") from None
        if document is None:
            raise HTTPException(status_code=404, detail="no such project")
        return Project.from_dict(document.body)

    def save_result(project_id: str, base_revision: int, result: StepResult) -> dict:
        try:
            store.put(PROJECTS, project_id, result.project.to_dict(), base_revision)
        except RevisionConflict as exc:
            raise HTTPException(status_code=409, detail={
                "error": "revision_conflict", "current_revision": exc.current,
            }) from None
        except NotFound:
            raise HTTPException(status_code=404, detail="no such project") from None
        return result.to_dict()

    @app.post("/projects", status_code=201)
    def create_project(request: CreateProjectRequest) -> dict:
        try:
            project = wizard.create_project(request.name, request.analysis_type,
                                            registry, steps)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        store.put(PROJECTS, project.id, project.to_dict(), None)
        return project.to_dict()

    @app.get("/projects")
    def list_projects() -> list[dict]:
        summaries = []
        for document in store.scan(PROJECTS):
            body = document.body
            summaries.append({
                "id": document.id,
                "name": body.get("name", ""),
                "analysis_type": body.get("analysis_type", ""),
                "revision": document.revision,
                "updated_at": document.updated_at,
            })
        return summaries

    @app.get("/projects/{project_id}")
    def get_project(project_id: str) -> dict:
        return load_project(project_id).to_dict()

    @app.delete("/projects/{project_id}", status_code=204)
    def delete_project(project_id: str) -> Response:
        load_project(project_id)
        store.delete(PROJECTS, project_id)
        return Response(status_code=204)

    @app.put("/projects/{project_id}/steps/{step_id}")
    def update_step(project_id: str, step_id: str, request: StepUpdateRequest) -> dict:
        project = load_project(project_id)
        if request.revision != project.revision:
            raise HTTPException(status_code=409, detail={
                "error": "revision_conflict", "current_revision": project.revision,
            })
        try:
            binding_set = bind_form(request.pairs)
        except PathSyntaxError as exc:
            raise HTTPException(status_code=400, detail={
                "error": "path_syntax", "key": exc.key, "message": str(exc),
            }) from None
        try:
            result = wizard.apply_step_input(project, step_id, binding_set,
                                             registry, steps)
        except UnknownStep as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        except BindingBatchError as exc:
            raise HTTPException(status_code=400, detail={
                "error": "binding_errors",
                "binding_errors": [e.to_dict() for e in exc.errors],
            }) from None
        return save_result(project_id, request.revision, result)

    @app.post("/projects/{project_id}/reorder")
    def reorder(project_id: str, request: ReorderRequest) -> dict:
        project = load_project(project_id)
        if request.revision != project.revision:
            raise HTTPException(status_code=409, detail={
                "error": "revision_conflict", "current_revision": project.revision,
            })
        try:
            result = wizard.reorder_element(project, request.from_position,
                                            request.to_position, registry, steps)
        except OutOfRange as exc:
            raise HTTPException(status_code=400, detail={
                "error": "out_of_range", "message": str(exc)}) from None
        except CategoryBoundaryViolation as exc:
            raise HTTPException(status_code=400, detail={
                "error": "category_boundary", "message": str(exc)}) from None
        return save_result(project_id, request.revision, result)

    @app.get("/projects/{project_id}/script")
    def get_script(project_id: str) -> PlainTextResponse:
        project = load_project(project_id)
        if not project.last_script:
            raise HTTPException(status_code=404,
                                detail="no error-free script has been generated yet")
        stem = re.sub(r"[^A-Za-z0-9_-]+", "_", project.name) or "pipeline"
        return PlainTextResponse(project.last_script, headers={
            "Content-Disposition": f'attachment; filename="{stem}.py"',
        })

    @app.get("/registry/elements")
    def registry_elements(category: str | None = Query(default=None),
                          tags: str | None = Query(default=None)) -> list[dict]:
        context = {t.strip() for t in (tags or "").split(",") if t.strip()}
        categories = [category] if category else list(CATEGORIES)
        results: list[dict] = []
        for cat in categories:
            if tags is None:
                chosen = registry.category_elements(cat)
            else:
                from pipegen.registry import query_elements
                chosen = query_elements(registry, cat, context)
            results.extend(_element_dict(e) for e in chosen)
        return results

    @app.get("/registry/elements/{element_id}")
    def registry_element(element_id: str) -> dict:
        element = registry.elements.get(element_id)
        if element is None:
            raise HTTPException(status_code=404, detail="no such element")
        payload = _element_dict(element)
        payload["parameters"] = [_parameter_dict(r)
                                 for r in registry.parameter_rows(element_id)]
        return payload

    @app.get("/steps")
    def get_steps() -> list[dict]:
        return [step.to_dict() for step in steps]

    @app.get("/projects/{project_id}/validation")
    def get_validation(project_id: str) -> list[dict]:
        project = load_project(project_id)
        return [issue.to_dict() for issue in validate_project(project, registry)]

    frontend = Path(frontend_dir) if frontend_dir else _default_frontend_dir()
    if frontend is not None and frontend.is_dir():
        app.mount("/", StaticFiles(directory=frontend, html=True), name="frontend")

    return app


def _default_frontend_dir() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None
