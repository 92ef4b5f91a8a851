import json
from pathlib import Path

import pytest

from pipegen.model import Project
from pipegen.registry import Registry, bundled_content_dir, load_content_dir, load_registry
from pipegen.wizard import bundled_steps

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def registry() -> Registry:
    return load_content_dir(bundled_content_dir())


@pytest.fixture(scope="session")
def steps():
    return list(bundled_steps())


@pytest.fixture()
def golden_project() -> Project:
    with open(FIXTURES / "golden_project.json", encoding="utf-8") as handle:
        return Project.from_dict(json.load(handle))


@pytest.fixture(scope="session")
def golden_script() -> str:
    return (FIXTURES / "golden_script.py").read_text(encoding="utf-8")


def write_content(tmp_path: Path, element_rows: list[str], parameter_rows: list[str]) -> Registry:
    """Build a registry from raw CSV data rows (headers added here)."""
    elements = tmp_path / "elements.csv"
    parameters = tmp_path / "parameters.csv"
    elements.write_text(
        "element_id,category,display_name,tags,imports,construct_template,tooltip,doc_url\n"
        + "".join(row + "\n" for row in element_rows),
        encoding="utf-8",
    )
    parameters.write_text(
        "element_id,param_name,kind,value_type,default_literal,applies_tags,tooltip,doc_url\n"
        + "".join(row + "\n" for row in parameter_rows),
        encoding="utf-8",
    )
    return load_registry(elements, parameters)
