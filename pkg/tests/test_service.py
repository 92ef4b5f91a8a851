import pytest
from fastapi.testclient import TestClient

from pipegen.service import create_app

DATA_PAIRS = [
    ["data.file_path", "breast_cancer.csv"],
    ["data.feature_columns", "['mean_radius', 'mean_texture']"],
    ["data.target_column", "diagnosis"],
    ["data.n_samples", "569"],
]


@pytest.fixture()
def client(tmp_path):
    app = create_app(data_dir=tmp_path / "data")
    with TestClient(app) as test_client:
        yield test_client


def create_demo(client) -> dict:
    response = client.post("/projects",
                           json={"name": "demo_project", "analysis_type": "classification"})
    assert response.status_code == 201
    return response.json()


def drive_to_golden(client) -> dict:
    """Create a project and walk all five steps; returns the final step payload."""
    project = create_demo(client)
    pid = project["id"]
    revision = project["revision"]
    submissions = [
        ("project_data", DATA_PAIRS),
        ("optimization", [
            ["training.optimizer.element_id", "grid_search"],
            ["training.outer_cv.strategy", "KFold"],
            ["training.outer_cv.params.n_splits", "5"],
            ["training.inner_cv.strategy", "KFold"],
            ["training.inner_cv.params.n_splits", "5"],
            ["training.metrics", "['accuracy', 'balanced_accuracy']"],
            ["training.best_config_metric", "accuracy"],
        ]),
        ("transformers", [
            ["elements[0].element_id", "StandardScaler"],
            ["elements[1].element_id", "PCA"],
            ["elements[1].hyperparams.n_components", "[5, 10]"],
        ]),
        ("estimators", [
            ["elements[2].element_id", "SVC"],
            ["elements[2].hyperparams.C", "[0.1, 1, 10]"],
            ["elements[2].fixed_params.kernel", ""],
        ]),
        ("review", []),
    ]
    payload = None
    for step_id, pairs in submissions:
        response = client.put(f"/projects/{pid}/steps/{step_id}",
                              json={"revision": revision, "pairs": pairs})
        assert response.status_code == 200, response.text
        payload = response.json()
        revision = payload["project"]["revision"]
    return payload


class TestProjectEndpoints:
    def test_create_starts_at_revision_one_all_steps_empty(self, client):
        project = create_demo(client)
        assert project["revision"] == 1
        assert set(project["step_progress"].values()) == {"empty"}

    def test_create_rejects_bad_analysis_type(self, client):
        response = client.post("/projects",
                               json={"name": "x", "analysis_type": "clustering"})
        assert response.status_code == 422

    def test_get_after_update_reads_own_write(self, client):
        project = create_demo(client)
        response = client.put(f"/projects/{project['id']}/steps/project_data",
                              json={"revision": 1, "pairs": DATA_PAIRS})
        fetched = client.get(f"/projects/{project['id']}").json()
        assert fetched == response.json()["project"]

    def test_missing_project_404(self, client):
        assert client.get("/projects/deadbeef").status_code == 404
        assert client.delete("/projects/deadbeef").status_code == 404

    def test_delete_removes_from_listing(self, client):
        project = create_demo(client)
        assert client.delete(f"/projects/{project['id']}").status_code == 204
        assert client.get("/projects").json() == []

    def test_listing_summaries(self, client):
        create_demo(client)
        summaries = client.get("/projects").json()
        assert len(summaries) == 1
        assert summaries[0]["name"] == "demo_project"
        assert set(summaries[0]) == {"id", "name", "analysis_type",
                                     "revision", "updated_at"}


class TestStepEndpoint:
    def test_full_flow_reaches_golden_script(self, client, golden_script):
        payload = drive_to_golden(client)
        assert payload["script"] == golden_script
        assert set(payload["step_status"].values()) == {"complete"}

    def test_stale_revision_conflict(self, client):
        project = create_demo(client)
        pid = project["id"]
        first = client.put(f"/projects/{pid}/steps/project_data",
                           json={"revision": 1, "pairs": DATA_PAIRS})
        assert first.status_code == 200
        stale = client.put(f"/projects/{pid}/steps/project_data",
                           json={"revision": 1, "pairs": DATA_PAIRS})
        assert stale.status_code == 409
        assert stale.json()["detail"]["current_revision"] == 2

    def test_path_syntax_error_is_400(self, client):
        project = create_demo(client)
        response = client.put(f"/projects/{project['id']}/steps/project_data",
                              json={"revision": 1, "pairs": [["elements[x].y", "1"]]})
        assert response.status_code == 400
        assert response.json()["detail"]["error"] == "path_syntax"

    def test_binding_errors_are_reported_per_field(self, client):
        project = create_demo(client)
        response = client.put(f"/projects/{project['id']}/steps/project_data",
                              json={"revision": 1, "pairs": [
                                  ["data.n_samples", "many"],
                                  ["data.nope", "1"],
                              ]})
        assert response.status_code == 400
        errors = response.json()["detail"]["binding_errors"]
        assert [e["code"] for e in errors] == ["type_mismatch", "unknown_path"]
        # rejected wholesale: nothing was stored
        assert client.get(f"/projects/{project['id']}").json()["data"] is None

    def test_unknown_step_422(self, client):
        project = create_demo(client)
        response = client.put(f"/projects/{project['id']}/steps/nonsense",
                              json={"revision": 1, "pairs": []})
        assert response.status_code == 422

    def test_validation_problems_do_not_block_storage(self, client):
        project = create_demo(client)
        response = client.put(f"/projects/{project['id']}/steps/optimization",
                              json={"revision": 1, "pairs": [
                                  ["training.best_config_metric", "mean_squared_error"],
                              ]})
        assert response.status_code == 200
        payload = response.json()
        assert any(i["severity"] == "error" for i in payload["report"])
        assert payload["script"] == ""
        assert payload["diff"] == []
        assert client.get(f"/projects/{project['id']}").json()["revision"] == 2


class TestReorderEndpoint:
    def test_reorder_swaps_blocks(self, client):
        payload = drive_to_golden(client)
        pid = payload["project"]["id"]
        revision = payload["project"]["revision"]
        response = client.post(f"/projects/{pid}/reorder",
                               json={"revision": revision, "from": 0, "to": 1})
        assert response.status_code == 200
        script = response.json()["script"]
        assert script.index("PipelineElement('PCA'") < script.index(
            "PipelineElement('StandardScaler')")

    def test_cross_category_rejected(self, client):
        payload = drive_to_golden(client)
        pid = payload["project"]["id"]
        revision = payload["project"]["revision"]
        response = client.post(f"/projects/{pid}/reorder",
                               json={"revision": revision, "from": 0, "to": 2})
        assert response.status_code == 400
        assert response.json()["detail"]["error"] == "category_boundary"

    def test_out_of_range_rejected(self, client):
        payload = drive_to_golden(client)
        pid = payload["project"]["id"]
        revision = payload["project"]["revision"]
        response = client.post(f"/projects/{pid}/reorder",
                               json={"revision": revision, "from": 0, "to": 9})
        assert response.status_code == 400
        assert response.json()["detail"]["error"] == "out_of_range"


class TestScriptDownload:
    def test_script_download_with_disposition(self, client):
        payload = drive_to_golden(client)
        pid = payload["project"]["id"]
        response = client.get(f"/projects/{pid}/script")
        assert response.status_code == 200
        assert response.text == payload["script"]
        assert response.headers["content-disposition"] == \
            'attachment; filename="demo_project.py"'

    def test_script_404_before_first_valid_render(self, client):
        project = create_demo(client)
        assert client.get(f"/projects/{project['id']}/script").status_code == 404


class TestRegistryEndpoints:
    def test_elements_filtered_by_category_and_tags(self, client):
        response = client.get("/registry/elements",
                              params={"category": "metric", "tags": "classification"})
        assert [e["element_id"] for e in response.json()] == [
            "accuracy", "balanced_accuracy", "f1_score"]

    def test_all_elements_without_filters(self, client):
        assert len(client.get("/registry/elements").json()) == 19

    def test_element_detail_carries_tooltip_and_parameters(self, client):
        payload = client.get("/registry/elements/SVC").json()
        assert payload["tooltip"]
        assert payload["doc_url"]
        names = [p["param_name"] for p in payload["parameters"]]
        assert names == ["C", "C", "kernel"]

    def test_unknown_element_404(self, client):
        assert client.get("/registry/elements/NoSuchThing").status_code == 404

    def test_steps_endpoint(self, client):
        steps = client.get("/steps").json()
        assert [s["step_id"] for s in steps] == [
            "project_data", "optimization", "transformers", "estimators", "review"]
        assert all(s["description"] for s in steps)
