import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pipegen import wizard
from pipegen.bindings import (
    BindingBatchError,
    PathSegment,
    PathSyntaxError,
    apply_binding_set,
    bind_form,
    parse_path,
    project_to_pairs,
    render_path,
)
from pipegen.sampling import random_project

MALFORMED_KEYS = [
    "elements[x].y", "elements[].element_id", "elements[1.element_id",
    "elements]1[.element_id", ".name", "name.", "data..file_path",
    "1name", "na-me", "elements[-1].element_id", "a[1][2]", "[3]",
    "", "data.file path", "elements[1]extra", "träining.metrics",
    "name ", " name", "elements[one].fixed_params.c", "a.b[".strip(),
]


class TestPathGrammar:
    def test_indexed_segment(self):
        path = parse_path("elements[1].hyperparams.n_components")
        assert path == (PathSegment("elements", 1), PathSegment("hyperparams"),
                        PathSegment("n_components"))

    def test_four_plain_segments(self):
        path = parse_path("training.outer_cv.params.n_splits")
        assert len(path) == 4
        assert all(seg.index is None for seg in path)

    def test_non_integer_index_rejected(self):
        with pytest.raises(PathSyntaxError):
            parse_path("elements[x].y")

    @pytest.mark.parametrize("key", MALFORMED_KEYS)
    def test_malformed_keys(self, key):
        with pytest.raises(PathSyntaxError):
            parse_path(key)

    def test_render_path_is_inverse(self):
        for key in ("elements[1].hyperparams.n_components",
                    "training.outer_cv.params.n_splits", "name"):
            assert render_path(parse_path(key)) == key

    def test_bind_form_keeps_submission_order(self):
        pairs = [("name", "a"), ("analysis_type", "classification"), ("name", "b")]
        binding_set = bind_form(pairs)
        assert [b.key for b in binding_set] == ["name", "analysis_type", "name"]


class TestApply:
    def test_last_write_wins_for_repeated_keys(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        apply_binding_set(project, bind_form([
            ("data.n_samples", "100"), ("data.n_samples", "200")]), registry)
        assert project.data.n_samples == 200

    def test_unknown_path_reported_with_key(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        with pytest.raises(BindingBatchError) as exc:
            apply_binding_set(project, bind_form([("data.nope", "1")]), registry)
        error = exc.value.errors[0]
        assert error.key == "data.nope"
        assert error.code == "unknown_path"

    def test_type_mismatch_reported_with_key(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        with pytest.raises(BindingBatchError) as exc:
            apply_binding_set(project, bind_form([
                ("elements[0].element_id", "PCA"),
                ("elements[0].hyperparams.n_components", "['a']"),
            ]), registry)
        assert [e.code for e in exc.value.errors] == ["type_mismatch"]

    def test_unknown_parameter_is_unknown_path(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        with pytest.raises(BindingBatchError) as exc:
            apply_binding_set(project, bind_form([
                ("elements[0].element_id", "PCA"),
                ("elements[0].fixed_params.whiten", "True"),
            ]), registry)
        assert [e.code for e in exc.value.errors] == ["unknown_path"]

    def test_element_creation_attaches_context_defaults(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        apply_binding_set(project, bind_form([
            ("data.n_samples", "20"),  # tiny_sample context
            ("elements[0].element_id", "PCA"),
        ]), registry)
        assert project.elements[0].hyperparams["n_components"].values == [2, 3]

    def test_empty_value_removes_parameter(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        apply_binding_set(project, bind_form([
            ("elements[0].element_id", "SVC"),
            ("elements[0].fixed_params.kernel", ""),
        ]), registry)
        assert "kernel" not in project.elements[0].fixed_params
        assert "kernel" in project.elements[0].user_set

    def test_element_removal_renumbers(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        apply_binding_set(project, bind_form([
            ("elements[0].element_id", "StandardScaler"),
            ("elements[1].element_id", "PCA"),
            ("elements[0].element_id", ""),
        ]), registry)
        assert [e.element_id for e in project.elements] == ["PCA"]
        assert project.elements[0].position == 0

    def test_metric_cannot_be_pipeline_element(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        with pytest.raises(BindingBatchError) as exc:
            apply_binding_set(project, bind_form([
                ("elements[0].element_id", "accuracy")]), registry)
        assert exc.value.errors[0].code == "type_mismatch"

    def test_cv_strategy_switch_preserves_pinned_params(self, registry):
        project = wizard.create_project("demo", "classification", registry)
        apply_binding_set(project, bind_form([
            ("training.outer_cv.strategy", "KFold"),
            ("training.outer_cv.params.n_splits", "7"),
            ("training.outer_cv.strategy", "ShuffleSplit"),
        ]), registry)
        cv = project.training.outer_cv
        assert cv.strategy == "ShuffleSplit"
        assert cv.params["n_splits"] == 7
        assert cv.params["test_size"] == 0.2


class TestRoundTrip:
    def test_golden_project(self, registry, golden_project):
        pairs = project_to_pairs(golden_project, registry)
        fresh = wizard.create_project(golden_project.name,
                                      golden_project.analysis_type, registry)
        result = wizard.apply_step_input(fresh, "review", bind_form(pairs), registry)
        assert result.project.content_dict() == golden_project.content_dict()

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_sampled_projects(self, registry, seed):
        sampled = random_project(random.Random(seed), registry)
        pairs = project_to_pairs(sampled, registry)
        fresh = wizard.create_project(sampled.name, sampled.analysis_type, registry)
        result = wizard.apply_step_input(fresh, "review", bind_form(pairs), registry)
        assert result.project.content_dict() == sampled.content_dict()
