import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pipegen import wizard
from pipegen.codegen import build_document
from pipegen.literals import HyperparamSpace
from pipegen.model import (
    DataSourceConfig,
    Project,
    TagPolicy,
    context_tags,
    error_issues,
    has_errors,
    new_project,
    validate_project,
)
from pipegen.sampling import random_project


def project_with_samples(analysis_type: str, n_samples: int) -> Project:
    project = new_project("p", analysis_type)
    project.data = DataSourceConfig(file_path="x.csv", feature_columns=["a"],
                                    target_column="y", n_samples=n_samples)
    return project


def rule_table_tags(analysis_type: str, n_samples: int) -> set[str]:
    """Independent spelling of the tagging rules, used as the oracle."""
    tags = {analysis_type}
    if n_samples < 100:
        tags.add("small_sample")
    if n_samples < 30:
        tags.add("tiny_sample")
    return tags


class TestContextTags:
    def test_large_classification(self):
        assert context_tags(project_with_samples("classification", 500)) == {"classification"}

    def test_small_regression(self):
        assert context_tags(project_with_samples("regression", 50)) == {
            "regression", "small_sample"}

    def test_tiny_classification(self):
        assert context_tags(project_with_samples("classification", 10)) == {
            "classification", "small_sample", "tiny_sample"}

    @given(st.sampled_from(["classification", "regression"]),
           st.integers(min_value=1, max_value=1000))
    def test_matches_rule_table(self, analysis_type, n_samples):
        project = project_with_samples(analysis_type, n_samples)
        assert context_tags(project) == rule_table_tags(analysis_type, n_samples)

    @given(st.sampled_from(["classification", "regression"]),
           st.integers(min_value=1, max_value=1000))
    def test_pure(self, analysis_type, n_samples):
        a = project_with_samples(analysis_type, n_samples)
        b = project_with_samples(analysis_type, n_samples)
        assert context_tags(a) == context_tags(b)

    def test_policy_is_overridable(self):
        policy = TagPolicy(small_sample_below=1000, tiny_sample_below=500)
        tags = context_tags(project_with_samples("regression", 600), policy)
        assert tags == {"regression", "small_sample"}

    def test_no_data_only_analysis_tag(self):
        assert context_tags(new_project("p", "classification")) == {"classification"}


class TestValidation:
    def test_classification_metric_on_regression_project(self, registry):
        project = wizard.create_project("p", "regression", registry)
        project.training.metrics = ["accuracy"]
        project.user_set.add("training.metrics")
        report = validate_project(project, registry)
        assert any(i.path == "training.metrics[0]" and i.severity == "error"
                   for i in report)

    def test_fresh_project_missing_data_and_estimator(self, registry):
        project = wizard.create_project("p", "classification", registry)
        paths = {i.path for i in error_issues(validate_project(project, registry))}
        assert paths == {"data", "elements"}

    def test_n_splits_exceeding_n_samples(self, registry, golden_project):
        golden_project.data.n_samples = 20
        golden_project.training.outer_cv.params["n_splits"] = 25
        report = validate_project(golden_project, registry)
        assert any(i.message == "n_splits exceeds n_samples"
                   and i.path == "training.outer_cv.params.n_splits" for i in report)

    def test_shuffle_split_is_not_bounded_by_n_samples(self, registry, golden_project):
        golden_project.data.n_samples = 20
        golden_project.training.outer_cv.strategy = "ShuffleSplit"
        golden_project.training.outer_cv.params = {"n_splits": 25, "test_size": 0.2}
        report = validate_project(golden_project, registry)
        assert not any("exceeds" in i.message for i in report)

    def test_golden_project_is_clean(self, registry, golden_project):
        assert validate_project(golden_project, registry) == []

    def test_unknown_parameter(self, registry, golden_project):
        golden_project.elements[2].fixed_params["made_up"] = 1
        report = validate_project(golden_project, registry)
        assert any(i.path == "elements[2].fixed_params.made_up" for i in report)

    def test_wrong_literal_type(self, registry, golden_project):
        golden_project.elements[1].hyperparams["n_components"] = HyperparamSpace(
            kind="categorical_list", values=["five"])
        assert has_errors(validate_project(golden_project, registry))

    def test_estimator_before_transformer(self, registry, golden_project):
        golden_project.elements.reverse()
        for position, instance in enumerate(golden_project.elements):
            instance.position = position
        report = validate_project(golden_project, registry)
        assert any("before estimators" in i.message for i in report)

    def test_best_config_metric_must_be_chosen_metric(self, registry, golden_project):
        golden_project.training.best_config_metric = "f1_score"
        assert has_errors(validate_project(golden_project, registry))

    def test_grid_search_warning_never_blocks(self, registry, golden_project):
        golden_project.elements[2].hyperparams["C"] = HyperparamSpace(
            kind="categorical_list", values=[0.1, 0.2, 0.5, 1, 2, 5, 10, 20])
        report = validate_project(golden_project, registry)
        warnings = [i for i in report if i.severity == "warning"]
        assert warnings and not has_errors(report)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_sound_for_emission(self, registry, seed):
        project = random_project(random.Random(seed), registry)
        assert not has_errors(validate_project(project, registry))
        build_document(project, registry)  # must not raise

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), damage=st.booleans())
    def test_transformer_reorder_keeps_error_count(self, registry, seed, damage):
        rng = random.Random(seed)
        project = random_project(rng, registry)
        transformers = project.transformers(registry)
        if len(transformers) < 2:
            return
        if damage:
            transformers[0].fixed_params["bogus"] = 1
        before = len(error_issues(validate_project(project, registry)))
        i, j = transformers[0].position, transformers[1].position
        project.elements[i], project.elements[j] = project.elements[j], project.elements[i]
        project.elements[i].position, project.elements[j].position = i, j
        after = len(error_issues(validate_project(project, registry)))
        assert before == after


class TestSerialization:
    def test_dict_roundtrip(self, golden_project):
        again = Project.from_dict(golden_project.to_dict())
        assert again == golden_project

    def test_canonical_json_is_stable(self, golden_project):
        assert golden_project.canonical_json() == golden_project.canonical_json()
        clone = golden_project.clone()
        assert clone.canonical_json() == golden_project.canonical_json()

    def test_content_dict_strips_bookkeeping(self, golden_project):
        content = golden_project.content_dict()
        assert "revision" not in content
        assert "user_set" not in content["elements"][0]

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_sampled_roundtrip(self, registry, seed):
        project = random_project(random.Random(seed), registry)
        assert Project.from_dict(project.to_dict()) == project
