"""Seeded generation of random, validation-clean projects.

Used by the property suites: determinism, transparency, diff locality, and
the binding round-trip all run over projects drawn from here. Everything is
a pure function of the passed Random instance.
"""

from __future__ import annotations

import random
import string

from pipegen.literals import HyperparamSpace, LiteralValue
from pipegen.model import (
    CvConfig,
    DataSourceConfig,
    ElementInstance,
    Project,
    TrainingConfig,
    context_tags,
)
from pipegen.registry import KFOLD_FAMILY_IDS, Registry, query_elements

_WORDS = ("alpha", "beta", "gamma", "delta", "study", "pilot", "cohort", "trial")


def _random_name(rng: random.Random) -> str:
    return "_".join(rng.sample(_WORDS, 2)) + str(rng.randrange(100))


def _random_columns(rng: random.Random) -> tuple[list[str], str]:
    count = rng.randint(1, 5)
    pool = [f"feature_{c}" for c in string.ascii_lowercase[:12]]
    features = rng.sample(pool, count)
    return features, "target"


def random_fixed_value(rng: random.Random, value_type: str) -> LiteralValue:
    if value_type == "int":
        return rng.randint(1, 500)
    if value_type == "float":
        return round(rng.uniform(0.001, 100.0), 4)
    if value_type == "bool":
        return rng.random() < 0.5
    if value_type == "string":
        return rng.choice(("mean", "median", "most_frequent", "auto", "scale"))
    return [rng.randint(1, 9) for _ in range(rng.randint(1, 3))]


def random_space(rng: random.Random, value_type: str) -> HyperparamSpace:
    if value_type in ("int", "float") and rng.random() < 0.3:
        if value_type == "int":
            lo = rng.randint(1, 5)
            return HyperparamSpace(kind="int_range", min=lo,
                                   max=lo + rng.randint(2, 10), step=rng.randint(1, 3))
        lo = round(rng.uniform(0.1, 1.0), 2)
        return HyperparamSpace(kind="float_range", min=lo,
                               max=round(lo + rng.uniform(0.5, 3.0), 2),
                               step=round(rng.uniform(0.1, 0.8), 2))
    count = rng.randint(1, 4)
    seen: set[str] = set()
    values = []
    for _ in range(count):
        value = random_fixed_value(rng, value_type)
        spelled = repr(value)
        if spelled not in seen:
            seen.add(spelled)
            values.append(value)
    return HyperparamSpace(kind="categorical_list", values=values)


def _configure_instance(rng: random.Random, instance: ElementInstance,
                        registry: Registry) -> None:
    for name in registry.parameter_names(instance.element_id):
        row = registry.parameter_def(instance.element_id, name)
        if rng.random() < 0.3:
            continue  # leave this parameter out entirely
        if row.kind == "fixed":
            instance.fixed_params[name] = random_fixed_value(rng, row.value_type)
        else:
            instance.hyperparams[name] = random_space(rng, row.value_type)
        instance.user_set.add(name)


def random_project(rng: random.Random, registry: Registry) -> Project:
    """Draw one validation-clean project."""
    analysis_type = rng.choice(("classification", "regression"))
    n_samples = rng.randint(30, 600)
    features, target = _random_columns(rng)

    project = Project(
        id=f"sample{rng.randrange(10**9)}",
        revision=1,
        name=_random_name(rng),
        analysis_type=analysis_type,
        data=DataSourceConfig(
            file_path=rng.choice(("train.csv", "data/cohort.csv", "samples.csv")),
            feature_columns=features,
            target_column=target,
            n_samples=n_samples,
        ),
        training=TrainingConfig(),
    )
    context = context_tags(project)

    transformers = query_elements(registry, "transformer", context)
    estimators = query_elements(registry, "estimator", context)
    position = 0
    for element in rng.sample(transformers, rng.randint(0, min(3, len(transformers)))):
        instance = ElementInstance(element_id=element.element_id, position=position,
                                   user_set={"element_id"})
        _configure_instance(rng, instance, registry)
        project.elements.append(instance)
        position += 1
    for element in rng.sample(estimators, rng.randint(1, min(3, len(estimators)))):
        instance = ElementInstance(element_id=element.element_id, position=position,
                                   user_set={"element_id"})
        _configure_instance(rng, instance, registry)
        project.elements.append(instance)
        position += 1

    optimizer = rng.choice(query_elements(registry, "optimizer", context))
    optimizer_instance = ElementInstance(element_id=optimizer.element_id,
                                         user_set={"element_id"})
    for name in registry.parameter_names(optimizer.element_id):
        row = registry.parameter_def(optimizer.element_id, name)
        if row.kind == "fixed" and rng.random() < 0.7:
            optimizer_instance.fixed_params[name] = random_fixed_value(rng, row.value_type)
            optimizer_instance.user_set.add(name)
    project.training.optimizer = optimizer_instance

    strategies = query_elements(registry, "cv_strategy", context)
    for attr in ("outer_cv", "inner_cv"):
        strategy = rng.choice(strategies)
        cv = CvConfig(strategy=strategy.element_id, user_set={"strategy"})
        for name in registry.parameter_names(strategy.element_id):
            row = registry.parameter_def(strategy.element_id, name)
            if row.kind != "fixed":
                continue
            if name == "n_splits":
                upper = 10 if strategy.element_id in KFOLD_FAMILY_IDS else 20
                cv.params[name] = rng.randint(2, min(upper, n_samples))
            elif row.value_type == "float":
                cv.params[name] = round(rng.uniform(0.1, 0.4), 2)
            else:
                cv.params[name] = random_fixed_value(rng, row.value_type)
            cv.user_set.add(name)
        setattr(project.training, attr, cv)

    metric_ids = [e.element_id for e in query_elements(registry, "metric", context)]
    chosen = rng.sample(metric_ids, rng.randint(1, len(metric_ids)))
    project.training.metrics = chosen
    project.training.best_config_metric = rng.choice(chosen)
    project.user_set.update({"training.metrics", "training.best_config_metric"})
    return project


def mutate_one_parameter(rng: random.Random, project: Project,
                         registry: Registry) -> tuple[Project, int] | None:
    """Change exactly one parameter of one pipeline element.

    Returns (mutated copy, element position), or None when no element of the
    project carries a parameter to mutate.
    """
    candidates = []
    for instance in project.elements:
        for name in registry.parameter_names(instance.element_id):
            candidates.append((instance.position, name))
    if not candidates:
        return None
    position, name = rng.choice(candidates)
    mutated = project.clone()
    instance = mutated.elements[position]
    row = registry.parameter_def(instance.element_id, name)
    for _ in range(20):
        if row.kind == "fixed":
            value = random_fixed_value(rng, row.value_type)
            if instance.fixed_params.get(name) != value:
                instance.fixed_params[name] = value
                break
        else:
            space = random_space(rng, row.value_type)
            if instance.hyperparams.get(name) != space:
                instance.hyperparams[name] = space
                break
    instance.user_set.add(name)
    return mutated, position
