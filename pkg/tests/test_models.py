"""Scoring function and document-mapping tests."""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from namesift.corpus import NOISE_LABEL
from namesift.features import ConfigError, FeatureConfig, l1_normalize
from namesift.models import (
    MODELS,
    BernoulliScorer,
    ModelConfig,
    MultinomialScorer,
    TaskResources,
    assign_from_context,
    build_context,
    cosine_sim,
    dot_score,
    laplace_log_priors,
    map_documents,
    multinomial_log_coefficient,
    smoothed_profile,
)

import oracles
from conftest import build_task, random_micro_task


# ---------------------------------------------------------------------------
# configuration


def test_model_config_defaults():
    config = ModelConfig(model="cosine")
    assert config.alpha == 0.01
    assert config.jm_lambda == 0.5
    assert config.laplace_denominator == "paper"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"model": "svm"},
        {"model": "cosine", "alpha": 0.0},
        {"model": "cosine", "alpha": -1.0},
        {"model": "cosine", "jm_lambda": 0.0},
        {"model": "cosine", "jm_lambda": 1.0},
        {"model": "cosine", "jm_lambda": 1.5},
        {"model": "cosine", "laplace_denominator": "huge"},
    ],
)
def test_model_config_rejects_bad_values(kwargs):
    with pytest.raises(ConfigError):
        ModelConfig(**kwargs)


# ---------------------------------------------------------------------------
# vector scores


def test_dot_score_worked_example():
    assert dot_score({1: 0.5, 2: 0.5}, {1: 0.2, 3: 0.3}) == pytest.approx(0.1, abs=1e-12)
    assert dot_score({1: 0.4}, {}) == 0.0
    v = {1: 0.3, 2: 1.2}
    assert dot_score(v, v) == pytest.approx(0.3**2 + 1.2**2, abs=1e-12)


def test_cosine_worked_examples():
    v = {1: 0.7, 2: 0.1}
    assert cosine_sim(v, v) == pytest.approx(1.0, abs=1e-12)
    assert cosine_sim({1: 1.0}, {2: 5.0}) == 0.0
    assert cosine_sim({1: 1.0, 2: 1.0}, {1: 1.0}) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert cosine_sim({}, v) == 0.0
    assert cosine_sim({1: 0.0}, v) == 0.0


# ---------------------------------------------------------------------------
# smoothed profiles


def test_smoothed_profile_with_no_documents_is_l1_of_entity():
    entity = {1: 2.0, 2: 6.0}
    assert smoothed_profile(entity, []) == l1_normalize(entity)


def test_smoothed_profile_ignores_orthogonal_documents():
    entity = {1: 1.0}
    assert smoothed_profile(entity, [{2: 4.0}]) == l1_normalize(entity)


def test_smoothed_profile_worked_example():
    # cos(e, d) = 1/sqrt(2); the document mixes in at half weight per feature.
    entity = {1: 1.0}
    doc = {1: 1.0, 2: 1.0}
    profile = smoothed_profile(entity, [doc])
    pull = 0.5 / math.sqrt(2)
    assert profile[1] == pytest.approx(1.0 + pull, abs=1e-12)
    assert profile[2] == pytest.approx(pull, abs=1e-12)
    assert profile[1] == pytest.approx(1.3536, abs=5e-5)


def test_smoothed_score_composition_example():
    profile = smoothed_profile({1: 1.0}, [{1: 1.0, 2: 1.0}])
    query = {1: math.log(2.0) / 2.0}  # w(1, d) = 0.3466, w(2, d) = 0
    exact = (1.0 + 0.5 / math.sqrt(2)) * (math.log(2.0) / 2.0)
    assert dot_score(query, profile) == pytest.approx(exact, abs=1e-12)
    # Four-digit headline value; it was formed from rounded factors.
    assert dot_score(query, profile) == pytest.approx(0.4692, abs=2e-4)


def test_smoothed_score_with_empty_corpus_equals_plain_score_on_l1():
    rng = np.random.default_rng(3)
    for _ in range(20):
        entity = {int(f): float(w) for f, w in enumerate(rng.uniform(0.1, 2.0, size=4))}
        query = {int(f): float(w) for f, w in enumerate(rng.uniform(0.0, 2.0, size=6))}
        assert dot_score(query, smoothed_profile(entity, [])) == pytest.approx(
            dot_score(query, l1_normalize(entity)), abs=1e-12
        )


def test_context_smooths_entities_but_not_noise():
    task = build_task({"e1": "a b", "e2": "c d"}, {"d1": "a b x", "d2": "c y"})
    config = ModelConfig(model="score_smoothed", features=FeatureConfig(noise="union"))
    ctx = build_context(task, config)
    assert set(ctx.smoothed_vectors) == {"e1", "e2", NOISE_LABEL}
    # The noise profile is used as-is, never pulled toward documents.
    assert ctx.smoothed_vectors[NOISE_LABEL] == ctx.profile_vectors[NOISE_LABEL]
    assert ctx.smoothed_vectors["e1"] != ctx.profile_vectors["e1"]


# ---------------------------------------------------------------------------
# Bernoulli with additive smoothing


def test_bernoulli_worked_examples():
    scorer = BernoulliScorer.fit({"e": {1: 0.5, 2: 0.5}}, alpha=0.01)
    # Single class with unit mass: prior is (1 + 0.01) / (1 + 0.01).
    assert scorer.log_priors["e"] == pytest.approx(0.0, abs=1e-12)
    assert scorer.log_score([1], "e") == pytest.approx(math.log(0.51 / 1.01), abs=1e-12)
    assert scorer.log_score([3], "e") == pytest.approx(math.log(0.01 / 1.01), abs=1e-12)
    assert 0.01 / 1.01 == pytest.approx(0.009901, abs=1e-6)


def test_bernoulli_empty_document_scores_prior_only():
    scorer = BernoulliScorer.fit({"e": {1: 0.7}, "f": {2: 0.3}}, alpha=0.01)
    assert scorer.log_score([], "e") == scorer.log_priors["e"]


def test_bernoulli_uses_distinct_features_not_frequencies():
    task = build_task({"e1": "a b", "e2": "c"}, {"d1": "a a a b", "d2": "a b"})
    config = ModelConfig(model="nb_bernoulli_laplace")
    ctx = build_context(task, config)
    a = ctx.index.feature_id("a")
    b = ctx.index.feature_id("b")
    # d1 and d2 share the same distinct-feature set, so identical scores.
    assert ctx.bernoulli.log_score([a, b], "e1") == ctx.bernoulli.log_score([a, b], "e1")
    assignment = assign_from_context(ctx)
    assert assignment.scores["d1"] == assignment.scores["d2"]


def test_laplace_prior_normalization_by_denominator_mode():
    weights = {"e": {1: 0.6}, "f": {2: 0.2}, "g": {3: 0.2}}
    paper = laplace_log_priors(weights, 0.01, denominator="paper")
    conventional = laplace_log_priors(weights, 0.01, denominator="per_feature")
    mass = 1.0
    assert sum(math.exp(p) for p in paper.values()) == pytest.approx(
        (mass + 3 * 0.01) / (mass + 0.01), abs=1e-12
    )
    assert sum(math.exp(p) for p in conventional.values()) == pytest.approx(1.0, abs=1e-12)


def test_bernoulli_matches_linear_domain_oracle():
    rng = np.random.default_rng(29)
    for _ in range(25):
        task = random_micro_task(rng, max_tokens=10)
        for noise in ("none", "union", "intersection"):
            for denominator in ("paper", "per_feature"):
                config = ModelConfig(
                    model="nb_bernoulli_laplace",
                    laplace_denominator=denominator,
                    features=FeatureConfig(noise=noise),
                )
                ctx = build_context(task, config)
                assignment = assign_from_context(ctx)
                for doc in task.documents:
                    expected = oracles.bernoulli_linear(
                        task, doc.id, noise=noise, denominator=denominator
                    )
                    for cid, log_score in assignment.scores[doc.id].items():
                        assert math.exp(log_score) == pytest.approx(
                            expected[cid], rel=1e-9
                        )


# ---------------------------------------------------------------------------
# multinomial with background interpolation


def test_jelinek_mercer_mixture_worked_example():
    scorer = MultinomialScorer(
        classes=["e"], log_priors={"e": 0.0}, ml={"e": {7: 0.2}}, background={7: 0.1}, jm_lambda=0.5
    )
    assert scorer.log_score({7: 1}, "e") == pytest.approx(math.log(0.15), abs=1e-12)
    assert scorer.log_score({7: 3}, "e") == pytest.approx(3 * math.log(0.15), abs=1e-12)


def test_background_floors_features_absent_from_class():
    scorer = MultinomialScorer(
        classes=["e"], log_priors={"e": 0.0}, ml={"e": {}}, background={7: 0.1}, jm_lambda=0.5
    )
    assert scorer.log_score({7: 1}, "e") == pytest.approx(math.log(0.05), abs=1e-12)
    assert scorer.floored == 0


def test_multinomial_matches_linear_domain_oracle():
    rng = np.random.default_rng(31)
    for _ in range(25):
        task = random_micro_task(rng, max_tokens=10)
        for noise in ("none", "union"):
            config = ModelConfig(model="nb_multinomial_jm", features=FeatureConfig(noise=noise))
            ctx = build_context(task, config)
            assignment = assign_from_context(ctx)
            for doc in task.documents:
                expected = oracles.multinomial_linear(task, doc.id, noise=noise)
                for cid, log_score in assignment.scores[doc.id].items():
                    assert math.exp(log_score) == pytest.approx(expected[cid], rel=1e-9)


def test_multinomial_log_coefficient_matches_factorials():
    rng = np.random.default_rng(37)
    for _ in range(50):
        freqs = {int(f): int(n) for f, n in enumerate(rng.integers(1, 6, size=int(rng.integers(1, 5))))}
        total = sum(freqs.values())
        expected = math.factorial(total)
        for n in freqs.values():
            expected //= math.factorial(n)
        assert multinomial_log_coefficient(freqs) == pytest.approx(math.log(expected), rel=1e-12)


def test_adding_multinomial_coefficient_never_changes_argmax():
    rng = np.random.default_rng(101)
    checked = 0
    while checked < 100:
        task = random_micro_task(rng, max_tokens=12)
        config = ModelConfig(model="nb_multinomial_jm", features=FeatureConfig(noise="union"))
        ctx = build_context(task, config)
        assignment = assign_from_context(ctx)
        for doc in task.documents:
            row = assignment.scores[doc.id]
            shift = multinomial_log_coefficient(ctx.index.term_counts[doc.id])
            shifted = {cid: s + shift for cid, s in row.items()}
            assert max(row, key=row.get) == max(shifted, key=shifted.get)
            checked += 1
    assert checked >= 100


# ---------------------------------------------------------------------------
# document mapping


def _assert_tie_rule(ctx, assignment):
    """mapping(d) must be the first class in ranking order that attains the max."""
    for doc_id, row in assignment.scores.items():
        best = max(row.values())
        winners = [cid for cid in ctx.class_ids if row[cid] == best]
        assert assignment.mapping[doc_id] == winners[0]


def test_document_identical_to_profile_maps_there():
    task = build_task(
        {"e1": "jazz guitar stage", "e2": "enzyme protein cell"},
        {"d1": "jazz guitar stage"},
        gold={"d1": "e1"},
    )
    assignment = map_documents(task, ModelConfig(model="cosine"))
    assert assignment.mapping["d1"] == "e1"
    assert assignment.scores["d1"]["e1"] == pytest.approx(1.0, abs=1e-12)


def test_score_union_fixture_routes_unmatched_document_to_noise():
    # Element-local idf zeroes the only shared feature, so every real
    # entity scores 0 while the uniform noise profile still overlaps d1.
    task = build_task({"e1": "z", "e2": "x y"}, {"d1": "x p q"})
    config = ModelConfig(
        model="score", features=FeatureConfig(idf_numerator="paper", noise="union")
    )
    ctx = build_context(task, config)
    assignment = assign_from_context(ctx)
    row = assignment.scores["d1"]
    assert row["e1"] == 0.0
    assert row["e2"] == 0.0
    assert row[NOISE_LABEL] > 0.0
    assert assignment.mapping["d1"] == NOISE_LABEL


def test_exact_tie_goes_to_first_entity_with_noise_ranked_last():
    # d2 pads the corpus so df(alpha) < |C| keeps the idf positive.
    task = build_task({"e1": "alpha", "e2": "alpha"}, {"d1": "alpha", "d2": "padding words"})
    config = ModelConfig(model="cosine", features=FeatureConfig(noise="union"))
    ctx = build_context(task, config)
    assignment = assign_from_context(ctx)
    row = assignment.scores["d1"]
    assert row["e1"] == row["e2"] == row[NOISE_LABEL] == pytest.approx(1.0)
    assert assignment.mapping["d1"] == "e1"
    assert ctx.class_ids[-1] == NOISE_LABEL


def test_empty_document_falls_back_to_first_entity_under_vector_models():
    task = build_task({"e1": "alpha", "e2": "beta"}, {"d1": ""})
    for model in ("cosine", "score", "score_smoothed"):
        config = ModelConfig(model=model, features=FeatureConfig(noise="union"))
        assignment = map_documents(task, config)
        assert assignment.mapping["d1"] == "e1"


def test_single_entity_without_noise_absorbs_everything():
    task = build_task({"e1": "alpha"}, {"d1": "unrelated words", "d2": ""})
    for model in MODELS:
        assignment = map_documents(task, ModelConfig(model=model))
        assert set(assignment.mapping.values()) == {"e1"}


def test_no_entities_and_no_noise_is_an_error():
    task = build_task({}, {"d1": "words"})
    with pytest.raises(ValueError):
        map_documents(task, ModelConfig(model="cosine"))


def test_no_entities_with_noise_enabled_maps_to_noise():
    task = build_task({}, {"d1": "words"})
    config = ModelConfig(model="cosine", features=FeatureConfig(noise="union"))
    assignment = map_documents(task, config)
    assert assignment.mapping["d1"] == NOISE_LABEL


def test_every_document_scored_against_every_class():
    rng = np.random.default_rng(53)
    for _ in range(10):
        task = random_micro_task(rng)
        for model in MODELS:
            for noise in ("none", "intersection"):
                config = ModelConfig(model=model, features=FeatureConfig(noise=noise))
                ctx = build_context(task, config)
                assignment = assign_from_context(ctx)
                assert set(assignment.mapping) == set(task.gold.labels)
                for row in assignment.scores.values():
                    assert set(row) == set(ctx.class_ids)
                _assert_tie_rule(ctx, assignment)


def test_scaling_document_vectors_preserves_vector_model_argmax():
    rng = np.random.default_rng(59)
    for _ in range(10):
        task = random_micro_task(rng)
        for model in ("cosine", "score", "score_smoothed"):
            config = ModelConfig(model=model, features=FeatureConfig(noise="union"))
            ctx = build_context(task, config)
            baseline = assign_from_context(ctx).mapping
            scaled = {
                doc_id: {f: 37.5 * w for f, w in vec.items()}
                for doc_id, vec in ctx.doc_vectors.items()
            }
            rescored = assign_from_context(dataclasses.replace(ctx, doc_vectors=scaled))
            assert rescored.mapping == baseline


def test_degenerate_weights_are_floored_and_counted():
    # Element-local idf makes w(a, e1) negative, so the additively smoothed
    # probability of an absent feature drops below zero and gets floored.
    task = build_task({"e1": "a"}, {"d1": "a a", "d2": "a b"})
    config = ModelConfig(
        model="nb_bernoulli_laplace", features=FeatureConfig(idf_numerator="paper")
    )
    assignment = map_documents(task, config)
    assert assignment.floored > 0
    assert all(math.isfinite(s) for row in assignment.scores.values() for s in row.values())


def test_assignment_tsv_shape():
    task = build_task({"e1": "alpha"}, {"d1": "alpha", "d2": "beta"})
    assignment = map_documents(task, ModelConfig(model="cosine"))
    lines = assignment.to_tsv().splitlines()
    assert lines[0] == "doc_id\tassigned\tscore"
    assert len(lines) == 3
    doc_id, assigned, score = lines[1].split("\t")
    assert (doc_id, assigned) == ("d1", "e1")
    assert float(score) == pytest.approx(1.0)


def test_scores_dict_is_a_deep_copy():
    task = build_task({"e1": "alpha"}, {"d1": "alpha"})
    assignment = map_documents(task, ModelConfig(model="cosine"))
    copy = assignment.scores_dict()
    copy["d1"]["e1"] = -99.0
    assert assignment.scores["d1"]["e1"] != -99.0


# ---------------------------------------------------------------------------
# shared task resources


def test_resources_shared_across_models_give_identical_results():
    task = build_task(
        {"e1": "jazz guitar", "e2": "enzyme protein"},
        {"d1": "jazz stage", "d2": "protein cell", "d3": "lottery"},
    )
    features = FeatureConfig(noise="intersection")
    resources = TaskResources.from_task(task, features)
    for model in MODELS:
        config = ModelConfig(model=model, features=features)
        fresh = map_documents(task, config)
        shared = map_documents(task, config, resources)
        assert fresh.mapping == shared.mapping
        assert fresh.scores == shared.scores


def test_resources_reject_mismatched_weighting_options():
    task = build_task({"e1": "a"}, {"d1": "b"})
    resources = TaskResources.from_task(task, FeatureConfig(idf_numerator="corpus"))
    config = ModelConfig(model="cosine", features=FeatureConfig(idf_numerator="paper"))
    with pytest.raises(ValueError):
        build_context(task, config, resources)


def test_noise_profiles_are_cached_per_semantics():
    task = build_task({"e1": "a b", "e2": "b c"}, {"d1": "b"})
    resources = TaskResources.from_task(task, FeatureConfig())
    first = resources.noise_profile(FeatureConfig(noise="union"))
    second = resources.noise_profile(FeatureConfig(noise="union"))
    assert first is second
    assert resources.noise_profile(FeatureConfig(noise="none")) is None
