"""Feature index, tf-idf weighting, and noise profile tests."""

from __future__ import annotations

import math

import numpy as np
import pytest

from namesift.corpus import NOISE_LABEL
from namesift.features import (
    ConfigError,
    FeatureConfig,
    build_index,
    build_noise_profile,
    intersection_noise,
    l1_normalize,
    tfidf,
    union_noise,
    vectorize,
)

import oracles
from conftest import build_task, random_micro_task


def _tokens_of(index, vector):
    return {index.tokens[fid]: w for fid, w in vector.items()}


# ---------------------------------------------------------------------------
# configuration


@pytest.mark.parametrize(
    "kwargs",
    [
        {"idf_numerator": "banana"},
        {"log_base": "3"},
        {"noise": "everything"},
        {"intersection_semantics": "most"},
    ],
)
def test_feature_config_rejects_unknown_values(kwargs):
    with pytest.raises(ConfigError):
        FeatureConfig(**kwargs)


def test_feature_config_defaults():
    config = FeatureConfig()
    assert config.idf_numerator == "corpus"
    assert config.log_base == "e"
    assert config.noise == "none"


# ---------------------------------------------------------------------------
# the index


def test_index_orders_documents_before_entities():
    task = build_task({"e1": "cat dog"}, {"d1": "ant bee", "d2": "bee cat"})
    index = build_index(task)
    assert index.document_ids == ["d1", "d2"]
    assert index.entity_ids == ["e1"]
    assert index.elements == ["d1", "d2", "e1", NOISE_LABEL]
    assert index.corpus_size == 3
    # Feature ids follow first occurrence, documents first.
    assert index.tokens[: index.feature_count] == ["ant", "bee", "cat", "dog"]


def test_index_document_frequencies():
    task = build_task({"e1": "cat dog"}, {"d1": "ant bee", "d2": "bee cat"})
    index = build_index(task)
    df = {tok: index.df[index.feature_id(tok)] for tok in ("ant", "bee", "cat", "dog")}
    assert df == {"ant": 1, "bee": 2, "cat": 2, "dog": 1}


def test_index_term_lookups():
    task = build_task({"e1": "cat cat dog"}, {"d1": "ant"})
    index = build_index(task)
    counts = index.counts_of("e1")
    assert counts[index.feature_id("cat")] == 2
    assert index.max_counts["e1"] == 2
    assert index.token_totals["e1"] == 3
    with pytest.raises(KeyError):
        index.feature_id("zebra")
    with pytest.raises(KeyError):
        index.counts_of("missing")
    with pytest.raises(KeyError):
        index.counts_of(NOISE_LABEL)  # the noise entity has no term statistics


# ---------------------------------------------------------------------------
# tf-idf


def test_tfidf_worked_example_both_numerators():
    # Element c has counts {a: 2, b: 1}; a second element contributes df(a)=2.
    task = build_task({"e1": "a"}, {"c": "a a b"})
    index = build_index(task)
    paper = FeatureConfig(idf_numerator="paper")
    corpus = FeatureConfig(idf_numerator="corpus")
    # |F_c| = 2 equals |C| = 2 here, so both modes agree.
    assert tfidf("a", "c", index, paper) == pytest.approx(0.0, abs=1e-15)
    assert tfidf("b", "c", index, paper) == pytest.approx(0.5 * math.log(2.0), abs=1e-12)
    assert tfidf("b", "c", index, corpus) == pytest.approx(0.5 * math.log(2.0), abs=1e-12)
    assert tfidf("b", "c", index, corpus) == pytest.approx(0.3466, abs=5e-5)


def test_tfidf_absent_feature_scores_zero():
    task = build_task({"e1": "a"}, {"c": "a a b"})
    index = build_index(task)
    assert tfidf("b", "e1", index) == 0.0


def test_tfidf_accepts_feature_id_or_token():
    task = build_task({"e1": "a"}, {"c": "a a b"})
    index = build_index(task)
    fid = index.feature_id("b")
    assert tfidf(fid, "c", index) == tfidf("b", "c", index)
    with pytest.raises(KeyError):
        tfidf(99, "c", index)
    with pytest.raises(KeyError):
        tfidf("a", "nobody", index)


def test_paper_numerator_can_go_negative_corpus_never_does():
    # Feature in every element: df = |C| = 3 but |F_e1| = 2 < df.
    task = build_task({"e1": "a b"}, {"d1": "a x", "d2": "a y"})
    index = build_index(task)
    w = tfidf("a", "e1", index, FeatureConfig(idf_numerator="paper"))
    assert w < 0.0
    rng = np.random.default_rng(5)
    for _ in range(30):
        task = random_micro_task(rng)
        index = build_index(task)
        for element in index.document_ids + index.entity_ids:
            vec = vectorize(element, index, FeatureConfig(idf_numerator="corpus"))
            assert all(w >= 0.0 for w in vec.values())


def test_vectorize_omits_exact_zeros():
    # df(a) = |C| makes the corpus-mode idf of "a" exactly zero.
    task = build_task({"e1": "a b"}, {"d1": "a c"})
    index = build_index(task)
    vec = _tokens_of(index, vectorize("d1", index))
    assert "a" not in vec
    assert vec["c"] > 0.0


def test_vectorize_of_empty_element_is_empty():
    task = build_task({"e1": ""}, {"d1": "a"})
    index = build_index(task)
    assert vectorize("e1", index) == {}


def test_vectorize_matches_dense_oracle_on_random_micro_corpora():
    rng = np.random.default_rng(23)
    for _ in range(20):
        task = random_micro_task(rng)
        for numerator in ("paper", "corpus"):
            for log_base in ("e", "2", "10"):
                expected = oracles.dense_weights(task, numerator, log_base)
                config = FeatureConfig(idf_numerator=numerator, log_base=log_base)
                index = build_index(task)
                for element in index.document_ids + index.entity_ids:
                    got = _tokens_of(index, vectorize(element, index, config))
                    assert got.keys() == expected[element].keys()
                    for token, w in expected[element].items():
                        assert got[token] == pytest.approx(w, abs=1e-12)


# ---------------------------------------------------------------------------
# L1 normalization


def test_l1_normalize_worked_example():
    assert l1_normalize({1: 1.0, 2: 3.0}) == {1: 0.25, 2: 0.75}


def test_l1_normalize_degenerate_inputs():
    assert l1_normalize({}) == {}
    assert l1_normalize({1: 0.0, 2: 0.0}) == {}


def test_l1_normalize_properties():
    rng = np.random.default_rng(17)
    for _ in range(50):
        size = int(rng.integers(1, 8))
        vec = {int(f): float(w) for f, w in enumerate(rng.uniform(0.01, 5.0, size=size))}
        unit = l1_normalize(vec)
        assert sum(abs(w) for w in unit.values()) == pytest.approx(1.0, abs=1e-12)
        scaled = l1_normalize({f: 7.5 * w for f, w in vec.items()})
        for f in vec:
            assert scaled[f] == pytest.approx(unit[f], abs=1e-12)


# ---------------------------------------------------------------------------
# noise profiles


def test_union_noise_worked_example():
    task = build_task({"e1": "a b", "e2": "b c"}, {"d1": "q"})
    index = build_index(task)
    profile = union_noise(index)
    weights = _tokens_of(index, profile.vector)
    assert weights == {"a": pytest.approx(1 / 3), "b": pytest.approx(1 / 3), "c": pytest.approx(1 / 3)}
    assert profile.kind == "union"


def test_union_noise_without_entities_is_empty():
    task = build_task({}, {"d1": "a b"})
    index = build_index(task)
    assert union_noise(index).vector == {}


def test_intersection_noise_exists_worked_example():
    # F_e1 = {a,b}, F_e2 = {c}, F_d1 = {b,c}: b is shared by e1 and d1,
    # c by e2 and d1, a by nobody.
    task = build_task({"e1": "a b", "e2": "c"}, {"d1": "b c"})
    index = build_index(task)
    profile = intersection_noise(index, "exists")
    assert _tokens_of(index, profile.vector) == {"b": pytest.approx(0.5), "c": pytest.approx(0.5)}


def test_intersection_noise_forall_is_usually_empty():
    task = build_task({"e1": "a b", "e2": "c"}, {"d1": "b c"})
    index = build_index(task)
    assert intersection_noise(index, "forall").vector == {}


def test_intersection_noise_forall_vacuous_case():
    # One entity and no documents: no (entity, other element) pair exists.
    task = build_task({"e1": "a b"}, {})
    index = build_index(task)
    assert intersection_noise(index, "forall").vector == {}
    assert intersection_noise(index, "exists").vector == {}


def test_intersection_noise_forall_nonempty_when_all_pairs_share():
    task = build_task({"e1": "a b", "e2": "a c"}, {"d1": "a d"})
    index = build_index(task)
    profile = intersection_noise(index, "forall")
    assert _tokens_of(index, profile.vector) == {"a": pytest.approx(1.0)}


def test_intersection_noise_rejects_unknown_semantics():
    task = build_task({"e1": "a"}, {"d1": "b"})
    with pytest.raises(ConfigError):
        intersection_noise(build_index(task), "sometimes")


def test_noise_feature_sets_match_pair_enumeration_oracle():
    rng = np.random.default_rng(41)
    for _ in range(40):
        task = random_micro_task(rng)
        index = build_index(task)
        got_union = {index.tokens[f] for f in union_noise(index).features}
        assert got_union == oracles.union_features(task)
        got_exists = {index.tokens[f] for f in intersection_noise(index, "exists").features}
        assert got_exists == oracles.exists_intersection_features(task)
        got_forall = {index.tokens[f] for f in intersection_noise(index, "forall").features}
        assert got_forall == oracles.forall_intersection_features(task)


def test_noise_vectors_are_uniform_and_sum_to_one():
    rng = np.random.default_rng(43)
    for _ in range(20):
        task = random_micro_task(rng)
        index = build_index(task)
        for profile in (union_noise(index), intersection_noise(index, "exists")):
            if not profile.vector:
                continue
            values = set(profile.vector.values())
            assert len(values) == 1
            assert sum(profile.vector.values()) == pytest.approx(1.0, abs=1e-12)
            assert list(profile.vector) == sorted(profile.vector)


def test_build_noise_profile_dispatch():
    task = build_task({"e1": "a b", "e2": "b c"}, {"d1": "b"})
    index = build_index(task)
    assert build_noise_profile(index, FeatureConfig(noise="none")) is None
    assert build_noise_profile(index, FeatureConfig(noise="union")).kind == "union"
    profile = build_noise_profile(index, FeatureConfig(noise="intersection"))
    assert profile.kind == "intersection"
