"""Corpus-wide feature index, tf-idf weighting, and noise-entity profiles.

The indexed corpus C for a task is its documents followed by its entity
profiles.  The artificial noise entity is an extra class built on top of
the index; it contributes no term statistics and is excluded from document
frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .corpus import NOISE_LABEL, Task, term_frequencies

__all__ = [
    "FeatureVector",
    "ConfigError",
    "FeatureConfig",
    "FeatureIndex",
    "NoiseProfile",
    "build_index",
    "tfidf",
    "vectorize",
    "l1_normalize",
    "union_noise",
    "intersection_noise",
    "build_noise_profile",
]

# Sparse vector over integer feature ids; exact zeros are never stored.
FeatureVector = dict[int, float]

IDF_NUMERATORS = ("corpus", "paper")
LOG_BASES = ("e", "2", "10")
NOISE_MODES = ("none", "union", "intersection")
INTERSECTION_SEMANTICS = ("exists", "forall")

# Divisor applied to natural logs to change base.
_LOG_DIVISOR = {"e": 1.0, "2": math.log(2.0), "10": math.log(10.0)}


class ConfigError(ValueError):
    """A configuration value is outside its legal domain."""


def _check(value: str, allowed: tuple[str, ...], key: str) -> None:
    if value not in allowed:
        raise ConfigError(f"{key} must be one of {allowed}, got {value!r}")


@dataclass(frozen=True)
class FeatureConfig:
    """Weighting and noise-profile options.

    ``idf_numerator`` selects the numerator inside the idf log: ``corpus``
    uses the number of indexed elements |C|, ``paper`` uses the element's own
    distinct-feature count |F_c| (an element-local variant; it can produce
    zero or negative weights).  ``log_base`` is one of ``e``, ``2``, ``10``.
    ``noise`` picks the artificial noise profile (``none``, ``union``,
    ``intersection``) and ``intersection_semantics`` chooses between the
    ``exists`` reading (feature shared by an entity and at least one other
    element) and the strict ``forall`` reading (feature shared by every
    entity/element pair), which is empty on all but degenerate corpora.
    """

    idf_numerator: str = "corpus"
    log_base: str = "e"
    noise: str = "none"
    intersection_semantics: str = "exists"

    def __post_init__(self) -> None:
        _check(self.idf_numerator, IDF_NUMERATORS, "idf_numerator")
        _check(self.log_base, LOG_BASES, "log_base")
        _check(self.noise, NOISE_MODES, "noise")
        _check(self.intersection_semantics, INTERSECTION_SEMANTICS, "intersection_semantics")


@dataclass
class FeatureIndex:
    """Term statistics for one task's corpus C = documents + entities.

    ``term_counts`` maps element id -> feature id -> occurrence count and is
    defined for every element except the noise placeholder, which closes the
    element list.  ``df`` counts, per feature, the elements of C containing
    it at least once.
    """

    tokens: list[str]
    ids: dict[str, int]
    df: list[int]
    document_ids: list[str]
    entity_ids: list[str]
    term_counts: dict[str, dict[int, int]]
    max_counts: dict[str, int]
    token_totals: dict[str, int]

    @property
    def elements(self) -> list[str]:
        return self.document_ids + self.entity_ids + [NOISE_LABEL]

    @property
    def corpus_size(self) -> int:
        """|C|: elements carrying term statistics (noise excluded)."""
        return len(self.document_ids) + len(self.entity_ids)

    @property
    def feature_count(self) -> int:
        return len(self.tokens)

    def feature_id(self, token: str) -> int:
        try:
            return self.ids[token]
        except KeyError:
            raise KeyError(f"unknown feature {token!r}") from None

    def counts_of(self, element_id: str) -> dict[int, int]:
        if element_id == NOISE_LABEL:
            raise KeyError("the noise entity carries no term statistics")
        try:
            return self.term_counts[element_id]
        except KeyError:
            raise KeyError(f"unknown element {element_id!r}") from None


def build_index(task: Task) -> FeatureIndex:
    """Index every document and entity profile of ``task``.

    Feature ids are assigned in first-occurrence order, scanning documents
    in task order and then entities in task order, so indexing is
    deterministic.
    """
    tokens: list[str] = []
    ids: dict[str, int] = {}
    df: list[int] = []
    term_counts: dict[str, dict[int, int]] = {}
    max_counts: dict[str, int] = {}
    token_totals: dict[str, int] = {}

    members = [(d.id, d.tokens) for d in task.documents]
    members += [(e.id, e.tokens) for e in task.entities]
    for element_id, element_tokens in members:
        counts: dict[int, int] = {}
        for token, n in term_frequencies(element_tokens).items():
            fid = ids.get(token)
            if fid is None:
                fid = len(tokens)
                ids[token] = fid
                tokens.append(token)
                df.append(0)
            counts[fid] = n
            df[fid] += 1
        term_counts[element_id] = counts
        max_counts[element_id] = max(counts.values(), default=0)
        token_totals[element_id] = len(element_tokens)

    return FeatureIndex(
        tokens=tokens,
        ids=ids,
        df=df,
        document_ids=[d.id for d in task.documents],
        entity_ids=[e.id for e in task.entities],
        term_counts=term_counts,
        max_counts=max_counts,
        token_totals=token_totals,
    )


def _idf(index: FeatureIndex, fid: int, distinct_features: int, config: FeatureConfig) -> float:
    numerator = distinct_features if config.idf_numerator == "paper" else index.corpus_size
    return math.log(numerator / index.df[fid]) / _LOG_DIVISOR[config.log_base]


def tfidf(
    feature: int | str,
    element_id: str,
    index: FeatureIndex,
    config: FeatureConfig = FeatureConfig(),
) -> float:
    """Augmented-tf times idf for one feature of one element.

    The term factor divides the feature's count by the element's maximum
    count; the idf factor is ``log(numerator / df)`` per the config.  A
    feature absent from the element scores 0.  Unknown features or elements
    raise ``KeyError``.
    """
    fid = index.feature_id(feature) if isinstance(feature, str) else feature
    if not 0 <= fid < index.feature_count:
        raise KeyError(f"feature id {fid} out of range")
    counts = index.counts_of(element_id)
    n = counts.get(fid)
    if not n:
        return 0.0
    return (n / index.max_counts[element_id]) * _idf(index, fid, len(counts), config)


def vectorize(
    element_id: str,
    index: FeatureIndex,
    config: FeatureConfig = FeatureConfig(),
) -> FeatureVector:
    """Sparse tf-idf vector of one element; exact zeros are omitted."""
    counts = index.counts_of(element_id)
    max_count = index.max_counts[element_id]
    out: FeatureVector = {}
    for fid, n in counts.items():
        w = (n / max_count) * _idf(index, fid, len(counts), config)
        if w != 0.0:
            out[fid] = w
    return out


def l1_normalize(vector: FeatureVector) -> FeatureVector:
    """Scale so absolute values sum to 1; empty or all-zero input gives {}."""
    total = sum(abs(w) for w in vector.values())
    if total == 0.0:
        return {}
    return {f: w / total for f, w in vector.items() if w != 0.0}


@dataclass(frozen=True)
class NoiseProfile:
    """Artificial entity absorbing documents that match nobody.

    ``vector`` spreads weight uniformly over the selected feature set, so
    non-empty profiles sum to 1.  An empty feature set gives an empty
    vector, which is legal: the noise class then scores 0 everywhere.
    """

    kind: str
    vector: FeatureVector

    @property
    def features(self) -> set[int]:
        return set(self.vector)


def _uniform(feature_ids: Iterable[int], kind: str) -> NoiseProfile:
    ordered = sorted(set(feature_ids))
    weight = 1.0 / len(ordered) if ordered else 0.0
    return NoiseProfile(kind, {fid: weight for fid in ordered})


def union_noise(index: FeatureIndex) -> NoiseProfile:
    """Noise profile over the union of all entity-profile features."""
    feats: set[int] = set()
    for eid in index.entity_ids:
        feats.update(index.term_counts[eid])
    return _uniform(feats, "union")


def intersection_noise(index: FeatureIndex, semantics: str = "exists") -> NoiseProfile:
    """Noise profile over pairwise entity/element feature intersections.

    ``exists`` collects every feature shared by at least one pair (e, c)
    with e an entity, c any corpus element, e != c; that is exactly the
    features occurring in some entity profile with df >= 2, which biases
    the profile toward frequent features.  ``forall`` keeps only features
    shared by every such pair; with no valid pair the profile is empty.
    """
    _check(semantics, INTERSECTION_SEMANTICS, "intersection_semantics")
    entity_ids = index.entity_ids
    element_ids = index.document_ids + index.entity_ids
    if semantics == "exists":
        feats = {
            fid
            for eid in entity_ids
            for fid in index.term_counts[eid]
            if index.df[fid] >= 2
        }
        return _uniform(feats, "intersection")

    common: set[int] | None = None
    for eid in entity_ids:
        entity_feats = set(index.term_counts[eid])
        for cid in element_ids:
            if cid == eid:
                continue
            shared = entity_feats & set(index.term_counts[cid])
            common = shared if common is None else common & shared
            if not common:
                return _uniform((), "intersection")
    return _uniform(common or (), "intersection")


def build_noise_profile(index: FeatureIndex, config: FeatureConfig) -> NoiseProfile | None:
    """Noise profile selected by ``config.noise``; None when disabled."""
    if config.noise == "none":
        return None
    if config.noise == "union":
        return union_noise(index)
    return intersection_noise(index, config.intersection_semantics)
