"""Membership scoring models and the document-to-entity assignment step.

Every model scores a document against each real entity plus, when enabled,
the artificial noise entity, and assigns the document to the argmax.  Ties
go to the earliest class in task order, with the noise entity ranked last,
so a real entity always wins an exact tie.

Models:

* ``cosine``: cosine similarity between tf-idf vectors.
* ``score``: sparse dot product of tf-idf vectors.
* ``score_smoothed``: dot product against entity profiles that were pulled
  toward similar documents (the noise profile is never smoothed).
* ``nb_bernoulli_laplace``: Bernoulli Naive Bayes over distinct document
  features with additive smoothing; tf-idf weights act as soft counts.
* ``nb_multinomial_jm``: multinomial Naive Bayes over token frequencies
  with Jelinek-Mercer interpolation against the corpus-wide background
  distribution.  The multinomial coefficient is omitted: it is constant
  per document and cannot change the argmax.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import NOISE_LABEL, Task
from .features import (
    ConfigError,
    FeatureConfig,
    FeatureIndex,
    FeatureVector,
    NoiseProfile,
    build_index,
    build_noise_profile,
    l1_normalize,
    vectorize,
)

__all__ = [
    "MODELS",
    "ModelConfig",
    "Assignment",
    "TaskResources",
    "ScoringContext",
    "cosine_sim",
    "dot_score",
    "smoothed_profile",
    "multinomial_log_coefficient",
    "laplace_log_priors",
    "BernoulliScorer",
    "MultinomialScorer",
    "build_context",
    "assign_from_context",
    "map_documents",
]

COSINE = "cosine"
SCORE = "score"
SCORE_SMOOTHED = "score_smoothed"
NB_BERNOULLI = "nb_bernoulli_laplace"
NB_MULTINOMIAL = "nb_multinomial_jm"
MODELS = (COSINE, SCORE, SCORE_SMOOTHED, NB_BERNOULLI, NB_MULTINOMIAL)

LAPLACE_DENOMINATORS = ("paper", "per_feature")

# Positivity floor applied before logs; only degenerate configurations
# (e.g. negative element-local idf weights) ever hit it.
PROB_FLOOR = 1e-300


@dataclass(frozen=True)
class ModelConfig:
    """One classification configuration: model choice plus its parameters."""

    model: str
    alpha: float = 0.01
    jm_lambda: float = 0.5
    laplace_denominator: str = "paper"
    features: FeatureConfig = FeatureConfig()

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if not (isinstance(self.alpha, (int, float)) and self.alpha > 0):
            raise ConfigError(f"alpha must be > 0, got {self.alpha!r}")
        if not (isinstance(self.jm_lambda, (int, float)) and 0.0 < self.jm_lambda < 1.0):
            raise ConfigError(f"lambda must lie strictly between 0 and 1, got {self.jm_lambda!r}")
        if self.laplace_denominator not in LAPLACE_DENOMINATORS:
            raise ConfigError(
                f"laplace_denominator must be one of {LAPLACE_DENOMINATORS}, got {self.laplace_denominator!r}"
            )


def dot_score(u: FeatureVector, v: FeatureVector) -> float:
    """Sparse dot product; iterates the smaller vector."""
    if len(u) > len(v):
        u, v = v, u
    return sum(w * v[f] for f, w in u.items() if f in v)


def cosine_sim(u: FeatureVector, v: FeatureVector) -> float:
    """Cosine similarity; 0.0 when either vector is empty or all-zero."""
    nu = math.sqrt(sum(w * w for w in u.values()))
    nv = math.sqrt(sum(w * w for w in v.values()))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot_score(u, v) / (nu * nv)


def smoothed_profile(entity_vector: FeatureVector, doc_vectors: Iterable[FeatureVector]) -> FeatureVector:
    """Entity profile pulled toward documents by cosine-weighted mixing.

    Starts from the L1-normalized entity vector and adds, for every
    document, its L1-normalized vector scaled by the cosine between the
    raw entity and document vectors.  Every document contributes,
    including the one later being scored.
    """
    out = dict(l1_normalize(entity_vector))
    for doc_vector in doc_vectors:
        sim = cosine_sim(entity_vector, doc_vector)
        if sim == 0.0:
            continue
        for fid, w in l1_normalize(doc_vector).items():
            out[fid] = out.get(fid, 0.0) + sim * w
    return out


def multinomial_log_coefficient(freqs: Mapping[int, int]) -> float:
    """log(|d|! / prod_f freq(f,d)!), the term the multinomial model drops."""
    total = sum(freqs.values())
    return math.lgamma(total + 1) - sum(math.lgamma(n + 1) for n in freqs.values())


class _Floor:
    """Counts probabilities clamped to the positivity floor."""

    def __init__(self) -> None:
        self.count = 0

    def log(self, p: float) -> float:
        if p <= 0.0:
            self.count += 1
            p = PROB_FLOOR
        return math.log(p)


def laplace_log_priors(
    weights: Mapping[str, FeatureVector],
    alpha: float,
    *,
    denominator: str = "paper",
    floor: _Floor | None = None,
) -> dict[str, float]:
    """Additively smoothed log priors from per-class weight masses.

    The denominator pools the weight mass of every class being scored and
    adds ``alpha`` once (``paper``) or once per class (``per_feature``).
    """
    floor = floor or _Floor()
    masses = {cid: sum(v.values()) for cid, v in weights.items()}
    extra = alpha if denominator == "paper" else alpha * len(weights)
    pool = sum(masses.values()) + extra
    return {cid: floor.log((mass + alpha) / pool) for cid, mass in masses.items()}


@dataclass
class BernoulliScorer:
    """Bernoulli Naive Bayes over the distinct features of a document."""

    classes: list[str]
    log_priors: dict[str, float]
    log_present: dict[str, dict[int, float]]
    log_absent: dict[str, float]
    floored: int = 0

    @classmethod
    def fit(
        cls,
        weights: Mapping[str, FeatureVector],
        alpha: float,
        *,
        denominator: str = "paper",
        feature_count: int = 0,
    ) -> "BernoulliScorer":
        """Estimate per-class feature probabilities from weight vectors.

        For class e with weight mass M(e), a feature with weight w gets
        probability (w + alpha) / (M(e) + alpha) in ``paper`` mode, or
        (w + alpha) / (M(e) + alpha * feature_count) in ``per_feature``
        mode.  Features outside the class use w = 0.
        """
        floor = _Floor()
        log_priors = laplace_log_priors(weights, alpha, denominator=denominator, floor=floor)
        log_present: dict[str, dict[int, float]] = {}
        log_absent: dict[str, float] = {}
        for cid, vector in weights.items():
            mass = sum(vector.values())
            denom = mass + (alpha if denominator == "paper" else alpha * feature_count)
            log_present[cid] = {fid: floor.log((w + alpha) / denom) for fid, w in vector.items()}
            log_absent[cid] = floor.log(alpha / denom)
        return cls(
            classes=list(weights),
            log_priors=log_priors,
            log_present=log_present,
            log_absent=log_absent,
            floored=floor.count,
        )

    def log_score(self, features: Iterable[int], class_id: str) -> float:
        """Log prior plus one log-likelihood term per distinct feature."""
        present = self.log_present[class_id]
        absent = self.log_absent[class_id]
        return self.log_priors[class_id] + sum(present.get(fid, absent) for fid in features)


@dataclass
class MultinomialScorer:
    """Multinomial Naive Bayes with Jelinek-Mercer smoothing.

    Per-class maximum-likelihood token distributions are interpolated with
    the corpus-wide background distribution: p = (1 - lambda) * ml +
    lambda * background.  Scoring adds freq * log(p) per document feature;
    the floor counter tracks probabilities clamped to stay positive.
    """

    classes: list[str]
    log_priors: dict[str, float]
    ml: dict[str, dict[int, float]]
    background: dict[int, float]
    jm_lambda: float
    floored: int = 0

    def log_score(self, freqs: Mapping[int, int], class_id: str) -> float:
        ml = self.ml[class_id]
        lam = self.jm_lambda
        total = self.log_priors[class_id]
        for fid, n in freqs.items():
            p = (1.0 - lam) * ml.get(fid, 0.0) + lam * self.background.get(fid, 0.0)
            if p <= 0.0:
                self.floored += 1
                p = PROB_FLOOR
            total += n * math.log(p)
        return total


@dataclass
class TaskResources:
    """Feature artifacts one task shares across model configurations.

    Everything here depends only on the weighting options (idf numerator
    and log base), never on the model or noise choice, so a configuration
    grid can reuse one instance per task.
    """

    task: Task
    index: FeatureIndex
    idf_numerator: str
    log_base: str
    doc_vectors: dict[str, FeatureVector]
    entity_vectors: dict[str, FeatureVector]
    _noise: dict[tuple[str, str], NoiseProfile | None] = field(default_factory=dict)
    _smoothed: dict[str, FeatureVector] | None = None

    @classmethod
    def from_task(cls, task: Task, config: FeatureConfig) -> "TaskResources":
        index = build_index(task)
        return cls(
            task=task,
            index=index,
            idf_numerator=config.idf_numerator,
            log_base=config.log_base,
            doc_vectors={d.id: vectorize(d.id, index, config) for d in task.documents},
            entity_vectors={e.id: vectorize(e.id, index, config) for e in task.entities},
        )

    def matches(self, config: FeatureConfig) -> bool:
        return config.idf_numerator == self.idf_numerator and config.log_base == self.log_base

    def noise_profile(self, config: FeatureConfig) -> NoiseProfile | None:
        key = (config.noise, config.intersection_semantics)
        if key not in self._noise:
            self._noise[key] = build_noise_profile(self.index, config)
        return self._noise[key]

    def smoothed_profiles(self) -> dict[str, FeatureVector]:
        if self._smoothed is None:
            docs = [self.doc_vectors[did] for did in self.index.document_ids]
            self._smoothed = {
                eid: smoothed_profile(self.entity_vectors[eid], docs)
                for eid in self.index.entity_ids
            }
        return self._smoothed


@dataclass
class ScoringContext:
    """Everything one (task, configuration) pair needs to score documents."""

    task: Task
    config: ModelConfig
    index: FeatureIndex
    class_ids: list[str]
    doc_vectors: dict[str, FeatureVector]
    profile_vectors: dict[str, FeatureVector]
    smoothed_vectors: dict[str, FeatureVector] | None = None
    bernoulli: BernoulliScorer | None = None
    multinomial: MultinomialScorer | None = None


def _background_distribution(index: FeatureIndex) -> dict[int, float]:
    """Corpus-wide relative token frequency over documents and entities."""
    totals: dict[int, int] = {}
    grand_total = 0
    for element_id in index.document_ids + index.entity_ids:
        for fid, n in index.term_counts[element_id].items():
            totals[fid] = totals.get(fid, 0) + n
        grand_total += index.token_totals[element_id]
    if grand_total == 0:
        return {}
    return {fid: n / grand_total for fid, n in totals.items()}


def build_context(task: Task, config: ModelConfig, resources: TaskResources | None = None) -> ScoringContext:
    """Assemble vectors, profiles, and estimators for one configuration."""
    if resources is None:
        resources = TaskResources.from_task(task, config.features)
    elif not resources.matches(config.features):
        raise ValueError("resources were built with different weighting options")

    index = resources.index
    noise = resources.noise_profile(config.features)
    class_ids = list(index.entity_ids)
    profiles = dict(resources.entity_vectors)
    if noise is not None:
        class_ids.append(NOISE_LABEL)
        profiles[NOISE_LABEL] = dict(noise.vector)

    ctx = ScoringContext(
        task=task,
        config=config,
        index=index,
        class_ids=class_ids,
        doc_vectors=resources.doc_vectors,
        profile_vectors=profiles,
    )

    if config.model == SCORE_SMOOTHED:
        smoothed = dict(resources.smoothed_profiles())
        if noise is not None:
            smoothed[NOISE_LABEL] = profiles[NOISE_LABEL]
        ctx.smoothed_vectors = smoothed
    elif config.model == NB_BERNOULLI:
        ctx.bernoulli = BernoulliScorer.fit(
            {cid: profiles[cid] for cid in class_ids},
            config.alpha,
            denominator=config.laplace_denominator,
            feature_count=index.feature_count,
        )
    elif config.model == NB_MULTINOMIAL:
        floor = _Floor()
        log_priors = laplace_log_priors(
            {cid: profiles[cid] for cid in class_ids},
            config.alpha,
            denominator=config.laplace_denominator,
            floor=floor,
        )
        ml: dict[str, dict[int, float]] = {}
        for eid in index.entity_ids:
            total = index.token_totals[eid]
            counts = index.term_counts[eid]
            ml[eid] = {fid: n / total for fid, n in counts.items()} if total else {}
        if noise is not None:
            # The noise profile is already a uniform distribution over its
            # feature set, so it doubles as the ML estimate.
            ml[NOISE_LABEL] = dict(noise.vector)
        ctx.multinomial = MultinomialScorer(
            classes=class_ids,
            log_priors=log_priors,
            ml=ml,
            background=_background_distribution(index),
            jm_lambda=config.jm_lambda,
            floored=floor.count,
        )
    return ctx


@dataclass
class Assignment:
    """Mapping of every document to a class, with the full score matrix."""

    mapping: dict[str, str]
    scores: dict[str, dict[str, float]]
    floored: int = 0

    def to_tsv(self) -> str:
        """doc_id, assigned class, winning score; one row per document."""
        lines = ["doc_id\tassigned\tscore"]
        for doc_id, assigned in self.mapping.items():
            lines.append(f"{doc_id}\t{assigned}\t{self.scores[doc_id][assigned]:.10g}")
        return "\n".join(lines) + "\n"

    def scores_dict(self) -> dict[str, dict[str, float]]:
        return {doc_id: dict(row) for doc_id, row in self.scores.items()}


def _score_document(ctx: ScoringContext, doc_id: str) -> dict[str, float]:
    model = ctx.config.model
    if model in (COSINE, SCORE, SCORE_SMOOTHED):
        doc_vector = ctx.doc_vectors[doc_id]
        if model == COSINE:
            return {cid: cosine_sim(doc_vector, ctx.profile_vectors[cid]) for cid in ctx.class_ids}
        profiles = ctx.smoothed_vectors if model == SCORE_SMOOTHED else ctx.profile_vectors
        return {cid: dot_score(doc_vector, profiles[cid]) for cid in ctx.class_ids}
    counts = ctx.index.term_counts[doc_id]
    if model == NB_BERNOULLI:
        return {cid: ctx.bernoulli.log_score(counts.keys(), cid) for cid in ctx.class_ids}
    return {cid: ctx.multinomial.log_score(counts, cid) for cid in ctx.class_ids}


def assign_from_context(ctx: ScoringContext) -> Assignment:
    """Score every document and map it to the argmax class.

    Classes are visited in task order with noise last, and only a strictly
    greater score replaces the current best, which implements the tie rule.
    """
    if not ctx.class_ids:
        raise ValueError(f"task {ctx.task.name!r} has no entities and noise is disabled; nothing to assign to")
    mapping: dict[str, str] = {}
    scores: dict[str, dict[str, float]] = {}
    for doc in ctx.task.documents:
        row = _score_document(ctx, doc.id)
        best = ctx.class_ids[0]
        for cid in ctx.class_ids[1:]:
            if row[cid] > row[best]:
                best = cid
        mapping[doc.id] = best
        scores[doc.id] = row
    floored = 0
    if ctx.bernoulli is not None:
        floored += ctx.bernoulli.floored
    if ctx.multinomial is not None:
        floored += ctx.multinomial.floored
    return Assignment(mapping=mapping, scores=scores, floored=floored)


def map_documents(task: Task, config: ModelConfig, resources: TaskResources | None = None) -> Assignment:
    """Classify every document of ``task`` under ``config``."""
    return assign_from_context(build_context(task, config, resources))
