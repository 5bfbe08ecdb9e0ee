"""The turn loop: recognize a sketch's sub-cluster, match the nearest
cluster in another category, contribute an exemplar sketch from it.

All matching arithmetic is nearest-centroid under Euclidean distance.
Ties resolve to the lexicographically smallest (category, local_index)
so results are reproducible regardless of how a model was assembled.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import cdist

from .clustering import Cluster
from .embedding import EmbedderFingerprint, EmbeddingMatrix, ReferenceEmbedder
from .errors import (
    DimensionError,
    EmptyModel,
    InvalidStrokes,
    MissingSketch,
    NoOtherCategory,
    UnknownCluster,
    ValidationError,
)
from .ingest import DEFAULT_RDP_EPSILON, Sketch, normalize_sketch, rasterize, simplify_sketch

POLICIES = ("random", "medoid")


@dataclass
class ClusterModel:
    """All clusters across all categories, bound to the embedding that
    produced them via the embedder fingerprint.

    Clusters are kept sorted by (category, local_index); the model is
    immutable after construction.
    """

    fingerprint: EmbedderFingerprint
    clusters: list[Cluster]
    per_category_k: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.clusters = sorted(self.clusters, key=lambda c: c.key)
        keys = [c.key for c in self.clusters]
        if len(set(keys)) != len(keys):
            raise ValidationError("duplicate (category, local_index) in model")
        self.categories = sorted({c.category for c in self.clusters})
        if not self.per_category_k:
            self.per_category_k = {
                cat: sum(1 for c in self.clusters if c.category == cat) for cat in self.categories
            }
        if self.clusters:
            self._matrix = np.vstack([c.centroid for c in self.clusters])
        else:
            self._matrix = np.empty((0, self.fingerprint.dim))
        self._by_key = {c.key: i for i, c in enumerate(self.clusters)}

    def validate(self) -> "ClusterModel":
        """Enforce the full model contract; returns self."""
        if len(self.categories) < 2:
            raise ValidationError("model needs clusters from at least 2 categories")
        for c in self.clusters:
            if c.centroid.shape != (self.fingerprint.dim,):
                raise DimensionError(
                    f"cluster {c.key} centroid dim {c.centroid.shape} != fingerprint dim {self.fingerprint.dim}"
                )
            if not np.all(np.isfinite(c.centroid)):
                raise ValidationError(f"cluster {c.key} centroid has non-finite values")
        for cat, k in self.per_category_k.items():
            if k != sum(1 for c in self.clusters if c.category == cat):
                raise ValidationError(f"per_category_k[{cat!r}] does not match cluster count")
        return self

    def cluster_at(self, key: tuple[str, int]) -> Cluster:
        try:
            return self.clusters[self._by_key[key]]
        except KeyError:
            raise UnknownCluster(f"no cluster {key} in model") from None

    def total_members(self) -> int:
        return sum(c.member_count for c in self.clusters)


@dataclass(frozen=True)
class Recognition:
    cluster: tuple[str, int]
    distance: float


@dataclass(frozen=True)
class ShiftProposal:
    """A cross-category match: the nearest cluster outside the source's
    category, by centroid Euclidean distance."""

    source: tuple[str, int]
    target: tuple[str, int]
    distance: float
    exemplar_id: int | None = None


@dataclass
class TurnRecord:
    turn_index: int
    input: Sketch | None  # None when replaying bare feature vectors
    recognition: Recognition
    proposals: list[ShiftProposal]
    response: Sketch


@dataclass
class TurnOptions:
    n: int = 5
    policy: str = "random"
    seed: int = 0
    turn_index: int = 0
    rdp_epsilon: float = DEFAULT_RDP_EPSILON
    raster_side: int = 64
    restrict_category: str | None = None
    embeddings: EmbeddingMatrix | None = None


def _check_vector(v, model: ClusterModel) -> np.ndarray:
    vec = np.asarray(v, dtype=np.float64)
    if vec.shape != (model.fingerprint.dim,):
        raise DimensionError(f"vector dim {vec.shape} != model dim {model.fingerprint.dim}")
    return vec


def recognize(v, model: ClusterModel, category: str | None = None) -> Recognition:
    """Nearest cluster over the whole model (or within ``category`` when
    replaying labeled data). Ties go to the lexicographically smallest
    (category, local_index)."""
    vec = _check_vector(v, model)
    if not model.clusters:
        raise EmptyModel("model has no clusters")
    if category is None:
        candidates = range(len(model.clusters))
    else:
        candidates = [i for i, c in enumerate(model.clusters) if c.category == category]
        if not candidates:
            raise UnknownCluster(f"no clusters for category {category!r}")
    sub = model._matrix[list(candidates)]
    d2 = cdist(vec[None, :], sub, "sqeuclidean").ravel()
    best = int(np.argmin(d2))  # clusters sorted by key, so first-hit argmin is the tie rule
    idx = list(candidates)[best]
    return Recognition(cluster=model.clusters[idx].key, distance=float(np.sqrt(d2[best])))


def match_shift(source: tuple[str, int], model: ClusterModel) -> ShiftProposal:
    """Nearest cluster to ``source`` among all clusters of other
    categories."""
    proposals = top_shifts(source, model, n=1)
    return proposals[0]


def top_shifts(source: tuple[str, int], model: ClusterModel, n: int = 5) -> list[ShiftProposal]:
    """Best cross-category matches for ``source``: one candidate per
    other category (its nearest cluster), ranked by ascending centroid
    distance, ties by category label. At most min(n, other categories)
    proposals, categories pairwise distinct."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    src = model.cluster_at(source)
    others = [c for c in model.clusters if c.category != source[0]]
    if not others:
        raise NoOtherCategory(f"model has no category other than {source[0]!r}")

    dists = cdist(src.centroid[None, :], np.vstack([c.centroid for c in others])).ravel()
    best_per_category: dict[str, tuple[float, Cluster]] = {}
    for c, d in zip(others, dists):
        cur = best_per_category.get(c.category)
        if cur is None or d < cur[0]:  # strict <, so the first (lowest key) wins ties
            best_per_category[c.category] = (float(d), c)

    ranked = sorted(best_per_category.items(), key=lambda item: (item[1][0], item[0]))
    return [
        ShiftProposal(source=source, target=c.key, distance=d)
        for _, (d, c) in ranked[: min(n, len(ranked))]
    ]


def draw_seed(seed: int, turn_index: int, rank: int = 0) -> np.random.SeedSequence:
    """Seed for the exemplar draw of one proposal within one turn."""
    return np.random.SeedSequence([seed, turn_index, rank])


def contribute(
    proposal: ShiftProposal,
    model: ClusterModel,
    store,
    policy: str = "random",
    seed: int | np.random.SeedSequence = 0,
    embeddings: EmbeddingMatrix | None = None,
) -> Sketch:
    """Pick the exemplar sketch for a proposal's target cluster.

    ``random`` draws uniformly over the members with a generator seeded
    by ``seed``; ``medoid`` returns the member whose feature vector is
    nearest the target centroid (ties to the lowest sketch id). medoid
    needs member vectors: an embedding matrix, or re-embedding through
    the reference pipeline when the model was built with it.
    """
    if policy not in POLICIES:
        raise ValidationError(f"unknown policy {policy!r}")
    cluster = model.cluster_at(proposal.target)
    if policy == "random":
        rng = np.random.default_rng(seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed))
        exemplar_id = int(cluster.member_ids[rng.integers(cluster.member_count)])
    else:
        vectors = _member_vectors(cluster, model, store, embeddings)
        d2 = np.sum((vectors - cluster.centroid) ** 2, axis=1)
        ties = cluster.member_ids[d2 == d2.min()]
        exemplar_id = int(ties.min())
    return store.get(exemplar_id)


def _member_vectors(
    cluster: Cluster, model: ClusterModel, store, embeddings: EmbeddingMatrix | None
) -> np.ndarray:
    if embeddings is not None:
        idx = embeddings.index()
        try:
            rows = [embeddings.rows[idx[int(i)]] for i in cluster.member_ids]
        except KeyError as exc:
            raise MissingSketch(f"member {exc.args[0]} missing from embedding matrix") from None
        return np.vstack(rows)
    if model.fingerprint != ReferenceEmbedder().fingerprint():
        raise ValidationError(
            "medoid selection needs an embedding matrix for models built from external features"
        )
    return np.vstack([embed_strokes(store.get(int(i)).strokes) for i in cluster.member_ids])


def embed_strokes(
    strokes: list[np.ndarray],
    epsilon: float = DEFAULT_RDP_EPSILON,
    side: int = 64,
) -> np.ndarray:
    """The query pipeline: simplify, normalize, rasterize, embed."""
    if not strokes or any(len(s) == 0 for s in strokes):
        raise InvalidStrokes("need at least one non-empty stroke")
    sketch = Sketch(id=0, strokes=[np.asarray(s, dtype=np.int32) for s in strokes])
    sketch = normalize_sketch(simplify_sketch(sketch, epsilon))
    return ReferenceEmbedder().embed(rasterize(sketch, side))


def respond_vector(
    v,
    model: ClusterModel,
    store,
    options: TurnOptions,
    input_sketch: Sketch | None = None,
) -> TurnRecord:
    """Recognize a feature vector, rank cross-category proposals, attach
    an exemplar to each, and fetch the response sketch (the exemplar of
    the best proposal)."""
    recognition = recognize(v, model, category=options.restrict_category)
    proposals = top_shifts(recognition.cluster, model, options.n)
    resolved = []
    for rank, prop in enumerate(proposals):
        exemplar = contribute(
            prop,
            model,
            store,
            policy=options.policy,
            seed=draw_seed(options.seed, options.turn_index, rank),
            embeddings=options.embeddings,
        )
        resolved.append(replace(prop, exemplar_id=exemplar.id))
    response = store.get(resolved[0].exemplar_id)
    return TurnRecord(
        turn_index=options.turn_index,
        input=input_sketch,
        recognition=recognition,
        proposals=resolved,
        response=response,
    )


def respond_turn(
    strokes: list[np.ndarray],
    model: ClusterModel,
    store,
    options: TurnOptions | None = None,
) -> TurnRecord:
    """One full turn from raw strokes.

    Pipeline: simplify, normalize, rasterize, embed, recognize, rank
    proposals, contribute. Only models built with the reference
    embedder can embed raw strokes; replay feature vectors directly via
    :func:`respond_vector` for external-feature models.
    """
    options = options or TurnOptions()
    if model.fingerprint != ReferenceEmbedder().fingerprint():
        raise ValidationError("model was built from external features; respond with vectors instead")
    v = embed_strokes(strokes, epsilon=options.rdp_epsilon, side=options.raster_side)
    input_sketch = Sketch(id=0, strokes=[np.asarray(s, dtype=np.int32) for s in strokes])
    return respond_vector(v, model, store, options, input_sketch=input_sketch)
