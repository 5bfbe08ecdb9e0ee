"""Offline pipeline: load dataset files, embed, cluster per category
with elbow-selected k, and assemble the serving model.

Per-category work is independent and runs on a thread pool; results
are assembled in sorted category order, so the output is identical for
any worker count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .clustering import Cluster, KMeansConfig, elbow_select_k, kmeans_fit
from .embedding import (
    EmbeddingMatrix,
    ReferenceEmbedder,
    digest64,
    fingerprint,
    load_embeddings,
)
from .engine import ClusterModel, TurnOptions, TurnRecord, respond_turn, respond_vector
from .errors import ValidationError
from .ingest import (
    DEFAULT_RDP_EPSILON,
    Sketch,
    iter_dataset_file,
    normalize_sketch,
    rasterize,
    simplify_sketch,
)
from .store import SketchStore, build_store


@dataclass
class PipelineConfig:
    """Settings for one fit run."""

    data_paths: list[Path]
    categories: list[str] | None = None
    cap: int = 1000                     # per-category sample cap
    raster_side: int = 64
    rdp_epsilon: float = DEFAULT_RDP_EPSILON
    k_min: int = 2
    k_max: int = 10
    seed: int = 0
    k_overrides: dict[str, int] = field(default_factory=dict)  # skip the elbow for these
    embeddings_path: Path | None = None  # external SKEM features
    normalize_embeddings: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.cap < self.k_max:
            raise ValidationError(f"per-category cap {self.cap} must be >= k_max {self.k_max}")
        if self.raster_side < 8:
            raise ValidationError("raster side must be >= 8")
        if self.k_min < 1 or self.k_max < self.k_min + 1:
            raise ValidationError("need k_min >= 1 and k_max >= k_min + 1")
        for cat, k in self.k_overrides.items():
            if k < 1:
                raise ValidationError(f"k override for {cat!r} must be >= 1")


@dataclass
class FitResult:
    model: ClusterModel
    store: SketchStore
    matrix: EmbeddingMatrix
    curves: dict[str, list[tuple[int, float]]]


def category_seed(seed: int, category: str) -> int:
    """Stable per-category seed, independent of category order."""
    return seed ^ digest64(category.encode("utf-8"))


def load_sketches(
    paths: list[Path],
    categories: list[str] | None = None,
    cap: int | None = None,
) -> list[Sketch]:
    """Read dataset files in path order, keeping at most ``cap``
    sketches per category (first occurrences win)."""
    wanted = set(categories) if categories else None
    counts: dict[str, int] = {}
    out = []
    for path in paths:
        for sk in iter_dataset_file(path):
            cat = sk.category
            if cat is None or (wanted is not None and cat not in wanted):
                continue
            if cap is not None and counts.get(cat, 0) >= cap:
                continue
            counts[cat] = counts.get(cat, 0) + 1
            out.append(sk)
    return out


def embed_sketch(sketch: Sketch, epsilon: float, side: int, embedder: ReferenceEmbedder) -> np.ndarray:
    prepared = normalize_sketch(simplify_sketch(sketch, epsilon))
    return embedder.embed(rasterize(prepared, side))


def embed_corpus(sketches: list[Sketch], epsilon: float, side: int) -> EmbeddingMatrix:
    """Reference-embed every sketch; rows align with input order."""
    embedder = ReferenceEmbedder()
    rows = np.empty((len(sketches), embedder.dim))
    for i, sk in enumerate(sketches):
        rows[i] = embed_sketch(sk, epsilon, side, embedder)
    ids = np.array([sk.id for sk in sketches], dtype=np.uint64)
    return EmbeddingMatrix(dim=embedder.dim, ids=ids, rows=rows)


def _fit_category(
    category: str,
    ids: np.ndarray,
    points: np.ndarray,
    config: PipelineConfig,
) -> tuple[int, list[Cluster], list[tuple[int, float]]]:
    seed = category_seed(config.seed, category)
    if category in config.k_overrides:
        k = config.k_overrides[category]
        curve = []
    else:
        k, curve = elbow_select_k(points, config.k_min, config.k_max, seed)
    result = kmeans_fit(points, KMeansConfig(k=k, seed=seed ^ k))
    clusters = []
    local = 0
    for j in range(k):
        members = ids[result.assignments == j]
        if len(members) == 0:
            continue  # possible only with pathological duplicate data
        clusters.append(
            Cluster(
                category=category,
                local_index=local,
                centroid=result.centroids[j].copy(),
                member_ids=members,
            )
        )
        local += 1
    return len(clusters), clusters, curve


def fit_model(config: PipelineConfig) -> FitResult:
    """Full fit: ingest, embed (reference or external SKEM), per-category
    elbow + k-means. Deterministic for a fixed config and inputs."""
    sketches = load_sketches(config.data_paths, config.categories, config.cap)
    if not sketches:
        raise ValidationError("no sketches matched the requested categories")
    store = build_store(sketches)

    if config.embeddings_path is not None:
        matrix = load_embeddings(config.embeddings_path, normalize=config.normalize_embeddings)
        fp = fingerprint(matrix)
        index = matrix.index()
        missing = [sk.id for sk in sketches if sk.id not in index]
        if missing:
            raise ValidationError(
                f"{len(missing)} sketches have no row in the embedding matrix (first: {missing[0]})"
            )
    else:
        matrix = embed_corpus(sketches, config.rdp_epsilon, config.raster_side)
        fp = fingerprint(ReferenceEmbedder())
        index = matrix.index()

    categories = store.categories()
    jobs = []
    for cat in categories:
        cat_ids = np.array(store.by_category[cat], dtype=np.uint64)
        points = matrix.rows[[index[int(i)] for i in cat_ids]]
        jobs.append((cat, cat_ids, points))

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            fitted = list(pool.map(lambda j: _fit_category(j[0], j[1], j[2], config), jobs))
    else:
        fitted = [_fit_category(cat, ids, pts, config) for cat, ids, pts in jobs]

    clusters = []
    per_category_k = {}
    curves = {}
    for (cat, _, _), (k, cat_clusters, curve) in zip(jobs, fitted):
        clusters.extend(cat_clusters)
        per_category_k[cat] = k
        curves[cat] = curve

    model = ClusterModel(fingerprint=fp, clusters=clusters, per_category_k=per_category_k).validate()
    return FitResult(model=model, store=store, matrix=matrix, curves=curves)


def replay_turns(
    model: ClusterModel,
    store: SketchStore,
    per_category: int,
    seed: int = 0,
    n: int = 1,
    matrix: EmbeddingMatrix | None = None,
    restrict_category: bool = False,
) -> list[TurnRecord]:
    """Replay stored sketches as user input, ``per_category`` from each
    category (seeded sample without replacement).

    Reference-embedder models re-embed the strokes; external-feature
    models look the query vector up in ``matrix``.
    """
    is_reference = model.fingerprint == ReferenceEmbedder().fingerprint()
    if not is_reference and matrix is None:
        raise ValidationError("external-feature model: replay needs the embedding matrix")

    records = []
    turn = 0
    for cat in store.categories():
        ids = store.by_category[cat]
        rng = np.random.default_rng(np.random.SeedSequence([seed, digest64(cat.encode())]))
        take = min(per_category, len(ids))
        picked = rng.choice(len(ids), size=take, replace=False)
        for pos in picked:
            sk = store.get(ids[int(pos)])
            options = TurnOptions(
                n=n,
                seed=seed,
                turn_index=turn,
                embeddings=matrix,
                restrict_category=cat if restrict_category else None,
            )
            if is_reference:
                record = respond_turn(sk.strokes, model, store, options)
                record.input = sk
            else:
                record = respond_vector(matrix.row_for(sk.id), model, store, options, input_sketch=sk)
            records.append(record)
            turn += 1
    return records
