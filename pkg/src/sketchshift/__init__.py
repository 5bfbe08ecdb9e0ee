"""sketchshift: co-creative sketching engine.

Recognizes a drawn sketch by its nearest sub-cluster in feature space
and answers with the most structurally similar sub-cluster from a
different category, plus an exemplar sketch from it.
"""

from .clustering import (
    Cluster,
    KMeansConfig,
    KMeansResult,
    assign_nearest,
    elbow_select_k,
    kmeans_fit,
    kmeans_pp_init,
)
from .embedding import (
    EmbedderFingerprint,
    EmbeddingMatrix,
    ReferenceEmbedder,
    embed_reference,
    fingerprint,
    load_embeddings,
    write_embeddings,
)
from .engine import (
    ClusterModel,
    Recognition,
    ShiftProposal,
    TurnOptions,
    TurnRecord,
    contribute,
    match_shift,
    recognize,
    respond_turn,
    respond_vector,
    top_shifts,
)
from .errors import (
    DimensionError,
    DuplicateId,
    EmptyModel,
    EncodeError,
    FormatError,
    InsufficientPoints,
    InvalidStrokes,
    MissingSketch,
    NoOtherCategory,
    ParseError,
    SketchShiftError,
    UnknownCluster,
    ValidationError,
)
from .ingest import (
    Sketch,
    encode_binary_record,
    normalize_sketch,
    parse_binary_record,
    parse_ndjson_line,
    rasterize,
    simplify_rdp,
    simplify_sketch,
)
from .pipeline import FitResult, PipelineConfig, embed_corpus, fit_model, replay_turns
from .projection import pca_2d
from .store import SketchStore, build_store, load_model, save_model

__version__ = "0.1.0"
