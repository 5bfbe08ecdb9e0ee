"""Feature extraction and the pluggable embedder boundary.

The built-in reference embedder turns a 64x64 raster into a 512-dim
gradient-orientation histogram. Externally computed feature matrices
(any fixed dimension, e.g. 4096-wide CNN activations) enter through the
SKEM file format and flow through clustering and matching unchanged.

SKEM v1 layout (little-endian)::

    magic   "SKEM" (4 bytes)
    version u32 = 1
    dim     u32
    count   u64
    ids     count x u64
    rows    count x dim float32, row-major

Floats are stored as float32 and widened to float64 in memory.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, FormatError, ValidationError

REFERENCE_SIDE = 64
REFERENCE_CELLS = 8
REFERENCE_BINS = 8
REFERENCE_CELL_PX = REFERENCE_SIDE // REFERENCE_CELLS
REFERENCE_DIM = REFERENCE_CELLS * REFERENCE_CELLS * REFERENCE_BINS

SKEM_MAGIC = b"SKEM"
SKEM_VERSION = 1
_HEADER = struct.Struct("<4sIIQ")


@dataclass(frozen=True)
class EmbedderFingerprint:
    """Identity of a feature extractor; equal fingerprints guarantee
    identical embeddings for identical rasters."""

    name: str
    version: int
    dim: int
    params_digest: int


@dataclass
class EmbeddingMatrix:
    """Feature vectors for a set of sketches, aligned by row with ids."""

    dim: int
    ids: np.ndarray      # (n,) uint64
    rows: np.ndarray     # (n, dim) float64

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.uint64)
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2 or self.rows.shape[1] != self.dim:
            raise ValidationError(f"rows must be (n, {self.dim}), got {self.rows.shape}")
        if len(self.ids) != len(self.rows):
            raise ValidationError("ids and rows lengths differ")
        if len(np.unique(self.ids)) != len(self.ids):
            raise ValidationError("duplicate sketch ids in embedding matrix")
        if not np.all(np.isfinite(self.rows)):
            raise ValidationError("embedding matrix contains non-finite values")

    def __len__(self) -> int:
        return len(self.ids)

    def row_for(self, sketch_id: int) -> np.ndarray:
        hits = np.nonzero(self.ids == np.uint64(sketch_id))[0]
        if len(hits) == 0:
            raise KeyError(sketch_id)
        return self.rows[hits[0]]

    def index(self) -> dict[int, int]:
        return {int(i): pos for pos, i in enumerate(self.ids)}


def digest64(payload: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


class ReferenceEmbedder:
    """Deterministic gradient-orientation histogram over a 64x64 raster.

    Central-difference gradients at interior pixels are binned by
    unsigned orientation (8 bins over [0, pi)) into an 8x8 grid of
    spatial cells, weighted by gradient magnitude, flattened cell-major
    and L2-normalized unless the norm is zero. Output dim is 512.
    """

    name = "refgrad"
    version = 1
    side = REFERENCE_SIDE
    dim = REFERENCE_DIM

    def embed(self, raster: np.ndarray) -> np.ndarray:
        img = np.asarray(raster, dtype=np.float64)
        if img.shape != (self.side, self.side):
            raise DimensionError(f"reference embedder expects {self.side}x{self.side} rasters, got {img.shape}")

        gx = 0.5 * (img[1:-1, 2:] - img[1:-1, :-2])
        gy = 0.5 * (img[2:, 1:-1] - img[:-2, 1:-1])
        mag = np.hypot(gx, gy)
        theta = np.arctan2(gy, gx)
        theta = np.where(theta < 0, theta + np.pi, theta)
        theta = np.where(theta >= np.pi, theta - np.pi, theta)

        obin = np.minimum((theta / (np.pi / REFERENCE_BINS)).astype(np.int64), REFERENCE_BINS - 1)
        ys, xs = np.indices(mag.shape)
        cell_y = (ys + 1) // REFERENCE_CELL_PX
        cell_x = (xs + 1) // REFERENCE_CELL_PX
        flat = (cell_y * REFERENCE_CELLS + cell_x) * REFERENCE_BINS + obin

        hist = np.bincount(flat.ravel(), weights=mag.ravel(), minlength=self.dim)
        norm = float(np.linalg.norm(hist))
        if norm > 0:
            hist /= norm
        return hist

    def fingerprint(self) -> EmbedderFingerprint:
        params = f"refgrad|side={self.side}|cells={REFERENCE_CELLS}|bins={REFERENCE_BINS}|central-diff|l2"
        return EmbedderFingerprint(
            name=self.name,
            version=self.version,
            dim=self.dim,
            params_digest=digest64(params.encode()),
        )


def embed_reference(raster: np.ndarray) -> np.ndarray:
    """Embed one raster with the built-in reference embedder."""
    return ReferenceEmbedder().embed(raster)


def fingerprint(embedder) -> EmbedderFingerprint:
    """Fingerprint an embedder: a ReferenceEmbedder instance or an
    EmbeddingMatrix loaded from an external file.

    External fingerprints digest the SKEM header bytes, so matrices
    differing in dim or count fingerprint differently.
    """
    if isinstance(embedder, ReferenceEmbedder):
        return embedder.fingerprint()
    if isinstance(embedder, EmbeddingMatrix):
        header = _HEADER.pack(SKEM_MAGIC, SKEM_VERSION, embedder.dim, len(embedder))
        return EmbedderFingerprint(
            name="external",
            version=SKEM_VERSION,
            dim=embedder.dim,
            params_digest=digest64(header),
        )
    raise TypeError(f"cannot fingerprint {type(embedder).__name__}")


# ---------------------------------------------------------------------------
# SKEM file i/o

def write_embeddings(matrix: EmbeddingMatrix, destination: str | Path) -> int:
    """Write the matrix in SKEM v1 layout; returns bytes written."""
    header = _HEADER.pack(SKEM_MAGIC, SKEM_VERSION, matrix.dim, len(matrix))
    ids = matrix.ids.astype("<u8").tobytes()
    rows = matrix.rows.astype("<f4").tobytes()
    payload = header + ids + rows
    Path(destination).write_bytes(payload)
    return len(payload)


def load_embeddings(source: str | Path, normalize: bool = False) -> EmbeddingMatrix:
    """Strict parse of a SKEM v1 file.

    Validates magic, version, exact length, float finiteness and id
    uniqueness. ``normalize=True`` L2-normalizes each nonzero row after
    loading (off by default: external features pass through untouched).
    """
    data = Path(source).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError("truncated header", offset=len(data))
    magic, version, dim, count = _HEADER.unpack_from(data, 0)
    if magic != SKEM_MAGIC:
        raise FormatError(f"bad magic {magic!r}", offset=0)
    if version != SKEM_VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    if dim == 0:
        raise FormatError("dim must be positive", offset=8)

    ids_start = _HEADER.size
    rows_start = ids_start + 8 * count
    expected = rows_start + 4 * count * dim
    if len(data) != expected:
        raise FormatError(
            f"truncated or oversized payload: expected {expected} bytes, have {len(data)}",
            offset=min(len(data), expected),
        )

    ids = np.frombuffer(data, dtype="<u8", count=count, offset=ids_start).copy()
    rows = np.frombuffer(data, dtype="<f4", count=count * dim, offset=rows_start)
    rows = rows.reshape(count, dim).astype(np.float64)
    if not np.all(np.isfinite(rows)):
        bad = int(np.argwhere(~np.isfinite(rows))[0, 0])
        raise FormatError("non-finite value in rows", offset=rows_start + 4 * bad * dim)
    if len(np.unique(ids)) != len(ids):
        raise FormatError("duplicate ids", offset=ids_start)

    if normalize:
        norms = np.linalg.norm(rows, axis=1, keepdims=True)
        np.divide(rows, norms, out=rows, where=norms > 0)
    return EmbeddingMatrix(dim=dim, ids=ids, rows=rows)
