"""Persistence: the SKCM model file and the in-memory sketch store.

SKCM v1 layout (little-endian)::

    magic    "SKCM" (4 bytes)
    version  u32 = 1
    fingerprint: name u32-length-prefixed UTF-8, version u32, dim u32,
                 digest u64
    category table: count u32; per category:
                 label u32-length-prefixed UTF-8, k u32
    cluster table: count u32; per cluster:
                 category index u32, local index u32, member count u64,
                 member ids u64[member count], centroid float32[dim]

Member ids reference a SketchStore built from the original dataset
files; the model file itself stays small. Parsing is strict and every
FormatError carries the byte offset of the first violation.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .clustering import Cluster
from .embedding import EmbedderFingerprint
from .engine import ClusterModel
from .errors import DuplicateId, FormatError, MissingSketch, SketchShiftError, ValidationError
from .ingest import Sketch

SKCM_MAGIC = b"SKCM"
SKCM_VERSION = 1

_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


@dataclass
class SketchStore:
    """Sketches indexed by id and by category."""

    by_id: dict[int, Sketch] = field(default_factory=dict)
    by_category: dict[str, list[int]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.by_id)

    def get(self, sketch_id: int) -> Sketch:
        try:
            return self.by_id[sketch_id]
        except KeyError:
            raise MissingSketch(f"sketch {sketch_id} not in store") from None

    def categories(self) -> list[str]:
        return sorted(self.by_category)


def build_store(sketches: Iterable[Sketch]) -> SketchStore:
    """Index sketches by id and category; every sketch must carry a
    category and ids must be unique."""
    store = SketchStore()
    for sk in sketches:
        if sk.category is None:
            raise ValidationError(f"sketch {sk.id} has no category")
        if sk.id in store.by_id:
            raise DuplicateId(f"duplicate sketch id {sk.id}")
        store.by_id[sk.id] = sk
        store.by_category.setdefault(sk.category, []).append(sk.id)
    return store


# ---------------------------------------------------------------------------
# SKCM writing

def _pack_str(text: str) -> bytes:
    raw = text.encode("utf-8")
    return _U32.pack(len(raw)) + raw


def save_model(model: ClusterModel, destination: str | Path) -> int:
    """Write the model in SKCM v1 layout; returns bytes written."""
    model.validate()
    fp = model.fingerprint
    out = bytearray()
    out += SKCM_MAGIC
    out += _U32.pack(SKCM_VERSION)
    out += _pack_str(fp.name)
    out += _U32.pack(fp.version)
    out += _U32.pack(fp.dim)
    out += _U64.pack(fp.params_digest)

    categories = model.categories
    cat_index = {cat: i for i, cat in enumerate(categories)}
    out += _U32.pack(len(categories))
    for cat in categories:
        out += _pack_str(cat)
        out += _U32.pack(model.per_category_k[cat])

    out += _U32.pack(len(model.clusters))
    for c in model.clusters:
        out += _U32.pack(cat_index[c.category])
        out += _U32.pack(c.local_index)
        out += _U64.pack(c.member_count)
        out += c.member_ids.astype("<u8").tobytes()
        out += c.centroid.astype("<f4").tobytes()

    Path(destination).write_bytes(out)
    return len(out)


# ---------------------------------------------------------------------------
# SKCM reading

class _Reader:
    """Cursor over a byte buffer that reports the offset of failures."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError(f"truncated while reading {what}", offset=len(self.data))
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def u32(self, what: str) -> int:
        return _U32.unpack(self.take(4, what))[0]

    def u64(self, what: str) -> int:
        return _U64.unpack(self.take(8, what))[0]

    def string(self, what: str) -> str:
        start = self.pos
        length = self.u32(f"{what} length")
        raw = self.take(length, what)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError:
            raise FormatError(f"{what} is not valid UTF-8", offset=start + 4) from None


def load_model(source: str | Path) -> ClusterModel:
    """Strict parse of an SKCM v1 file into a validated ClusterModel."""
    data = Path(source).read_bytes()
    r = _Reader(data)

    magic = r.take(4, "magic")
    if magic != SKCM_MAGIC:
        raise FormatError(f"bad magic {magic!r}", offset=0)
    version = r.u32("version")
    if version != SKCM_VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)

    name = r.string("fingerprint name")
    fp_version = r.u32("fingerprint version")
    dim = r.u32("fingerprint dim")
    if dim == 0:
        raise FormatError("fingerprint dim must be positive", offset=r.pos - 4)
    digest = r.u64("fingerprint digest")
    fingerprint = EmbedderFingerprint(name=name, version=fp_version, dim=dim, params_digest=digest)

    cat_count_at = r.pos
    cat_count = r.u32("category count")
    if cat_count < 2:
        raise FormatError("model needs at least 2 categories", offset=cat_count_at)
    categories = []
    per_category_k = {}
    for _ in range(cat_count):
        at = r.pos
        label = r.string("category label")
        if label in per_category_k:
            raise FormatError(f"duplicate category label {label!r}", offset=at)
        k = r.u32("category k")
        categories.append(label)
        per_category_k[label] = k

    cluster_count = r.u32("cluster count")
    clusters = []
    seen_keys = set()
    for _ in range(cluster_count):
        at = r.pos
        cat_idx = r.u32("cluster category index")
        if cat_idx >= cat_count:
            raise FormatError(f"category index {cat_idx} out of range", offset=at)
        local_index = r.u32("cluster local index")
        key = (categories[cat_idx], local_index)
        if key in seen_keys:
            raise FormatError(f"duplicate cluster {key}", offset=at)
        seen_keys.add(key)
        count_at = r.pos
        member_count = r.u64("member count")
        if member_count == 0:
            raise FormatError(f"cluster {key} has zero members", offset=count_at)
        ids_raw = r.take(8 * member_count, "member ids")
        member_ids = np.frombuffer(ids_raw, dtype="<u8").copy()
        cent_at = r.pos
        cent_raw = r.take(4 * dim, "centroid")
        centroid = np.frombuffer(cent_raw, dtype="<f4").astype(np.float64)
        if not np.all(np.isfinite(centroid)):
            bad = int(np.argwhere(~np.isfinite(centroid))[0, 0])
            raise FormatError(f"non-finite centroid value in cluster {key}", offset=cent_at + 4 * bad)
        clusters.append(Cluster(category=key[0], local_index=local_index, centroid=centroid, member_ids=member_ids))

    if r.pos != len(data):
        raise FormatError(f"{len(data) - r.pos} trailing bytes after cluster table", offset=r.pos)

    try:
        model = ClusterModel(fingerprint=fingerprint, clusters=clusters, per_category_k=per_category_k)
        model.validate()
    except SketchShiftError as exc:
        raise FormatError(f"model invariant violated: {exc}", offset=len(data)) from None
    return model
