"""Stroke-format ingestion: NDJSON and binary record parsing, polyline
simplification, normalization, and rasterization.

A stroke is an ``(n, 2)`` integer ndarray of ``(x, y)`` pixel coordinates.
A sketch is an ordered list of strokes plus identity metadata.

Simplified NDJSON files carry one JSON object per line::

    {"key_id": "7", "word": "nose", "recognized": true,
     "drawing": [[[x0, x1, ...], [y0, y1, ...]], ...]}

Binary ``.bin`` files are concatenated little-endian records::

    key_id     u64
    country    2 ASCII bytes
    recognized u8 (0 or 1)
    timestamp  u32 (epoch seconds)
    n_strokes  u16
    per stroke: n_points u16, n_points x u8, n_points x u8

Parsing is strict: malformed input is rejected, never repaired.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import EncodeError, InvalidStrokes, ParseError

COORD_MAX = 255
DEFAULT_RDP_EPSILON = 2.0
DEFAULT_RASTER_SIDE = 64

# the record header mixes alignments, so fields are packed one by one
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


@dataclass(eq=False)
class Sketch:
    """One drawing: ordered strokes plus identity metadata."""

    id: int
    strokes: list[np.ndarray]
    category: str | None = None
    recognized: bool | None = None
    country: str | None = None
    timestamp: int | None = None

    def equals(self, other: "Sketch") -> bool:
        return (
            self.id == other.id
            and self.category == other.category
            and self.recognized == other.recognized
            and self.country == other.country
            and self.timestamp == other.timestamp
            and len(self.strokes) == len(other.strokes)
            and all(np.array_equal(a, b) for a, b in zip(self.strokes, other.strokes))
        )

    def point_count(self) -> int:
        return sum(len(s) for s in self.strokes)


def as_stroke(points) -> np.ndarray:
    """Coerce a point sequence to an (n, 2) int32 stroke array."""
    arr = np.asarray(points, dtype=np.int32)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise InvalidStrokes(f"stroke must be a non-empty (n, 2) point array, got shape {arr.shape}")
    return arr


def _check_strokes(strokes: list[np.ndarray]) -> None:
    if not strokes:
        raise InvalidStrokes("sketch has no strokes")
    for s in strokes:
        if len(s) == 0:
            raise InvalidStrokes("sketch contains an empty stroke")


# ---------------------------------------------------------------------------
# NDJSON parsing

def parse_ndjson_line(line: str) -> Sketch:
    """Parse one simplified-NDJSON record.

    Required fields: ``key_id`` (u64, digits or int) and ``drawing``
    (list of ``[xs, ys]`` pairs with equal non-empty lengths, all
    coordinates integers in [0, 255]). ``word`` becomes the category;
    ``recognized``, ``countrycode``, and an integer ``timestamp`` are
    kept when present. Other fields, including the public export's
    datetime-string timestamps, are ignored.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("record is not a JSON object")

    if "drawing" not in obj:
        raise ParseError("missing drawing")
    if "key_id" not in obj:
        raise ParseError("missing key_id")

    sketch_id = _parse_key_id(obj["key_id"])
    strokes = _parse_drawing(obj["drawing"])

    category = obj.get("word")
    if category is not None and not isinstance(category, str):
        raise ParseError("word must be a string")

    recognized = obj.get("recognized")
    if recognized is not None and not isinstance(recognized, bool):
        raise ParseError("recognized must be a boolean")

    country = obj.get("countrycode")
    if country is not None:
        if not isinstance(country, str) or len(country) != 2:
            raise ParseError("countrycode must be a 2-character string")

    timestamp = obj.get("timestamp")
    if isinstance(timestamp, bool) or not isinstance(timestamp, int):
        timestamp = None  # public exports store a datetime string here
    elif not 0 <= timestamp < 2**32:
        raise ParseError("timestamp out of u32 range")

    return Sketch(
        id=sketch_id,
        strokes=strokes,
        category=category,
        recognized=recognized,
        country=country,
        timestamp=timestamp,
    )


def _parse_key_id(raw) -> int:
    if isinstance(raw, bool):
        raise ParseError("key_id must be an integer or digit string")
    if isinstance(raw, str):
        if not raw.isdigit():
            raise ParseError("key_id must be an integer or digit string")
        raw = int(raw)
    if not isinstance(raw, int):
        raise ParseError("key_id must be an integer or digit string")
    if not 0 <= raw < 2**64:
        raise ParseError("key_id out of u64 range")
    return raw


def _parse_drawing(drawing) -> list[np.ndarray]:
    if not isinstance(drawing, list) or not drawing:
        raise ParseError("drawing must be a non-empty list of strokes")
    strokes = []
    for stroke in drawing:
        if not isinstance(stroke, list) or len(stroke) != 2:
            raise ParseError("each stroke must be an [xs, ys] pair")
        xs, ys = stroke
        if not isinstance(xs, list) or not isinstance(ys, list):
            raise ParseError("stroke coordinate lists must be JSON arrays")
        if len(xs) != len(ys):
            raise ParseError("stroke xs and ys lengths differ")
        if not xs:
            raise ParseError("empty stroke")
        for v in xs + ys:
            if isinstance(v, bool) or not isinstance(v, int):
                raise ParseError(f"non-integer coordinate: {v!r}")
            if not 0 <= v <= COORD_MAX:
                raise ParseError(f"coordinate outside [0, {COORD_MAX}]: {v}")
        strokes.append(np.column_stack([xs, ys]).astype(np.int32))
    return strokes


def iter_ndjson_file(path: str | Path) -> Iterator[Sketch]:
    """Yield sketches from a simplified-NDJSON file, skipping blank lines."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield parse_ndjson_line(line)


# ---------------------------------------------------------------------------
# Binary record parsing / encoding

def parse_binary_record(buf) -> tuple[Sketch, int]:
    """Parse one binary record from the start of ``buf``.

    Returns the sketch and the exact number of bytes consumed, so a
    caller can iterate concatenated records without an index. Raises
    ParseError on truncation or declared-zero stroke/point counts.
    """
    view = memoryview(buf)
    pos = 0

    def take(n: int) -> memoryview:
        nonlocal pos
        if pos + n > len(view):
            raise ParseError(f"record truncated: need {pos + n} bytes, have {len(view)}")
        chunk = view[pos:pos + n]
        pos += n
        return chunk

    sketch_id = _U64.unpack(take(8))[0]
    country_raw = bytes(take(2))
    if any(b > 127 for b in country_raw):
        raise ParseError("country bytes are not ASCII")
    country = country_raw.decode("ascii")
    recognized_raw = take(1)[0]
    if recognized_raw not in (0, 1):
        raise ParseError(f"recognized byte must be 0 or 1, got {recognized_raw}")
    timestamp = _U32.unpack(take(4))[0]
    n_strokes = _U16.unpack(take(2))[0]
    if n_strokes == 0:
        raise ParseError("record declares zero strokes")

    strokes = []
    for _ in range(n_strokes):
        n_points = _U16.unpack(take(2))[0]
        if n_points == 0:
            raise ParseError("stroke declares zero points")
        xs = np.frombuffer(take(n_points), dtype=np.uint8)
        ys = np.frombuffer(take(n_points), dtype=np.uint8)
        strokes.append(np.column_stack([xs, ys]).astype(np.int32))

    sketch = Sketch(
        id=sketch_id,
        strokes=strokes,
        recognized=bool(recognized_raw),
        country=country,
        timestamp=timestamp,
    )
    return sketch, pos


def encode_binary_record(sketch: Sketch) -> bytes:
    """Encode a sketch in the binary record layout.

    Inverse of :func:`parse_binary_record` on (id, country, recognized,
    timestamp, strokes). Missing optional fields fall back to country
    ``"  "``, recognized ``False``, timestamp ``0``; the category is not
    representable and is dropped. Raises EncodeError when a coordinate
    exceeds 255 or a count does not fit in its field.
    """
    _check_strokes(sketch.strokes)
    if not 0 <= sketch.id < 2**64:
        raise EncodeError("id out of u64 range")
    country = sketch.country if sketch.country is not None else "  "
    try:
        country_raw = country.encode("ascii")
    except UnicodeEncodeError:
        raise EncodeError("country must be ASCII") from None
    if len(country_raw) != 2:
        raise EncodeError("country must be exactly 2 characters")
    timestamp = sketch.timestamp if sketch.timestamp is not None else 0
    if not 0 <= timestamp < 2**32:
        raise EncodeError("timestamp out of u32 range")
    if len(sketch.strokes) > 0xFFFF:
        raise EncodeError("stroke count exceeds u16")

    out = bytearray()
    out += _U64.pack(sketch.id)
    out += country_raw
    out.append(1 if sketch.recognized else 0)
    out += _U32.pack(timestamp)
    out += _U16.pack(len(sketch.strokes))
    for stroke in sketch.strokes:
        if len(stroke) > 0xFFFF:
            raise EncodeError("point count exceeds u16")
        if stroke.min() < 0 or stroke.max() > COORD_MAX:
            raise EncodeError(f"coordinate outside [0, {COORD_MAX}]")
        out += _U16.pack(len(stroke))
        out += stroke[:, 0].astype(np.uint8).tobytes()
        out += stroke[:, 1].astype(np.uint8).tobytes()
    return bytes(out)


def iter_binary_file(path: str | Path) -> Iterator[Sketch]:
    """Yield sketches from concatenated binary records."""
    data = Path(path).read_bytes()
    view = memoryview(data)
    pos = 0
    while pos < len(view):
        sketch, consumed = parse_binary_record(view[pos:])
        pos += consumed
        yield sketch


def iter_dataset_file(path: str | Path) -> Iterator[Sketch]:
    """Dispatch on extension: .ndjson/.jsonl to NDJSON, .bin to binary."""
    suffix = Path(path).suffix.lower()
    if suffix in (".ndjson", ".jsonl", ".json"):
        return iter_ndjson_file(path)
    if suffix == ".bin":
        return iter_binary_file(path)
    raise ParseError(f"unrecognized dataset extension: {path}")


def write_ndjson(sketches: Iterable[Sketch], path: str | Path) -> int:
    """Write sketches as simplified-NDJSON lines; returns the line count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for sk in sketches:
            obj = {
                "key_id": str(sk.id),
                "drawing": [[s[:, 0].tolist(), s[:, 1].tolist()] for s in sk.strokes],
            }
            if sk.category is not None:
                obj["word"] = sk.category
            if sk.recognized is not None:
                obj["recognized"] = sk.recognized
            if sk.country is not None:
                obj["countrycode"] = sk.country
            if sk.timestamp is not None:
                obj["timestamp"] = sk.timestamp
            fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
            n += 1
    return n


def write_binary(sketches: Iterable[Sketch], path: str | Path) -> int:
    """Write sketches as concatenated binary records; returns the byte count."""
    total = 0
    with open(path, "wb") as fh:
        for sk in sketches:
            blob = encode_binary_record(sk)
            fh.write(blob)
            total += len(blob)
    return total


# ---------------------------------------------------------------------------
# Simplification

def _dedup_consecutive(points: np.ndarray) -> np.ndarray:
    if len(points) < 2:
        return points
    keep = np.empty(len(points), dtype=bool)
    keep[0] = True
    keep[1:] = np.any(points[1:] != points[:-1], axis=1)
    return points[keep]


def simplify_rdp(stroke: np.ndarray, epsilon: float = DEFAULT_RDP_EPSILON) -> np.ndarray:
    """Ramer-Douglas-Peucker simplification with tolerance ``epsilon``.

    Consecutive duplicate points are collapsed first; endpoints are
    preserved; every removed point lies within perpendicular distance
    ``epsilon`` of the retained polyline. Strokes with two or fewer
    distinct consecutive points are returned as is.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    pts = _dedup_consecutive(np.asarray(stroke))
    if len(pts) <= 2:
        return pts

    coords = pts.astype(np.float64)
    keep = np.zeros(len(pts), dtype=bool)
    keep[0] = keep[-1] = True
    # iterative stack to stay safe on very long strokes
    stack = [(0, len(pts) - 1)]
    while stack:
        first, last = stack.pop()
        if last - first < 2:
            continue
        seg = coords[first + 1:last]
        a, b = coords[first], coords[last]
        ab = b - a
        norm = np.hypot(ab[0], ab[1])
        if norm == 0.0:
            dists = np.hypot(seg[:, 0] - a[0], seg[:, 1] - a[1])
        else:
            cross = ab[0] * (seg[:, 1] - a[1]) - ab[1] * (seg[:, 0] - a[0])
            dists = np.abs(cross) / norm
        idx = int(np.argmax(dists))
        if dists[idx] > epsilon:
            split = first + 1 + idx
            keep[split] = True
            stack.append((first, split))
            stack.append((split, last))
    return pts[keep]


def simplify_sketch(sketch: Sketch, epsilon: float = DEFAULT_RDP_EPSILON) -> Sketch:
    """Apply :func:`simplify_rdp` to every stroke."""
    return Sketch(
        id=sketch.id,
        strokes=[simplify_rdp(s, epsilon) for s in sketch.strokes],
        category=sketch.category,
        recognized=sketch.recognized,
        country=sketch.country,
        timestamp=sketch.timestamp,
    )


# ---------------------------------------------------------------------------
# Normalization

def normalize_sketch(sketch: Sketch) -> Sketch:
    """Translate the bounding box to the origin and uniform-scale so its
    longer side spans exactly [0, 255], rounding to nearest integer.

    Degenerate sketches (a single distinct point) collapse to (0, 0).
    Idempotent.
    """
    _check_strokes(sketch.strokes)
    allpts = np.vstack(sketch.strokes).astype(np.float64)
    mins = allpts.min(axis=0)
    maxs = allpts.max(axis=0)
    extent = float(max(maxs[0] - mins[0], maxs[1] - mins[1]))

    normalized = []
    for stroke in sketch.strokes:
        shifted = stroke.astype(np.float64) - mins
        if extent > 0:
            shifted *= COORD_MAX / extent
        normalized.append(np.floor(shifted + 0.5).astype(np.int32))
    return Sketch(
        id=sketch.id,
        strokes=normalized,
        category=sketch.category,
        recognized=sketch.recognized,
        country=sketch.country,
        timestamp=sketch.timestamp,
    )


# ---------------------------------------------------------------------------
# Rasterization

def bresenham_line(x0: int, y0: int, x1: int, y1: int) -> np.ndarray:
    """Integer Bresenham line; returns the (n, 2) pixel run from (x0, y0)
    to (x1, y1) inclusive."""
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    out = []
    x, y = x0, y0
    while True:
        out.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
    return np.array(out, dtype=np.int32)


def rasterize(sketch: Sketch, side: int = DEFAULT_RASTER_SIDE) -> np.ndarray:
    """Render a normalized sketch onto a ``side x side`` float image.

    Coordinates are scaled by (side - 1) / 255 and rounded; consecutive
    points in a stroke are joined with 1-pixel Bresenham lines at
    intensity 1.0 on a 0.0 background. Single-point strokes light one
    pixel. Deterministic, no anti-aliasing.
    """
    if side < 8:
        raise ValueError("raster side must be >= 8")
    _check_strokes(sketch.strokes)
    img = np.zeros((side, side), dtype=np.float64)
    scale = (side - 1) / COORD_MAX
    for stroke in sketch.strokes:
        pix = np.floor(stroke.astype(np.float64) * scale + 0.5).astype(np.int64)
        np.clip(pix, 0, side - 1, out=pix)
        if len(pix) == 1:
            img[pix[0, 1], pix[0, 0]] = 1.0
            continue
        for (x0, y0), (x1, y1) in zip(pix[:-1], pix[1:]):
            run = bresenham_line(int(x0), int(y0), int(x1), int(y1))
            img[run[:, 1], run[:, 0]] = 1.0
    return img
