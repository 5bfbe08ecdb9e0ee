"""Synthetic stroke corpora for desk-scale runs.

Generates dataset-format sketches from six parametric shape families,
each with two or three discrete drawing modes plus continuous jitter,
so per-category clustering has real sub-structure to find. Output
sketches are normalized and simplified exactly like published dataset
files, so they flow through the same ingestion path.
"""
from __future__ import annotations

import numpy as np

from .ingest import Sketch, normalize_sketch, simplify_sketch

CATEGORIES = ("balloon", "lightning", "mountain", "snail", "star", "window")


def _rot(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _balloon(rng) -> list[np.ndarray]:
    # round vs tall envelope, plus a string
    tall = rng.integers(2) == 1
    ry = 90.0 if not tall else 130.0
    rx = 90.0 if not tall else 55.0
    t = np.linspace(0, 2 * np.pi, 28)
    body = np.column_stack([rx * np.cos(t), ry * np.sin(t)])
    string = np.array([[0.0, ry], [rng.normal(0, 8), ry + 70 + rng.uniform(0, 30)]])
    return [body, string]


def _lightning(rng) -> list[np.ndarray]:
    lean = -1.0 if rng.integers(2) == 0 else 1.0
    xs = lean * np.array([0.0, 45, 10, 60, 20, 80])
    ys = np.array([0.0, 55, 70, 130, 145, 230])
    return [np.column_stack([xs, ys])]


def _mountain(rng) -> list[np.ndarray]:
    peaks = int(rng.integers(1, 4))  # 1..3 summits
    xs = [0.0]
    ys = [200.0]
    step = 240.0 / (2 * peaks)
    for p in range(peaks):
        xs += [xs[-1] + step, xs[-1] + 2 * step]
        ys += [40.0 + rng.uniform(-15, 15), 200.0]
    return [np.column_stack([xs, ys])]


def _snail(rng) -> list[np.ndarray]:
    turns = rng.uniform(2.0, 3.0)
    direction = -1.0 if rng.integers(2) == 0 else 1.0
    t = np.linspace(0, turns * 2 * np.pi, 60)
    r = 8.0 + 14.0 * t
    return [np.column_stack([r * np.cos(direction * t), r * np.sin(direction * t)])]


def _star(rng) -> list[np.ndarray]:
    points = int(rng.choice([5, 6]))
    outer, inner = 120.0, 50.0 + rng.uniform(-10, 10)
    angles = np.arange(2 * points + 1) * np.pi / points - np.pi / 2
    radii = np.where(np.arange(2 * points + 1) % 2 == 0, outer, inner)
    return [np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])]


def _window(rng) -> list[np.ndarray]:
    w, h = 200.0, 200.0 * rng.uniform(0.9, 1.4)
    frame = np.array([[0, 0], [w, 0], [w, h], [0, h], [0, 0]], dtype=float)
    strokes = [frame]
    if rng.integers(2) == 1:  # paned vs plain
        strokes.append(np.array([[w / 2, 0], [w / 2, h]]))
        strokes.append(np.array([[0, h / 2], [w, h / 2]]))
    return strokes


_FAMILIES = {
    "balloon": _balloon,
    "lightning": _lightning,
    "mountain": _mountain,
    "snail": _snail,
    "star": _star,
    "window": _window,
}


def make_sketch(category: str, sketch_id: int, rng) -> Sketch:
    """One jittered sketch of a shape family, dataset-normalized."""
    strokes = _FAMILIES[category](rng)
    theta = rng.normal(0, 0.06)
    rot = _rot(theta)
    scale = np.array([rng.uniform(0.85, 1.15), rng.uniform(0.85, 1.15)])
    out = []
    for s in strokes:
        pts = (s * scale) @ rot.T
        pts = pts + rng.normal(0, 2.0, size=pts.shape)
        out.append(np.floor(pts + 0.5).astype(np.int32))
    sketch = Sketch(
        id=sketch_id,
        strokes=out,
        category=category,
        recognized=True,
        country="ZZ",
        timestamp=1_500_000_000 + (sketch_id & 0xFFFF),
    )
    return simplify_sketch(normalize_sketch(sketch))


def make_corpus(
    per_category: int,
    seed: int = 0,
    categories: tuple[str, ...] = CATEGORIES,
) -> list[Sketch]:
    """``per_category`` sketches for each listed category, ids unique."""
    out = []
    for ci, cat in enumerate(categories):
        rng = np.random.default_rng(np.random.SeedSequence([seed, ci]))
        base = (ci + 1) * 1_000_000
        for i in range(per_category):
            out.append(make_sketch(cat, base + i, rng))
    return out
