"""Independent reference implementations used to cross-check the
library. Everything here is deliberately written from scratch with
plain loops and exact arithmetic, not shared with package code."""
from __future__ import annotations

import math

import numpy as np


# --- Ramer-Douglas-Peucker, recursive textbook form ------------------------

def _point_line_distance(p, a, b):
    if a == b:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    num = abs((b[0] - a[0]) * (a[1] - p[1]) - (a[0] - p[0]) * (b[1] - a[1]))
    den = math.hypot(b[0] - a[0], b[1] - a[1])
    return num / den


def _rdp_recursive(points, epsilon):
    if len(points) <= 2:
        return list(points)
    a, b = points[0], points[-1]
    dmax, index = 0.0, 0
    for i in range(1, len(points) - 1):
        d = _point_line_distance(points[i], a, b)
        if d > dmax:
            dmax, index = d, i
    if dmax > epsilon:
        left = _rdp_recursive(points[: index + 1], epsilon)
        right = _rdp_recursive(points[index:], epsilon)
        return left[:-1] + right
    return [a, b]


def rdp_oracle(points, epsilon):
    """Collapse consecutive duplicates, then recursive RDP."""
    deduped = [tuple(points[0])]
    for p in points[1:]:
        if tuple(p) != deduped[-1]:
            deduped.append(tuple(p))
    if len(deduped) <= 2:
        return deduped
    return _rdp_recursive(deduped, epsilon)


# --- Bresenham via exact midpoint rounding ----------------------------------

def _half_up(num, den):
    return (2 * num + den) // (2 * den)


def _half_down(num, den):
    return -((-2 * num + den) // (2 * den))


def bresenham_oracle(x0, y0, x1, y1):
    """Pixels of the line segment by walking the major axis and rounding
    the exact minor coordinate to nearest, ties in the travel direction.
    Pure integer arithmetic."""
    dx, dy = x1 - x0, y1 - y0
    if dx == 0 and dy == 0:
        return [(x0, y0)]
    if abs(dx) >= abs(dy):
        major, s, tie_up = abs(dx), (1 if dx > 0 else -1), dy > 0
        out = []
        for i in range(major + 1):
            num = dy * i
            off = _half_up(num, major) if tie_up else _half_down(num, major)
            out.append((x0 + i * s, y0 + off))
        return out
    major, s, tie_up = abs(dy), (1 if dy > 0 else -1), dx > 0
    out = []
    for i in range(major + 1):
        num = dx * i
        off = _half_up(num, major) if tie_up else _half_down(num, major)
        out.append((x0 + off, y0 + i * s))
    return out


def raster_pixels_oracle(strokes_scaled):
    """Union of line runs over already-scaled integer stroke points."""
    lit = set()
    for pts in strokes_scaled:
        if len(pts) == 1:
            lit.add((int(pts[0][0]), int(pts[0][1])))
            continue
        for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
            lit.update(bresenham_oracle(int(x0), int(y0), int(x1), int(y1)))
    return lit


# --- gradient-orientation histogram, plain loops ----------------------------

def grad_hist_oracle(img, cells=8, bins=8):
    side = img.shape[0]
    cell_px = side // cells
    hist = np.zeros((cells, cells, bins))
    for y in range(1, side - 1):
        for x in range(1, side - 1):
            gx = 0.5 * (img[y, x + 1] - img[y, x - 1])
            gy = 0.5 * (img[y + 1, x] - img[y - 1, x])
            m = math.hypot(gx, gy)
            if m == 0.0:
                continue
            theta = math.atan2(gy, gx)
            if theta < 0:
                theta += math.pi
            if theta >= math.pi:
                theta -= math.pi
            b = min(int(theta / (math.pi / bins)), bins - 1)
            hist[y // cell_px, x // cell_px, b] += m
    flat = hist.reshape(-1)
    norm = math.sqrt(float((flat ** 2).sum()))
    if norm > 0:
        flat = flat / norm
    return flat


# --- brute-force distance scans ---------------------------------------------

def nearest_scan(v, centroids):
    """Lowest-index nearest centroid by true Euclidean distance."""
    best_i, best_d = 0, float("inf")
    for i, c in enumerate(centroids):
        d = math.sqrt(float(((np.asarray(v) - np.asarray(c)) ** 2).sum()))
        if d < best_d:
            best_i, best_d = i, d
    return best_i, best_d


def nearest_cluster_scan(v, keyed_centroids):
    """Scan over (key, centroid) pairs; ties to the smallest key."""
    best = None
    for key, c in keyed_centroids:
        d = math.sqrt(float(((np.asarray(v) - np.asarray(c)) ** 2).sum()))
        if best is None or d < best[1] or (d == best[1] and key < best[0]):
            best = (key, d)
    return best


def wcss_brute(points, centroids, assignments):
    total = 0.0
    for p, a in zip(points, assignments):
        diff = np.asarray(p) - np.asarray(centroids[a])
        total += float((diff ** 2).sum())
    return total
