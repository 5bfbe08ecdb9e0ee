"""Flatten one category's feature vectors to 2-D for inspection.

Projects every category onto its top two principal components, writes
a CSV scatter, and (when matplotlib is importable) a PNG colored by
cluster assignment, which makes the sub-cluster structure visible.

Run 01 and 02 first.
"""
import csv
from pathlib import Path

import numpy as np

from sketchshift.embedding import load_embeddings
from sketchshift.pipeline import load_sketches
from sketchshift.projection import pca_2d
from sketchshift.store import build_store, load_model

OUT = Path(__file__).parent / "out"

model = load_model(OUT / "model.skcm")
store = build_store(load_sketches([OUT / "corpus.ndjson"]))
matrix = load_embeddings(OUT / "model.skem")
index = matrix.index()

member_cluster = {}
for cluster in model.clusters:
    for mid in cluster.member_ids:
        member_cluster[int(mid)] = cluster.local_index

csv_path = OUT / "projection.csv"
with open(csv_path, "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["id", "category", "cluster", "pc1", "pc2"])
    panels = {}
    for cat in store.categories():
        ids = store.by_category[cat]
        X = matrix.rows[[index[i] for i in ids]]
        scores, _, eigvals = pca_2d(X)
        panels[cat] = (ids, scores)
        spread = eigvals[0] / max(eigvals.sum(), 1e-12)
        print(f"{cat:<10} first component carries {100 * spread:.0f}% of the top-2 variance")
        for sid, (x, y) in zip(ids, scores):
            writer.writerow([sid, cat, member_cluster[sid], repr(float(x)), repr(float(y))])
print(f"wrote {csv_path}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping PNG")
else:
    fig, axes = plt.subplots(2, 3, figsize=(12, 7))
    for ax, (cat, (ids, scores)) in zip(axes.ravel(), panels.items()):
        colors = np.array([member_cluster[i] for i in ids])
        ax.scatter(scores[:, 0], scores[:, 1], c=colors, s=6, cmap="tab10")
        ax.set_title(cat)
        ax.set_xticks([])
        ax.set_yticks([])
    fig.suptitle("per-category 2-D projection, colored by sub-cluster")
    png_path = OUT / "projection.png"
    fig.savefig(png_path, dpi=110)
    print(f"wrote {png_path}")
