"""Fit the cluster model: embed every sketch, pick k per category with
the elbow rule, run k-means, and persist the result.

Run 01_make_corpus.py first.
"""
from pathlib import Path

from sketchshift.embedding import write_embeddings
from sketchshift.pipeline import PipelineConfig, fit_model
from sketchshift.store import save_model

OUT = Path(__file__).parent / "out"

config = PipelineConfig(
    data_paths=[OUT / "corpus.ndjson"],
    cap=200,
    k_min=2,
    k_max=8,
    seed=7,
)
result = fit_model(config)

print("elbow curves (k: wcss):")
for cat, curve in result.curves.items():
    chosen = result.model.per_category_k[cat]
    pretty = "  ".join(f"{k}:{w:.3f}" for k, w in curve)
    print(f"  {cat:<10} -> k={chosen}   [{pretty}]")

model_path = OUT / "model.skcm"
nbytes = save_model(result.model, model_path)
print(f"\nwrote {model_path} ({nbytes} bytes, {len(result.model.clusters)} clusters)")

emb_path = OUT / "model.skem"
write_embeddings(result.matrix, emb_path)
print(f"wrote {emb_path} ({len(result.matrix)} vectors, dim {result.matrix.dim})")

for cluster in result.model.clusters[:8]:
    print(f"  cluster {cluster.key}: {cluster.member_count} members")
