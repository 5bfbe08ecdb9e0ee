"""One input sketch, five ranked cross-category responses.

Draws a fresh star, asks the engine for its top five proposals, and
prints the gallery: every proposal comes from a different category,
ordered by how structurally close its cluster sits to the input's.

Run 01 and 02 first.
"""
from pathlib import Path

import numpy as np

from sketchshift.engine import TurnOptions, respond_turn
from sketchshift.pipeline import load_sketches
from sketchshift.store import build_store, load_model
from sketchshift.synth import make_sketch

OUT = Path(__file__).parent / "out"

model = load_model(OUT / "model.skcm")
store = build_store(load_sketches([OUT / "corpus.ndjson"]))

rng = np.random.default_rng(123)
drawn = make_sketch("star", sketch_id=0, rng=rng)
print(f"user draws a star: {len(drawn.strokes)} stroke(s), {drawn.point_count()} points")

record = respond_turn(drawn.strokes, model, store, TurnOptions(n=5, seed=99))

cat, idx = record.recognition.cluster
print(f"recognized as cluster ({cat}, {idx}), distance {record.recognition.distance:.4f}\n")
print("top 5 proposals:")
for rank, p in enumerate(record.proposals, start=1):
    print(f"  {rank}. {p.target[0]:<10} cluster {p.target[1]}  "
          f"distance {p.distance:.4f}  exemplar #{p.exemplar_id}")

resp = record.response
print(f"\nagent answers with sketch #{resp.id} from '{resp.category}' "
      f"({len(resp.strokes)} strokes)")
