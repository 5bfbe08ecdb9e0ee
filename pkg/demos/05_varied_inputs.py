"""Several drawings of the same thing, different answers for each.

A category holds more than one way of drawing its object; each way
lands in its own sub-cluster, and different sub-clusters sit nearest
to different foreign categories. Drawing a batch of lightning bolts
(left- and right-leaning variants) shows the engine steering variants
to different response categories.

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

rng = np.random.default_rng(7)
targets = {}
for i in range(8):
    drawn = make_sketch("lightning", sketch_id=0, rng=rng)
    record = respond_turn(drawn.strokes, model, store, TurnOptions(n=3, seed=50, turn_index=i))
    best = record.proposals[0]
    targets.setdefault(best.target[0], 0)
    targets[best.target[0]] += 1
    print(f"bolt #{i + 1} recognized {record.recognition.cluster} "
          f"-> answered from '{best.target[0]}' (distance {best.distance:.4f})")

print(f"\ndistinct response categories over 8 inputs: {len(targets)} {sorted(targets)}")
