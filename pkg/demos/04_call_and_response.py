"""Call-and-response across the whole corpus.

Replays stored sketches as user input and tabulates each one's best
cross-category match, then splits the table into the closest pairs
(strong structural matches) and the weakest ones.

Run 01 and 02 first.
"""
from pathlib import Path

from sketchshift.pipeline import load_sketches, replay_turns
from sketchshift.store import build_store, load_model

OUT = Path(__file__).parent / "out"

model = load_model(OUT / "model.skcm")
store = build_store(load_sketches([OUT / "corpus.ndjson"]))

records = replay_turns(model, store, per_category=6, seed=11)
rows = sorted(records, key=lambda r: r.proposals[0].distance)


def show(record):
    best = record.proposals[0]
    print(f"  #{record.input.id} ({record.input.category:<10}) "
          f"recognized {record.recognition.cluster[0]:<10} "
          f"-> {best.target[0]:<10} distance {best.distance:.4f}")


print("closest matches (strong candidates for a response):")
for record in rows[:8]:
    show(record)

print("\nweakest matches (little shared structure):")
for record in rows[-8:]:
    show(record)

same = sum(1 for r in records if r.proposals[0].target[0] == r.recognition.cluster[0])
print(f"\n{len(records)} replays, {same} responses from the recognized category (must be 0)")
