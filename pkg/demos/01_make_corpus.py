"""Build a desk-scale stroke corpus in both dataset formats.

Six shape families (balloon, lightning, mountain, snail, star, window),
each with a couple of discrete drawing modes plus jitter, written as
simplified NDJSON and as binary records. Later demos read these files.
"""
from pathlib import Path

from sketchshift.ingest import iter_binary_file, iter_ndjson_file, write_binary, write_ndjson
from sketchshift.synth import CATEGORIES, make_corpus

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

corpus = make_corpus(per_category=200, seed=42)
print(f"generated {len(corpus)} sketches across {len(CATEGORIES)} categories")

nd_path = OUT / "corpus.ndjson"
lines = write_ndjson(corpus, nd_path)
print(f"wrote {nd_path} ({lines} lines)")

bin_path = OUT / "corpus.bin"
nbytes = write_binary(corpus, bin_path)
print(f"wrote {bin_path} ({nbytes} bytes)")

# read both back to show the parsers agree with what we wrote
nd_count = sum(1 for _ in iter_ndjson_file(nd_path))
bin_count = sum(1 for _ in iter_binary_file(bin_path))
print(f"re-parsed: {nd_count} from NDJSON, {bin_count} from binary")

sample = next(iter_ndjson_file(nd_path))
print(f"first sketch: id={sample.id} category={sample.category} "
      f"strokes={len(sample.strokes)} points={sample.point_count()}")
