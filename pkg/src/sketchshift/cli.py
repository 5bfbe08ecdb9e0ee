"""Operator entry points.

    sketchshift ingest DATA...                 validate files, report counts
    sketchshift fit --data ... --out model     embed + elbow + k-means
    sketchshift respond --model ... --data ... one turn from strokes JSON
    sketchshift batch-respond ...              replay stored sketches to CSV
    sketchshift project ...                    2-D PCA scatter per category
    sketchshift serve ...                      start the HTTP service

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .embedding import ReferenceEmbedder, fingerprint, load_embeddings, write_embeddings
from .engine import TurnOptions, TurnRecord, respond_turn
from .errors import SketchShiftError
from .ingest import iter_dataset_file
from .pipeline import PipelineConfig, fit_model, load_sketches, replay_turns
from .projection import pca_2d
from .service import ServerState, create_app
from .store import build_store, load_model, save_model

MODEL_ENV_VAR = "SKETCHSHIFT_MODEL"


def _add_data_arg(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--data", nargs="+", type=Path, required=required, metavar="FILE",
                   help="dataset files (.ndjson or .bin)")


def _parse_k_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sketchshift")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and validate dataset files")
    p.add_argument("files", nargs="+", type=Path)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fit", help="fit a cluster model from dataset files")
    _add_data_arg(p)
    p.add_argument("--out", type=Path, required=True, help="model output path (.skcm)")
    p.add_argument("--categories", help="comma-separated category filter")
    p.add_argument("--cap", type=int, default=1000, help="per-category sample cap")
    p.add_argument("--side", type=int, default=64, help="raster side in pixels")
    p.add_argument("--epsilon", type=float, default=2.0, help="RDP tolerance")
    p.add_argument("--k-range", type=_parse_k_range, default=(2, 10), metavar="MIN:MAX")
    p.add_argument("--k-override", action="append", default=[], metavar="CATEGORY=K",
                   help="pin k for a category instead of the elbow pick (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--embeddings", type=Path, help="use precomputed SKEM features")
    p.add_argument("--normalize-embeddings", action="store_true",
                   help="L2-normalize external features on load")
    p.add_argument("--embeddings-out", type=Path, help="also save the feature matrix (SKEM)")
    p.add_argument("--elbow-csv", type=Path, help="directory for per-category k,wcss curves")
    p.add_argument("--jobs", type=int, default=1, help="parallel category fits")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("respond", help="answer one sketch read from file or stdin")
    p.add_argument("--model", type=Path, default=None)
    _add_data_arg(p)
    p.add_argument("--strokes", type=Path, help="JSON file with {\"strokes\": [...]}; default stdin")
    p.add_argument("-n", type=int, default=5, help="number of proposals")
    p.add_argument("--policy", choices=["random", "medoid"], default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--embeddings", type=Path, help="SKEM matrix for medoid selection")
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser("batch-respond", help="replay stored sketches, write source/target CSV")
    p.add_argument("--model", type=Path, default=None)
    _add_data_arg(p)
    p.add_argument("--per-category", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="CSV path; default stdout")
    p.add_argument("--embeddings", type=Path, help="SKEM matrix (required for external models)")
    p.add_argument("--restrict-category", action="store_true",
                   help="recognize within the sketch's own category")
    p.set_defaults(func=cmd_batch_respond)

    p = sub.add_parser("project", help="2-D PCA projection per category, CSV output")
    _add_data_arg(p)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--categories", help="comma-separated category filter")
    p.add_argument("--cap", type=int, default=1000)
    p.add_argument("--epsilon", type=float, default=2.0)
    p.add_argument("--side", type=int, default=64)
    p.add_argument("--embeddings", type=Path, help="project precomputed SKEM features")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--model", type=Path, default=None,
                   help=f"model path (default: ${MODEL_ENV_VAR})")
    _add_data_arg(p, required=False)
    p.add_argument("--embeddings", type=Path)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8075)
    p.add_argument("--allow-origin", action="append", default=[],
                   help="CORS origin for the UI (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_serve)

    return parser


def cmd_ingest(args) -> int:
    total = 0
    per_category: dict[str, int] = {}
    for path in args.files:
        count = 0
        for sk in iter_dataset_file(path):
            count += 1
            if sk.category:
                per_category[sk.category] = per_category.get(sk.category, 0) + 1
        print(f"{path}: {count} sketches")
        total += count
    for cat in sorted(per_category):
        print(f"  {cat}: {per_category[cat]}")
    print(f"total: {total}")
    return 0


def cmd_fit(args) -> int:
    overrides = {}
    for item in args.k_override:
        cat, _, k = item.partition("=")
        if not cat or not k.isdigit():
            raise SketchShiftError(f"bad --k-override {item!r}, expected CATEGORY=K")
        overrides[cat] = int(k)
    config = PipelineConfig(
        data_paths=list(args.data),
        categories=args.categories.split(",") if args.categories else None,
        cap=args.cap,
        raster_side=args.side,
        rdp_epsilon=args.epsilon,
        k_min=args.k_range[0],
        k_max=args.k_range[1],
        seed=args.seed,
        k_overrides=overrides,
        embeddings_path=args.embeddings,
        normalize_embeddings=args.normalize_embeddings,
        jobs=args.jobs,
    )
    result = fit_model(config)
    nbytes = save_model(result.model, args.out)
    print(f"wrote {args.out} ({nbytes} bytes): "
          f"{len(result.model.categories)} categories, {len(result.model.clusters)} clusters")
    if args.embeddings_out:
        write_embeddings(result.matrix, args.embeddings_out)
        print(f"wrote {args.embeddings_out} ({len(result.matrix)} vectors, dim {result.matrix.dim})")
    if args.elbow_csv:
        args.elbow_csv.mkdir(parents=True, exist_ok=True)
        for cat, curve in result.curves.items():
            path = args.elbow_csv / f"{cat}.csv"
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["k", "wcss"])
                writer.writerows([(k, repr(w)) for k, w in curve])
        print(f"wrote elbow curves to {args.elbow_csv}")
    for cat in result.model.categories:
        print(f"  {cat}: k={result.model.per_category_k[cat]}")
    return 0


def _load_model_and_store(args):
    model_path = args.model or (Path(os.environ[MODEL_ENV_VAR]) if os.environ.get(MODEL_ENV_VAR) else None)
    if model_path is None:
        raise SketchShiftError(f"no model given (use --model or ${MODEL_ENV_VAR})")
    model = load_model(model_path)
    store = build_store(load_sketches(list(args.data)))
    embeddings = load_embeddings(args.embeddings) if getattr(args, "embeddings", None) else None
    return model, store, embeddings


def _turn_record_json(record: TurnRecord) -> dict:
    return {
        "turn_index": record.turn_index,
        "recognition": {
            "category": record.recognition.cluster[0],
            "cluster": record.recognition.cluster[1],
            "distance": record.recognition.distance,
        },
        "proposals": [
            {
                "category": p.target[0],
                "cluster": p.target[1],
                "distance": p.distance,
                "exemplar_id": p.exemplar_id,
            }
            for p in record.proposals
        ],
        "response": {
            "id": record.response.id,
            "category": record.response.category,
            "strokes": [[[int(x), int(y)] for x, y in s] for s in record.response.strokes],
        },
    }


def cmd_respond(args) -> int:
    try:
        raw = Path(args.strokes).read_text() if args.strokes else sys.stdin.read()
        payload = json.loads(raw)
        strokes = [np.asarray(s, dtype=np.int32) for s in payload.get("strokes", [])]
        model, store, embeddings = _load_model_and_store(args)
        options = TurnOptions(n=args.n, policy=args.policy, seed=args.seed, embeddings=embeddings)
        record = respond_turn(strokes, model, store, options)
    except (SketchShiftError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}))
        return 1
    print(json.dumps(_turn_record_json(record)))
    return 0


def cmd_batch_respond(args) -> int:
    model, store, embeddings = _load_model_and_store(args)
    records = replay_turns(
        model,
        store,
        per_category=args.per_category,
        seed=args.seed,
        matrix=embeddings,
        restrict_category=args.restrict_category,
    )
    rows = [
        (
            record.input.id,
            record.input.category,
            record.recognition.cluster[0],
            record.recognition.cluster[1],
            record.proposals[0].target[0],
            record.proposals[0].target[1],
            repr(record.proposals[0].distance),
        )
        for record in records
    ]
    header = ["input_id", "input_category", "recognized_category", "recognized_cluster",
              "target_category", "target_cluster", "distance"]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        print(f"wrote {args.out} ({len(rows)} rows)")
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    return 0


def cmd_project(args) -> int:
    sketches = load_sketches(
        list(args.data),
        categories=args.categories.split(",") if args.categories else None,
        cap=args.cap,
    )
    if not sketches:
        raise SketchShiftError("no sketches matched")
    store = build_store(sketches)
    if args.embeddings:
        matrix = load_embeddings(args.embeddings)
    else:
        from .pipeline import embed_corpus

        matrix = embed_corpus(sketches, args.epsilon, args.side)
    index = matrix.index()

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "category", "pc1", "pc2"])
        n_rows = 0
        for cat in store.categories():
            ids = [i for i in store.by_category[cat] if i in index]
            if len(ids) < 2:
                print(f"skipping {cat}: fewer than 2 embedded sketches", file=sys.stderr)
                continue
            X = matrix.rows[[index[i] for i in ids]]
            scores, _, _ = pca_2d(X)
            for sid, (x, y) in zip(ids, scores):
                writer.writerow([sid, cat, repr(float(x)), repr(float(y))])
                n_rows += 1
    print(f"wrote {args.out} ({n_rows} rows)")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    model_path = args.model or (Path(os.environ[MODEL_ENV_VAR]) if os.environ.get(MODEL_ENV_VAR) else None)
    state = ServerState(seed=args.seed)
    if model_path is not None:
        state.model = load_model(model_path)
        print(f"loaded model {model_path}: {len(state.model.clusters)} clusters, "
              f"fingerprint {state.model.fingerprint.name}")
    if args.data:
        state.store = build_store(load_sketches(list(args.data)))
        print(f"loaded {len(state.store)} sketches")
    if args.embeddings:
        state.embeddings = load_embeddings(args.embeddings)
    app = create_app(state, allow_origins=args.allow_origin or None)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except SketchShiftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
