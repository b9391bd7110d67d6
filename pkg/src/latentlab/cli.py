"""Batch CLI driving every pipeline stage against the on-disk model store.

stdout carries only machine-readable payload (JSON, ids, file writes);
all diagnostics go to stderr.  Exit codes: 0 success, 1 domain error
(the error name is printed on stderr), 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import store
from .embedding import EmbeddingModel, TrainingConfig, tokenize, train_embeddings
from .errors import InvalidEncoding, IoFailure, LatentLabError, UnknownModel
from .imagelatent import fit_latent_model, load_pgm, save_pgm
from .pointcloud import build_point_cloud, serialize_point_cloud
from .slider import build_image_dimension, build_word_dimension, probe_image, probe_words
from .service import run_server

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _read_corpus(path: str) -> list[str]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return tokenize(data)


def _load_pgm_dir(path: str) -> tuple[list, list[str]]:
    directory = Path(path)
    if not directory.is_dir():
        raise IoFailure(f"not a directory: {path}")
    files = sorted(p for p in directory.iterdir() if p.suffix.lower() == ".pgm")
    if not files:
        raise IoFailure(f"no .pgm files in {path}")
    images = []
    for p in files:
        try:
            images.append(load_pgm(p.read_bytes()))
        except OSError as exc:
            raise IoFailure(str(exc)) from exc
    return images, [p.name for p in files]


def _words_model(path: str):
    model = store.load_model(path)
    if not isinstance(model, EmbeddingModel):
        raise UnknownModel(f"{path} is not a words model")
    return model


def _split_csv(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _cmd_train_words(args) -> int:
    tokens = _read_corpus(args.corpus)
    config = TrainingConfig(
        dim=args.dim,
        window=args.window,
        negatives=args.negatives,
        epochs=args.epochs,
        lr_start=args.lr_start,
        lr_end=args.lr_end,
        min_count=args.min_count,
        seed=args.seed,
    )
    model = train_embeddings(tokens, config)
    store.save_model(model, args.out)
    print(
        f"trained words model: {len(model.vocab)} words, dim={config.dim} -> {args.out}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_train_images(args) -> int:
    class_a, ids_a = _load_pgm_dir(args.class_a)
    class_b, ids_b = _load_pgm_dir(args.class_b)
    model = fit_latent_model(class_a + class_b, args.q)
    dim = build_image_dimension(
        model,
        class_a,
        class_b,
        labels=(Path(args.class_a).name, Path(args.class_b).name),
        item_ids=(ids_a, ids_b),
    )
    store.save_model(model, args.out)
    store.save_slider(dim, args.out, slider_id="class-axis")
    print(
        f"fitted image model: {model.n_train} images {model.width}x{model.height}, "
        f"q={model.q} -> {args.out} (slider 'class-axis')",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_slider(args) -> int:
    model = _words_model(args.model)
    pole_a, pole_b = _split_csv(args.pole_a), _split_csv(args.pole_b)
    labels = None
    if args.labels:
        parts = _split_csv(args.labels)
        if len(parts) != 2:
            print("labels must be two comma-separated strings", file=sys.stderr)
            return EXIT_USAGE
        labels = (parts[0], parts[1])
    dim = build_word_dimension(model, pole_a, pole_b, labels=labels)
    slider_id = store.save_slider(dim, args.model)
    print(slider_id)
    return EXIT_OK


def _cmd_probe(args) -> int:
    model = store.load_model(args.model)
    dim = store.load_slider(args.model, args.slider)
    if isinstance(model, EmbeddingModel):
        if not args.base:
            print("words probes need --base WORD", file=sys.stderr)
            return EXIT_USAGE
        result = probe_words(model, dim, args.base, args.t, args.k)
        print(json.dumps(result.to_dict()))
    else:
        if not args.out:
            print("image probes need --out F.pgm", file=sys.stderr)
            return EXIT_USAGE
        result = probe_image(model, dim, args.t)
        try:
            Path(args.out).write_bytes(save_pgm(result.image))
        except OSError as exc:
            raise IoFailure(str(exc)) from exc
        print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_project(args) -> int:
    from .slider import project_vocabulary

    model = _words_model(args.model)
    dim = store.load_slider(args.model, args.slider)
    words = _split_csv(args.words) if args.words is not None else None
    for word, coord in project_vocabulary(model, dim, words):
        print(json.dumps({"word": word, "coord": coord}))
    return EXIT_OK


def _cmd_pointcloud(args) -> int:
    model = _words_model(args.model)
    dim = store.load_slider(args.model, args.slider) if args.slider else None
    pc = build_point_cloud(model, dim, args.max_points)
    try:
        Path(args.out).write_bytes(serialize_point_cloud(pc))
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(args) -> int:
    run_server(args.data_dir, port=args.port, bind=args.bind, static_dir=args.ui_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latentlab",
        description="Train latent models on your own data and probe them along "
        "user-defined dimensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-words", help="train a word embedding model on a corpus")
    p.add_argument("--corpus", required=True, metavar="F", help="UTF-8 text file")
    p.add_argument("--out", required=True, metavar="D", help="model directory to write")
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--min-count", type=int, default=2, dest="min_count")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--lr-start", type=float, default=0.025, dest="lr_start")
    p.add_argument("--lr-end", type=float, default=0.0001, dest="lr_end")
    p.set_defaults(func=_cmd_train_words)

    p = sub.add_parser("train-images", help="fit a latent model on two image classes")
    p.add_argument("--class-a", required=True, metavar="DIR", dest="class_a")
    p.add_argument("--class-b", required=True, metavar="DIR", dest="class_b")
    p.add_argument("--q", type=int, required=True, help="latent dimensionality")
    p.add_argument("--out", required=True, metavar="D")
    p.set_defaults(func=_cmd_train_images)

    p = sub.add_parser("slider", help="build a dimension between two word pole lists")
    p.add_argument("--model", required=True, metavar="D")
    p.add_argument("--pole-a", required=True, dest="pole_a", help='e.g. "w1,w2"')
    p.add_argument("--pole-b", required=True, dest="pole_b", help='e.g. "w3"')
    p.add_argument("--labels", default=None, help='e.g. "A,B"')
    p.set_defaults(func=_cmd_slider)

    p = sub.add_parser("probe", help="probe a model at position t along a slider")
    p.add_argument("--model", required=True, metavar="D")
    p.add_argument("--slider", required=True, metavar="ID")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--base", default=None, metavar="WORD")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", default=None, metavar="F.pgm", help="image probes only")
    p.set_defaults(func=_cmd_probe)

    p = sub.add_parser("project", help="project vocabulary words onto a slider")
    p.add_argument("--model", required=True, metavar="D")
    p.add_argument("--slider", required=True, metavar="ID")
    p.add_argument("--words", default=None, metavar="LIST", help="comma-separated")
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("pointcloud", help="export the annotated 2D point cloud")
    p.add_argument("--model", required=True, metavar="D")
    p.add_argument("--slider", default=None, metavar="ID")
    p.add_argument("--max-points", type=int, default=200, dest="max_points")
    p.add_argument("--out", required=True, metavar="F.json")
    p.set_defaults(func=_cmd_pointcloud)

    p = sub.add_parser("serve", help="run the HTTP service until interrupted")
    p.add_argument("--port", type=int, default=int(os.environ.get("PORT", "8080")))
    p.add_argument(
        "--data-dir", default=os.environ.get("DATA_DIR", "./data"), dest="data_dir"
    )
    p.add_argument("--bind", default=os.environ.get("BIND", "127.0.0.1"))
    p.add_argument(
        "--ui-dir",
        default=os.environ.get("UI_DIR"),
        dest="ui_dir",
        help="directory of built web UI assets to serve",
    )
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IoFailure, InvalidEncoding) as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, IoFailure) else EXIT_DOMAIN
    except LatentLabError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"IoFailure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
