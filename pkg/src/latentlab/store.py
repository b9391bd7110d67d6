"""On-disk persistence for models and sliders.

One directory per model:

    manifest.json              metadata, shapes, CRC-32 checksums
    vocab.txt + vectors.bin    words models (input then output matrices)
    mean.bin + components.bin + singulars.bin   image models
    sliders.json               sliders built against this model

Binary payloads are raw little-endian binary32, row-major, so a store
written on any platform loads on any other.  Model writes go to a temp
directory first and are renamed into place, so an interrupted write never
corrupts an existing model.
"""

from __future__ import annotations

import json
import os
import shutil
import tempfile
import zlib
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .embedding import EmbeddingModel, TrainingConfig, Vocabulary
from .errors import (
    CorruptStore,
    InvalidConfig,
    IoFailure,
    UnknownModel,
    UnknownSlider,
    UnsupportedVersion,
)
from .imagelatent import LatentImageModel
from .slider import Dimension

FORMAT_VERSION = 1

_WORD_FILES = ("vocab.txt", "vectors.bin")
_IMAGE_FILES = ("mean.bin", "components.bin", "singulars.bin")


def _crc32(data: bytes) -> int:
    return zlib.crc32(data) & 0xFFFFFFFF


def _f32_bytes(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype="<f4").tobytes()


def _f32_list(arr: np.ndarray) -> list[float]:
    """JSON numbers that round-trip the binary32 values exactly."""
    return [float(x) for x in np.asarray(arr, dtype=np.float32)]


def _payloads(model: EmbeddingModel | LatentImageModel) -> dict[str, bytes]:
    if isinstance(model, EmbeddingModel):
        vocab_text = "".join(
            f"{w} {int(c)}\n" for w, c in zip(model.vocab.words, model.vocab.counts)
        )
        return {
            "vocab.txt": vocab_text.encode("utf-8"),
            "vectors.bin": _f32_bytes(model.input_vectors)
            + _f32_bytes(model.output_vectors),
        }
    return {
        "mean.bin": _f32_bytes(model.mean),
        "components.bin": _f32_bytes(model.components),
        "singulars.bin": _f32_bytes(model.singular_values),
    }


def _manifest(model: EmbeddingModel | LatentImageModel, payloads: dict) -> dict:
    if isinstance(model, EmbeddingModel):
        model_type = "words"
        config = asdict(model.config)
        shape = {"vocab_size": len(model.vocab), "dim": model.config.dim}
    else:
        model_type = "images"
        config = {"q": model.q}
        shape = {
            "width": model.width,
            "height": model.height,
            "q": model.q,
            "n_train": model.n_train,
        }
    return {
        "format_version": FORMAT_VERSION,
        "model_type": model_type,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "config": config,
        "shape": shape,
        "checksum": {name: _crc32(data) for name, data in payloads.items()},
    }


def save_model(
    model: EmbeddingModel | LatentImageModel, directory: str | Path
) -> None:
    """Persist a model atomically into ``directory``.

    An existing model directory is replaced only after the new one is fully
    written; sliders stored with the old model are carried over.

    Raises:
        IoFailure: if the filesystem refuses any step.
    """
    directory = Path(directory)
    payloads = _payloads(model)
    manifest = _manifest(model, payloads)
    try:
        directory.parent.mkdir(parents=True, exist_ok=True)
        tmp = Path(
            tempfile.mkdtemp(prefix=directory.name + ".tmp-", dir=directory.parent)
        )
        try:
            for name, data in payloads.items():
                (tmp / name).write_bytes(data)
            (tmp / "manifest.json").write_text(
                json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
            )
            if directory.exists():
                sliders = directory / "sliders.json"
                if sliders.exists():
                    shutil.copy2(sliders, tmp / "sliders.json")
                old = directory.with_name(directory.name + ".old-" + os.urandom(4).hex())
                os.rename(directory, old)
                os.rename(tmp, directory)
                shutil.rmtree(old)
            else:
                os.rename(tmp, directory)
        except BaseException:
            shutil.rmtree(tmp, ignore_errors=True)
            raise
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def _read_manifest(directory: Path) -> dict:
    path = directory / "manifest.json"
    if not path.is_file():
        raise IoFailure(f"no manifest.json in {directory}")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CorruptStore(f"unreadable manifest: {exc}") from exc
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format_version {version}, reader supports 1")
    return manifest


def _read_payload(directory: Path, name: str, checksums: dict) -> bytes:
    path = directory / name
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    if name not in checksums:
        raise CorruptStore(f"manifest has no checksum for {name}")
    if _crc32(data) != checksums[name]:
        raise CorruptStore(f"checksum mismatch for {name}")
    return data


def load_model(directory: str | Path) -> EmbeddingModel | LatentImageModel:
    """Load and validate a stored model.

    Raises:
        IoFailure: missing directory or files.
        UnsupportedVersion: written by an unknown format version.
        CorruptStore: checksum or shape mismatch.
    """
    directory = Path(directory)
    manifest = _read_manifest(directory)
    checksums = manifest.get("checksum", {})
    model_type = manifest.get("model_type")
    try:
        if model_type == "words":
            return _load_words(directory, manifest, checksums)
        if model_type == "images":
            return _load_images(directory, manifest, checksums)
    except (ValueError, KeyError, TypeError, InvalidConfig) as exc:
        raise CorruptStore(f"invalid stored model: {exc}") from exc
    raise CorruptStore(f"unknown model_type {model_type!r}")


def _load_words(directory: Path, manifest: dict, checksums: dict) -> EmbeddingModel:
    shape = manifest["shape"]
    nv, dim = int(shape["vocab_size"]), int(shape["dim"])
    words, counts = [], []
    for line in _read_payload(directory, "vocab.txt", checksums).decode(
        "utf-8"
    ).splitlines():
        word, _, count = line.rpartition(" ")
        words.append(word)
        counts.append(int(count))
    if len(words) != nv:
        raise CorruptStore(f"vocab.txt has {len(words)} words, manifest says {nv}")
    raw = _read_payload(directory, "vectors.bin", checksums)
    expect = 2 * nv * dim * 4
    if len(raw) != expect:
        raise CorruptStore(f"vectors.bin is {len(raw)} bytes, expected {expect}")
    matrices = np.frombuffer(raw, dtype="<f4").reshape(2, nv, dim)
    config = TrainingConfig(**manifest["config"])
    return EmbeddingModel(
        Vocabulary(words, np.array(counts)), matrices[0], matrices[1], config
    )


def _load_images(directory: Path, manifest: dict, checksums: dict) -> LatentImageModel:
    shape = manifest["shape"]
    width, height, q = int(shape["width"]), int(shape["height"]), int(shape["q"])
    n = width * height
    mean = np.frombuffer(_read_payload(directory, "mean.bin", checksums), dtype="<f4")
    comps = np.frombuffer(
        _read_payload(directory, "components.bin", checksums), dtype="<f4"
    )
    sing = np.frombuffer(
        _read_payload(directory, "singulars.bin", checksums), dtype="<f4"
    )
    if mean.shape != (n,) or comps.shape != (q * n,) or sing.shape != (q,):
        raise CorruptStore("payload sizes do not match the manifest shape")
    n_train = int(shape.get("n_train") or 0)
    return LatentImageModel(width, height, mean, comps.reshape(q, n), sing, n_train)


def read_manifest(directory: str | Path) -> dict:
    """The validated manifest of a stored model (for listings)."""
    return _read_manifest(Path(directory))


def _require_model_dir(model_directory: Path) -> None:
    if not (model_directory / "manifest.json").is_file():
        raise UnknownModel(str(model_directory))


def _slider_records(model_directory: Path) -> list[dict]:
    path = model_directory / "sliders.json"
    if not path.is_file():
        return []
    try:
        records = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CorruptStore(f"unreadable sliders.json: {exc}") from exc
    if not isinstance(records, list):
        raise CorruptStore("sliders.json must hold a list")
    return records


def save_slider(
    dimension: Dimension, model_directory: str | Path, slider_id: str | None = None
) -> str:
    """Append a slider to the model's sliders.json and return its id.

    Auto-assigned ids are "slider-1", "slider-2", ... in creation order; an
    explicit id replaces any previous slider with the same id.

    Raises:
        UnknownModel: if the directory holds no model.
        IoFailure: on filesystem errors.
    """
    model_directory = Path(model_directory)
    _require_model_dir(model_directory)
    records = _slider_records(model_directory)
    existing = {r["id"] for r in records}
    if slider_id is None:
        n = len(records) + 1
        while f"slider-{n}" in existing:
            n += 1
        slider_id = f"slider-{n}"
    record = {
        "id": slider_id,
        "pole_a_label": dimension.pole_a_label,
        "pole_b_label": dimension.pole_b_label,
        "pole_a_items": list(dimension.pole_a_items),
        "pole_b_items": list(dimension.pole_b_items),
        "axis_unit": _f32_list(dimension.axis_unit),
        "midpoint": _f32_list(dimension.midpoint),
        "half_span": float(np.float32(dimension.half_span)),
    }
    if slider_id in existing:
        records = [record if r["id"] == slider_id else r for r in records]
    else:
        records.append(record)
    try:
        fd, tmp = tempfile.mkstemp(prefix="sliders-", dir=model_directory)
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(records, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, model_directory / "sliders.json")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return slider_id


def list_sliders(model_directory: str | Path) -> list[str]:
    """Slider ids stored with a model, in creation order.

    Raises:
        UnknownModel: if the directory holds no model.
    """
    model_directory = Path(model_directory)
    _require_model_dir(model_directory)
    return [r["id"] for r in _slider_records(model_directory)]


def load_slider(model_directory: str | Path, slider_id: str) -> Dimension:
    """Reconstruct a stored slider.

    The axis is renormalized after its binary32 round trip so the unit-norm
    invariant holds exactly again.

    Raises:
        UnknownModel: if the directory holds no model.
        UnknownSlider: if no slider has the given id.
    """
    model_directory = Path(model_directory)
    _require_model_dir(model_directory)
    for record in _slider_records(model_directory):
        if record["id"] == slider_id:
            axis = np.asarray(record["axis_unit"], dtype=np.float64)
            norm = np.linalg.norm(axis)
            if norm == 0.0:
                raise CorruptStore(f"slider {slider_id} has a zero axis")
            return Dimension(
                axis_unit=axis / norm,
                midpoint=np.asarray(record["midpoint"], dtype=np.float64),
                half_span=float(record["half_span"]),
                pole_a_label=record["pole_a_label"],
                pole_b_label=record["pole_b_label"],
                pole_a_items=tuple(record["pole_a_items"]),
                pole_b_items=tuple(record["pole_b_items"]),
                model_id=model_directory.name,
            )
    raise UnknownSlider(slider_id)
