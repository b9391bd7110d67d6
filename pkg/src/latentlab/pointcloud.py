"""Flatten an embedding space to 2D and emit an annotated point cloud.

The projection is plain PCA (chosen over nonlinear embeddings for
determinism): the top-2 principal axes of the selected word vectors.  The
basis and centering mean are kept on the PointCloud so extra points can be
projected consistently.  Serialization is byte-stable: same model, dimension
and max_points always produce identical JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._pca import principal_components
from .embedding import EmbeddingModel, vector
from .errors import InsufficientData
from .slider import Dimension, coordinate


@dataclass
class CloudPoint:
    label: str
    x: float
    y: float
    coord: float | None = None  # slider coordinate, when a dimension is given


@dataclass
class AxisAnnotation:
    """Projected pole centroids, for drawing the slider on the cloud."""

    pole_a_label: str
    pole_b_label: str
    a_xy: tuple[float, float]
    b_xy: tuple[float, float]


@dataclass
class PointCloud:
    points: list[CloudPoint]
    axis_annotation: AxisAnnotation | None
    basis: np.ndarray  # (2, d) orthonormal projection vectors
    mean: np.ndarray  # (d,) projection centering vector


def pca_2d(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-2 principal components of mean-centered rows.

    Returns (mean (d,), basis (2, d), coords (N, 2)) where coords are the
    centered rows projected on the basis.  Rows must be at least 3 points
    of dimension >= 2.

    Raises:
        InsufficientData: if N < 3 or d < 2.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 3 or rows.shape[1] < 2:
        raise InsufficientData(f"need at least 3 rows of dim >= 2, got {rows.shape}")
    mean, basis, _ = principal_components(rows, 2)
    return mean, basis, (rows - mean) @ basis.T


def build_point_cloud(
    model: EmbeddingModel,
    dim: Dimension | None = None,
    max_points: int = 200,
) -> PointCloud:
    """Project the most frequent vocabulary words onto their top-2 PCA plane.

    The vocabulary is already ordered most-frequent-first (ties by first
    corpus occurrence), so selection is a prefix.  When a dimension is
    given, every point carries its slider coordinate and the projected pole
    centroids are attached as the axis annotation.

    Raises:
        InsufficientData: if the vocabulary has fewer than 3 words.
    """
    if max_points < 3:
        raise ValueError(f"max_points must be >= 3, got {max_points}")
    n = min(max_points, len(model.vocab))
    if n < 3:
        raise InsufficientData(f"vocabulary has {len(model.vocab)} words, need 3")
    words = model.vocab.words[:n]
    rows = model.input_vectors[:n].astype(np.float64)
    mean, basis, coords = pca_2d(rows)

    points = []
    for i, word in enumerate(words):
        c = coordinate(dim, vector(model, word)) if dim is not None else None
        points.append(CloudPoint(word, float(coords[i, 0]), float(coords[i, 1]), c))

    annotation = None
    if dim is not None:
        a_xy = basis @ (dim.centroid_a() - mean)
        b_xy = basis @ (dim.centroid_b() - mean)
        annotation = AxisAnnotation(
            dim.pole_a_label,
            dim.pole_b_label,
            (float(a_xy[0]), float(a_xy[1])),
            (float(b_xy[0]), float(b_xy[1])),
        )
    return PointCloud(points, annotation, basis, mean)


def _f32(value: float) -> float:
    """Round to binary32 and back, so the JSON text round-trips float32."""
    return float(np.float32(value))


def serialize_point_cloud(pc: PointCloud) -> bytes:
    """UTF-8 JSON for a point cloud, byte-stable across runs.

    Schema: {"points": [{"label", "x", "y", "coord"}...], "axis": {...}|null}
    with fixed key order; absent optionals serialize as null, and all
    numbers carry enough digits to round-trip their binary32 values.
    """
    obj = {
        "points": [
            {
                "label": p.label,
                "x": _f32(p.x),
                "y": _f32(p.y),
                "coord": None if p.coord is None else _f32(p.coord),
            }
            for p in pc.points
        ],
        "axis": None
        if pc.axis_annotation is None
        else {
            "pole_a_label": pc.axis_annotation.pole_a_label,
            "pole_b_label": pc.axis_annotation.pole_b_label,
            "a_xy": [_f32(v) for v in pc.axis_annotation.a_xy],
            "b_xy": [_f32(v) for v in pc.axis_annotation.b_xy],
        },
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
