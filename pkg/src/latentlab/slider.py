"""Slider engine: user-defined dimensions through a latent space, and probes.

A Dimension is built from two pole sets (word lists or image classes).  Its
axis runs from the pole-A centroid to the pole-B centroid; positions along
it are normalized so the centroids sit at t = -1 and t = +1, and t outside
[-1, 1] extrapolates deliberately.

Probing sets the anchor's axis coordinate to the requested t while leaving
all components orthogonal to the axis untouched, then asks the model for an
output there: ranked word associations for the words pipeline, a decoded
image for the images pipeline.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import imagelatent
from .embedding import EmbeddingModel, nearest_neighbors, vector
from .errors import DegenerateAxis, DimensionMismatch, UnknownWord
from .imagelatent import Image, LatentImageModel

# Pole centroids closer than this cannot define a direction.
_MIN_SPAN = 1e-9


@dataclass
class Dimension:
    """A user-constructed slider through a latent or embedding space."""

    axis_unit: np.ndarray  # unit vector, float64
    midpoint: np.ndarray  # mean of the two pole centroids
    half_span: float  # half the distance between pole centroids
    pole_a_label: str
    pole_b_label: str
    pole_a_items: tuple[str, ...]
    pole_b_items: tuple[str, ...]
    model_id: str | None = None

    def __post_init__(self):
        self.axis_unit = np.ascontiguousarray(self.axis_unit, dtype=np.float64)
        self.midpoint = np.ascontiguousarray(self.midpoint, dtype=np.float64)
        self.half_span = float(self.half_span)
        if self.axis_unit.shape != self.midpoint.shape or self.axis_unit.ndim != 1:
            raise DimensionMismatch("axis_unit and midpoint must be equal-length vectors")
        if abs(np.linalg.norm(self.axis_unit) - 1.0) > 1e-9:
            raise ValueError("axis_unit must have unit norm")
        if self.half_span <= 0.0:
            raise DegenerateAxis("half_span must be positive")
        self.pole_a_items = tuple(self.pole_a_items)
        self.pole_b_items = tuple(self.pole_b_items)
        self.axis_unit.flags.writeable = False
        self.midpoint.flags.writeable = False

    @property
    def space_dim(self) -> int:
        return self.axis_unit.shape[0]

    def centroid_a(self) -> np.ndarray:
        return self.midpoint - self.half_span * self.axis_unit

    def centroid_b(self) -> np.ndarray:
        return self.midpoint + self.half_span * self.axis_unit


class Association(NamedTuple):
    """One ranked word association from a probe."""

    word: str
    similarity: float
    coord: float  # the word's own normalized coordinate on the dimension


@dataclass
class ProbeResult:
    """Output of probing a dimension at position t.

    Exactly one of ``associations`` (words pipeline) or ``image`` (images
    pipeline) is set.
    """

    t: float
    probe_point: np.ndarray
    associations: list[Association] | None = None
    image: Image | None = None

    def __post_init__(self):
        if (self.associations is None) == (self.image is None):
            raise ValueError("exactly one of associations/image must be present")

    def to_dict(self) -> dict:
        """JSON-ready form; the image variant carries base64 PGM bytes."""
        body: dict = {
            "t": float(self.t),
            "probe_point": [float(x) for x in self.probe_point],
        }
        if self.associations is not None:
            body["associations"] = [
                {"word": a.word, "similarity": a.similarity, "coord": a.coord}
                for a in self.associations
            ]
        else:
            body["image_pgm"] = base64.b64encode(
                imagelatent.save_pgm(self.image)
            ).decode("ascii")
        return body


def _dimension_between(
    centroid_a: np.ndarray,
    centroid_b: np.ndarray,
    labels: tuple[str, str],
    items_a: tuple[str, ...],
    items_b: tuple[str, ...],
    model_id: str | None,
) -> Dimension:
    delta = centroid_b - centroid_a
    span = float(np.linalg.norm(delta))
    if span < _MIN_SPAN:
        raise DegenerateAxis("pole centroids coincide")
    return Dimension(
        axis_unit=delta / span,
        midpoint=(centroid_a + centroid_b) / 2.0,
        half_span=span / 2.0,
        pole_a_label=labels[0],
        pole_b_label=labels[1],
        pole_a_items=items_a,
        pole_b_items=items_b,
        model_id=model_id,
    )


def build_word_dimension(
    model: EmbeddingModel,
    pole_a: list[str],
    pole_b: list[str],
    labels: tuple[str, str] | None = None,
    model_id: str | None = None,
) -> Dimension:
    """Build a dimension between the centroids of two word lists.

    Centroids are arithmetic means of the raw input vectors (no per-word
    normalization).  Default labels join each pole's words with commas.

    Raises:
        UnknownWord: for the first word (pole A scanned first) not in vocab.
        DegenerateAxis: if the centroids coincide.
    """
    if not pole_a or not pole_b:
        raise ValueError("both poles must be non-empty")
    for word in list(pole_a) + list(pole_b):
        if word not in model.vocab:
            raise UnknownWord(word)
    cen_a = np.mean([vector(model, w) for w in pole_a], axis=0, dtype=np.float64)
    cen_b = np.mean([vector(model, w) for w in pole_b], axis=0, dtype=np.float64)
    if labels is None:
        labels = (",".join(pole_a), ",".join(pole_b))
    return _dimension_between(
        cen_a, cen_b, labels, tuple(pole_a), tuple(pole_b), model_id
    )


def build_image_dimension(
    model: LatentImageModel,
    class_a: list[Image],
    class_b: list[Image],
    labels: tuple[str, str] = ("a", "b"),
    item_ids: tuple[list[str], list[str]] | None = None,
    model_id: str | None = None,
) -> Dimension:
    """Build a dimension between two image classes, in latent space.

    Each class centroid is the mean of ``encode(image)`` over the class.

    Raises:
        DimensionMismatch: if an image does not match the model size.
        DegenerateAxis: if the class centroids coincide in latent space.
    """
    if not class_a or not class_b:
        raise ValueError("both classes must be non-empty")
    cen_a = np.mean([imagelatent.encode(model, im) for im in class_a], axis=0)
    cen_b = np.mean([imagelatent.encode(model, im) for im in class_b], axis=0)
    if item_ids is None:
        ids_a = [f"a{i}" for i in range(len(class_a))]
        ids_b = [f"b{i}" for i in range(len(class_b))]
    else:
        ids_a, ids_b = list(item_ids[0]), list(item_ids[1])
    return _dimension_between(
        cen_a, cen_b, labels, tuple(ids_a), tuple(ids_b), model_id
    )


def coordinate(dim: Dimension, x: np.ndarray) -> float:
    """Normalized coordinate of x: ((x - midpoint) . axis_unit) / half_span.

    The pole-A centroid maps to -1, the pole-B centroid to +1.

    Raises:
        DimensionMismatch: if x has the wrong dimensionality.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != dim.axis_unit.shape:
        raise DimensionMismatch(f"expected {dim.axis_unit.shape}, got {x.shape}")
    return float((x - dim.midpoint) @ dim.axis_unit / dim.half_span)


def _probe_point(dim: Dimension, anchor: np.ndarray, t: float) -> np.ndarray:
    """Move the anchor's axis coordinate to t, orthogonal components untouched."""
    anchor = np.asarray(anchor, dtype=np.float64)
    if anchor.shape != dim.axis_unit.shape:
        raise DimensionMismatch(f"expected {dim.axis_unit.shape}, got {anchor.shape}")
    current = (anchor - dim.midpoint) @ dim.axis_unit
    return anchor + (t * dim.half_span - current) * dim.axis_unit


def probe_words(
    model: EmbeddingModel, dim: Dimension, base: str, t: float, k: int = 10
) -> ProbeResult:
    """Probe the words model at position t along a dimension.

    The base word's vector is carried to coordinate t along the axis and
    the nearest vocabulary words to that point are returned, each annotated
    with its own coordinate.  The base word is excluded from its list; pole
    words are not (seeing them near the ends is informative).

    Raises:
        UnknownWord: if ``base`` is not in the vocabulary.
        ZeroVector: if the probe point is exactly the zero vector.
    """
    v_base = vector(model, base)
    point = _probe_point(dim, v_base, t)
    hits = nearest_neighbors(model, point, k, exclude={base})
    associations = [
        Association(w, sim, coordinate(dim, vector(model, w))) for w, sim in hits
    ]
    return ProbeResult(t=float(t), probe_point=point, associations=associations)


def probe_image(
    model: LatentImageModel,
    dim: Dimension,
    t: float,
    base: Image | None = None,
) -> ProbeResult:
    """Probe the images model at position t along a dimension.

    The anchor is ``encode(base)`` when a base image is given, otherwise the
    dimension midpoint; the probe point is decoded back to an image.

    Raises:
        DimensionMismatch: if ``base`` does not match the model size.
    """
    z0 = imagelatent.encode(model, base) if base is not None else dim.midpoint
    point = _probe_point(dim, z0, t)
    return ProbeResult(
        t=float(t), probe_point=point, image=imagelatent.decode(model, point)
    )


def project_vocabulary(
    model: EmbeddingModel, dim: Dimension, words: list[str] | None = None
) -> list[tuple[str, float]]:
    """Each word paired with its coordinate, sorted ascending.

    Defaults to the whole vocabulary.  Ties are broken by vocabulary index,
    which exposes where the model places every word on the user's axis.

    Raises:
        UnknownWord: if an explicit word is not in the vocabulary.
    """
    if words is None:
        words = model.vocab.words
    else:
        for word in words:
            if word not in model.vocab:
                raise UnknownWord(word)
    pairs = [
        (word, coordinate(dim, vector(model, word)), model.vocab.index[word])
        for word in words
    ]
    pairs.sort(key=lambda wci: (wci[1], wci[2]))
    return [(word, coord) for word, coord, _ in pairs]
