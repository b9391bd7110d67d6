"""Domain errors shared by every latentlab module.

Each error exposes a stable ``code`` (its class name) that the HTTP service
uses as the machine-readable error field and the CLI prints on stderr.
"""

from __future__ import annotations


class LatentLabError(Exception):
    """Base class for all latentlab domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidEncoding(LatentLabError):
    """Input bytes are not valid UTF-8."""


class EmptyVocabulary(LatentLabError):
    """No token survived the vocabulary count threshold."""


class InvalidConfig(LatentLabError):
    """A training or fit parameter violates its bounds."""


class DimensionMismatch(LatentLabError):
    """Vectors, images or matrices disagree on their dimensions."""


class UnknownWord(LatentLabError):
    """A requested word is not in the model vocabulary."""

    def __init__(self, word: str):
        super().__init__(word)
        self.word = word


class ZeroVector(LatentLabError):
    """An operation that needs a direction received the zero vector."""


class DegenerateAxis(LatentLabError):
    """The two pole centroids coincide; no axis can be built."""


class MalformedPgm(LatentLabError):
    """Bytes do not parse as a binary (P5) PGM image with maxval 255."""


class InsufficientData(LatentLabError):
    """Too few samples, or a latent size out of range for the data."""


class CorruptStore(LatentLabError):
    """A stored model failed its checksum or shape validation."""


class UnsupportedVersion(LatentLabError):
    """The store was written by a newer, unknown format version."""


class UnknownModel(LatentLabError):
    """No model exists at the given location or id."""


class UnknownSlider(LatentLabError):
    """The model has no slider with the given id."""


class IoFailure(LatentLabError):
    """An underlying filesystem operation failed."""
