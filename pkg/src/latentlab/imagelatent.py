"""Images pipeline: a linear (PCA / eigenimage) latent model over grayscale images.

Images are fixed-size grayscale rasters with pixels in [0, 1], loaded from
binary PGM (P5) files.  ``fit_latent_model`` learns a mean image plus
orthonormal principal components; ``encode``/``decode`` move between pixel
space and the latent space.  The fit/encode/decode boundary is the seam
where a deeper generative backend could later be swapped in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._pca import principal_components
from .errors import DimensionMismatch, InsufficientData, MalformedPgm


@dataclass
class Image:
    """A grayscale image: row-major pixels in [0, 1], length width*height."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"bad image size {self.width}x{self.height}")
        self.pixels = np.ascontiguousarray(self.pixels, dtype=np.float64)
        if self.pixels.shape != (self.width * self.height,):
            raise DimensionMismatch(
                f"expected {self.width * self.height} pixels, got {self.pixels.shape}"
            )
        if self.pixels.min() < 0.0 or self.pixels.max() > 1.0:
            raise ValueError("pixels must lie in [0, 1]")
        self.pixels.flags.writeable = False

    @property
    def size(self) -> tuple[int, int]:
        return (self.width, self.height)


def _next_header_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Next whitespace-delimited PGM header token, skipping # comments."""
    n = len(data)
    while pos < n:
        ch = data[pos : pos + 1]
        if ch == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise MalformedPgm("truncated header")
    return data[start:pos], pos


def load_pgm(data: bytes) -> Image:
    """Parse a binary PGM (magic P5, maxval 255) into an Image.

    Raises:
        MalformedPgm: on a bad magic, a maxval other than 255, or truncation.
    """
    if not isinstance(data, (bytes, bytearray)):
        raise MalformedPgm("expected bytes")
    data = bytes(data)
    magic, pos = _next_header_token(data, 0)
    if magic != b"P5":
        raise MalformedPgm(f"bad magic {magic!r}, expected P5")
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _next_header_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError as exc:
            raise MalformedPgm(f"non-numeric {name}: {token!r}") from exc
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise MalformedPgm(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise MalformedPgm(f"maxval must be 255, got {maxval}")
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise MalformedPgm("missing raster separator")
    pos += 1
    n = width * height
    raster = data[pos : pos + n]
    if len(raster) < n:
        raise MalformedPgm(f"expected {n} raster bytes, got {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8).astype(np.float64) / 255.0
    return Image(width, height, pixels)


def save_pgm(image: Image) -> bytes:
    """Serialize an Image as binary PGM; pixels are rounded to 8 bits."""
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    raster = np.rint(image.pixels * 255.0).clip(0, 255).astype(np.uint8)
    return header + raster.tobytes()


@dataclass
class LatentImageModel:
    """Mean image plus orthonormal principal components, all float32.

    Component rows are sign-normalized (largest-|entry| positive, ties to
    the lowest index) so the decomposition is deterministic.
    """

    width: int
    height: int
    mean: np.ndarray  # (n,) with n = width*height
    components: np.ndarray  # (q, n), rows orthonormal
    singular_values: np.ndarray  # (q,), non-increasing
    n_train: int = 0  # images the model was fitted on

    def __post_init__(self):
        self.mean = np.ascontiguousarray(self.mean, dtype=np.float32)
        self.components = np.ascontiguousarray(self.components, dtype=np.float32)
        self.singular_values = np.ascontiguousarray(
            self.singular_values, dtype=np.float32
        )
        n = self.width * self.height
        if self.mean.shape != (n,) or self.components.shape[1:] != (n,):
            raise DimensionMismatch("mean/components do not match width*height")
        if self.singular_values.shape != (self.components.shape[0],):
            raise DimensionMismatch("one singular value per component required")
        for arr in (self.mean, self.components, self.singular_values):
            arr.flags.writeable = False

    @property
    def q(self) -> int:
        return self.components.shape[0]

    @property
    def n_pixels(self) -> int:
        return self.width * self.height


def fit_latent_model(images: list[Image], q: int) -> LatentImageModel:
    """Fit the q-dimensional PCA latent model to ``images``.

    Requires at least two images of identical size and
    1 <= q <= min(N-1, width*height).

    Raises:
        InsufficientData: if N < 2 or q is out of range.
        DimensionMismatch: if the images disagree on size.
    """
    if len(images) < 2:
        raise InsufficientData(f"need at least 2 images, got {len(images)}")
    width, height = images[0].size
    for img in images[1:]:
        if img.size != (width, height):
            raise DimensionMismatch(
                f"image sizes differ: {width}x{height} vs {img.width}x{img.height}"
            )
    n = width * height
    q_max = min(len(images) - 1, n)
    if not (1 <= q <= q_max):
        raise InsufficientData(f"q must be in [1, {q_max}], got {q}")
    rows = np.stack([img.pixels for img in images])
    mean, components, singulars = principal_components(rows, q)
    return LatentImageModel(width, height, mean, components, singulars, len(images))


def encode(model: LatentImageModel, image: Image) -> np.ndarray:
    """Project an image into the latent space: z = components @ (pixels - mean).

    Raises:
        DimensionMismatch: if the image size does not match the model.
    """
    if image.size != (model.width, model.height):
        raise DimensionMismatch(
            f"model is {model.width}x{model.height}, image is "
            f"{image.width}x{image.height}"
        )
    return model.components @ (image.pixels - model.mean)


def decode_raw(model: LatentImageModel, z: np.ndarray) -> np.ndarray:
    """Reconstruct pixel values without clamping: mean + components.T @ z."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (model.q,):
        raise DimensionMismatch(f"latent must have length {model.q}, got {z.shape}")
    return model.mean + model.components.T @ z


def decode(model: LatentImageModel, z: np.ndarray) -> Image:
    """Decode a latent vector to an Image, clamping pixels into [0, 1].

    Probing far along an axis saturates rather than renormalizing.
    """
    return Image(model.width, model.height, np.clip(decode_raw(model, z), 0.0, 1.0))
