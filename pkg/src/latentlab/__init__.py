"""latentlab: train small latent models on your own data and explore them.

Two pipelines share one workflow: a words pipeline (skip-gram embeddings
over a text corpus) and an images pipeline (a PCA latent model over
grayscale image classes).  On either one you can build sliders -- user
defined dimensions between two pole sets -- probe the model for outputs at
any position along a slider, and flatten the space into an annotated 2D
point cloud.

Core entry points:

    tokenize, build_vocab, train_embeddings, nearest_neighbors
    load_pgm, fit_latent_model, encode, decode
    build_word_dimension, build_image_dimension, probe_words, probe_image
    coordinate, project_vocabulary
    build_point_cloud, serialize_point_cloud
    save_model, load_model, save_slider, load_slider

The same functionality is reachable from the ``latentlab`` CLI and the HTTP
service (``latentlab serve``).
"""

from . import errors
from .embedding import (
    EmbeddingModel,
    TrainingConfig,
    Vocabulary,
    build_vocab,
    cosine,
    nearest_neighbors,
    negative_table,
    sgns_step,
    tokenize,
    train_embeddings,
    vector,
)
from .imagelatent import (
    Image,
    LatentImageModel,
    decode,
    decode_raw,
    encode,
    fit_latent_model,
    load_pgm,
    save_pgm,
)
from .pointcloud import (
    AxisAnnotation,
    CloudPoint,
    PointCloud,
    build_point_cloud,
    pca_2d,
    serialize_point_cloud,
)
from .slider import (
    Association,
    Dimension,
    ProbeResult,
    build_image_dimension,
    build_word_dimension,
    coordinate,
    probe_image,
    probe_words,
    project_vocabulary,
)
from .store import (
    list_sliders,
    load_model,
    load_slider,
    read_manifest,
    save_model,
    save_slider,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "EmbeddingModel",
    "TrainingConfig",
    "Vocabulary",
    "build_vocab",
    "cosine",
    "nearest_neighbors",
    "negative_table",
    "sgns_step",
    "tokenize",
    "train_embeddings",
    "vector",
    "Image",
    "LatentImageModel",
    "decode",
    "decode_raw",
    "encode",
    "fit_latent_model",
    "load_pgm",
    "save_pgm",
    "AxisAnnotation",
    "CloudPoint",
    "PointCloud",
    "build_point_cloud",
    "pca_2d",
    "serialize_point_cloud",
    "Association",
    "Dimension",
    "ProbeResult",
    "build_image_dimension",
    "build_word_dimension",
    "coordinate",
    "probe_image",
    "probe_words",
    "project_vocabulary",
    "list_sliders",
    "load_model",
    "load_slider",
    "read_manifest",
    "save_model",
    "save_slider",
    "__version__",
]
