"""Flatten an embedding space to the annotated 2D point cloud JSON.

Run:  python3 demos/pointcloud_export.py
"""

import json
from pathlib import Path

import numpy as np

from latentlab import (
    TrainingConfig,
    build_point_cloud,
    build_word_dimension,
    serialize_point_cloud,
    tokenize,
    train_embeddings,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

CITIES = ["harbor", "tram", "market", "plaza", "tower"]
FOREST = ["moss", "fern", "creek", "cedar", "owl"]

rng = np.random.default_rng(11)
corpus = "\n".join(
    " ".join(rng.choice(CITIES if i % 2 == 0 else FOREST, size=6))
    for i in range(240)
)

model = train_embeddings(tokenize(corpus), TrainingConfig(dim=20, epochs=8, seed=2))
dim = build_word_dimension(model, CITIES[:2], FOREST[:2], labels=("city", "forest"))

cloud = build_point_cloud(model, dim, max_points=50)
raw = serialize_point_cloud(cloud)
path = OUT / "pointcloud.json"
path.write_bytes(raw)
print(f"wrote {path} ({len(raw)} bytes)")

body = json.loads(raw)
print(f"\n{len(body['points'])} points; axis "
      f"{body['axis']['pole_a_label']} -> {body['axis']['pole_b_label']}")
print(f"{'word':8s} {'x':>7s} {'y':>7s} {'coord':>7s}")
for p in sorted(body["points"], key=lambda p: p["coord"]):
    print(f"{p['label']:8s} {p['x']:+7.3f} {p['y']:+7.3f} {p['coord']:+7.3f}")
