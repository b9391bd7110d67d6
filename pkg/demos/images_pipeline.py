"""Walkthrough of the images pipeline: two classes -> latent model -> probes.

Writes a strip of probed PGM images into demos/out/.
Run:  python3 demos/images_pipeline.py
"""

from pathlib import Path

import numpy as np

from latentlab import (
    Image,
    build_image_dimension,
    coordinate,
    encode,
    fit_latent_model,
    probe_image,
    save_pgm,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# Two synthetic 8x8 classes: horizontal gradients running opposite ways,
# with a little per-image variation.  Real usage loads PGM files via load_pgm.
rng = np.random.default_rng(3)


def gradient_image(direction: int) -> Image:
    ramp = np.linspace(0.15, 0.85, 8)[::direction]
    pixels = np.tile(ramp, (8, 1)).ravel()
    pixels = np.clip(pixels + rng.normal(0, 0.03, 64), 0, 1)
    return Image(8, 8, pixels)


class_a = [gradient_image(+1) for _ in range(5)]  # dark left
class_b = [gradient_image(-1) for _ in range(5)]  # dark right

print("== fitting the latent model on the union of both classes ==")
model = fit_latent_model(class_a + class_b, q=6)
print(f"{model.n_train} images, {model.width}x{model.height}, q={model.q}")
print(f"singular values: {[round(float(s), 3) for s in model.singular_values]}")

print("\n== the class axis ==")
dim = build_image_dimension(model, class_a, class_b,
                            labels=("dark-left", "dark-right"))
for name, imgs in (("A", class_a), ("B", class_b)):
    coords = [coordinate(dim, encode(model, im)) for im in imgs]
    print(f"class {name} coordinates: {[round(c, 3) for c in coords]}")

print("\n== generating images along the axis ==")
for t in (-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5):
    result = probe_image(model, dim, t=t)
    path = OUT / f"probe_t{t:+.1f}.pgm"
    path.write_bytes(save_pgm(result.image))
    left = result.image.pixels.reshape(8, 8)[:, :4].mean()
    right = result.image.pixels.reshape(8, 8)[:, 4:].mean()
    print(f"  t={t:+.1f} -> {path.name}  (left mean {left:.2f}, "
          f"right mean {right:.2f})")

print(f"\nwrote probe strip to {OUT}/")
