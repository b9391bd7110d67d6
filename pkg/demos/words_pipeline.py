"""Walkthrough of the words pipeline: corpus -> embeddings -> slider -> probes.

Run:  python3 demos/words_pipeline.py
"""

import numpy as np

from latentlab import (
    TrainingConfig,
    build_word_dimension,
    coordinate,
    nearest_neighbors,
    probe_words,
    project_vocabulary,
    tokenize,
    train_embeddings,
    vector,
)

# A tiny synthetic corpus with two planted topics.  Real usage points
# tokenize() at a text file of your own.
HOT = ["sun", "fire", "heat", "summer", "warm"]
COLD = ["ice", "snow", "frost", "winter", "chill"]

rng = np.random.default_rng(7)
sentences = []
for i in range(300):
    topic = HOT if i % 2 == 0 else COLD
    sentences.append(" ".join(rng.choice(topic, size=7)))
corpus = "\n".join(sentences)

print("== training ==")
config = TrainingConfig(dim=24, epochs=10, seed=1)
model = train_embeddings(tokenize(corpus), config)
print(f"vocabulary ({len(model.vocab)} words): {model.vocab.words}")
print(f"mean loss per epoch: {[round(x, 3) for x in model.epoch_losses]}")

print("\n== nearest neighbors of 'sun' ==")
for word, sim in nearest_neighbors(model, vector(model, "sun"), k=4,
                                   exclude={"sun"}):
    print(f"  {word:8s} {sim:+.3f}")

print("\n== a hot/cold slider ==")
dim = build_word_dimension(model, HOT[:3], COLD[:3], labels=("hot", "cold"))
print(f"axis through {dim.pole_a_label!r} -> {dim.pole_b_label!r}, "
      f"half_span {dim.half_span:.3f}")

print("\n== every word's position on the slider ==")
for word, coord in project_vocabulary(model, dim):
    marker = "-" * int((coord + 1.3) * 12)
    print(f"  {word:8s} {coord:+.3f} {marker}")

print("\n== probing: what lives at t for a fixed base word? ==")
for t in (-1.0, 0.0, 1.0):
    result = probe_words(model, dim, base="summer", t=t, k=3)
    words = ", ".join(f"{a.word} ({a.similarity:.2f})"
                      for a in result.associations)
    print(f"  t={t:+.1f}: {words}")

print("\nthe probe point itself sits exactly at the requested position:")
result = probe_words(model, dim, base="summer", t=0.6, k=1)
print(f"  coordinate(probe_point) = {coordinate(dim, result.probe_point):+.6f}")
