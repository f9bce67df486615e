import csv

import numpy as np
import pytest

POS_WORDS = ["great", "good", "excellent", "happy", "wonderful", "love",
             "enjoy", "fantastic", "pleasant", "delight"]
NEG_WORDS = ["bad", "terrible", "awful", "sad", "horrible", "hate",
             "dislike", "poor", "dreadful", "gloomy"]
SHARED_WORDS = ["movie", "film", "plot", "actor", "scene", "story", "music",
                "screen", "ticket", "cinema", "the", "a", "was", "and", "it"]


def make_synthetic_corpus(path, n_docs=200, seed=0, noise=0.1):
    """Deterministic 2-class bag-of-words corpus: class words mixed with
    shared filler, plus a little cross-class noise."""
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []
    for i in range(n_docs):
        label = "pos" if i % 2 == 0 else "neg"
        own = POS_WORDS if label == "pos" else NEG_WORDS
        other = NEG_WORDS if label == "pos" else POS_WORDS
        words = []
        for _ in range(int(rng.integers(8, 17))):
            u = rng.random()
            if u < 0.55:
                words.append(SHARED_WORDS[rng.integers(len(SHARED_WORDS))])
            elif u < 1 - noise:
                words.append(own[rng.integers(len(own))])
            else:
                words.append(other[rng.integers(len(other))])
        rows.append((f"d{i}", " ".join(words), label))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "text", "label"])
        writer.writerows(rows)
    return path


@pytest.fixture(scope="session")
def corpus_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "synthetic.csv"
    return str(make_synthetic_corpus(path))
