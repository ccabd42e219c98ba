"""Tiny 1-nearest-neighbor baseline for end-to-end sanity checks.

Deliberately not a serious classifier: it exists so augmentation effects can
be demonstrated without a deep-learning stack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, Series


@dataclass(frozen=True)
class PredictionSet:
    predicted: np.ndarray
    actual: np.ndarray

    def __post_init__(self):
        if self.predicted.shape != self.actual.shape:
            raise ValueError(
                f"predicted/actual length mismatch: {self.predicted.shape} vs {self.actual.shape}"
            )


def knn1_classify(train: Dataset, query: Series) -> int:
    """Class of the training example nearest in squared Euclidean distance
    over flattened values; ties break to the lowest training index."""
    if query.values.shape != (train.channels, train.length):
        raise ValueError(
            f"query shape {query.values.shape} does not match train shape "
            f"{(train.channels, train.length)}"
        )
    mat = train.values_array().reshape(train.n_examples, -1).astype(np.float64)
    q = query.values.reshape(-1).astype(np.float64)
    dists = np.sum((mat - q) ** 2, axis=1)
    nearest = int(np.argmin(dists))  # argmin returns the first minimum
    return train.examples[nearest].hard_label()


def predict(train: Dataset, test: Dataset) -> PredictionSet:
    predicted = np.array([knn1_classify(train, ex.series) for ex in test.examples], dtype=np.int64)
    return PredictionSet(predicted, test.hard_labels())


def accuracy(p: PredictionSet) -> float:
    """Fraction of correct predictions."""
    if p.predicted.size == 0:
        raise ValueError("cannot compute accuracy of an empty prediction set")
    return float(np.mean(p.predicted == p.actual))
