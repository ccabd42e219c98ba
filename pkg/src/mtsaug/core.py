"""Domain types, label algebra, and the deterministic random-stream contract.

Everything downstream (augmentation kernels, pipelines, resampling) builds on
the types here. Series values are stored as float32, C-contiguous and
read-only; all randomness flows through :class:`RandomStream`, whose exact
bit-level behaviour is a documented external contract (see docs/formats.md)
so that outputs stay reproducible across platforms and releases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM_SALT = 0xD1B54A32D192ED03

LABEL_SUM_TOL = 1e-6


def _mix64(z: int) -> int:
    """splitmix64 finalizer (Stafford mix13): bijective 64-bit hash."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class RandomStream:
    """Deterministic 64-bit random stream identified by (seed, stream_id).

    Two instantiations with the same (seed, stream_id) emit bit-identical
    sequences on every platform. Draw methods advance internal state;
    :meth:`derive` is pure and never advances the parent. Parallel users must
    derive child streams instead of sharing one stream.
    """

    __slots__ = ("seed", "stream_id", "_state")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        self._state = _mix64(self.seed ^ _mix64(self.stream_id ^ _STREAM_SALT))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id})"

    def next_raw(self) -> int:
        """Next raw 64-bit draw (splitmix64)."""
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def uniform_real(self) -> float:
        """One double in [0, 1), 53 uniform bits. Consumes one raw draw."""
        return (self.next_raw() >> 11) * (2.0 ** -53)

    def uniform_int(self, lo: int, hi: int) -> int:
        """One integer in [lo, hi] inclusive. Consumes exactly one raw draw.

        Uses the multiply-shift reduction (bias below 2**-64 per value, far
        beneath any statistical test run here).
        """
        if lo > hi:
            raise ValueError(f"uniform_int requires lo <= hi, got [{lo}, {hi}]")
        span = hi - lo + 1
        return lo + ((self.next_raw() * span) >> 64)

    def bernoulli(self, p: float) -> bool:
        """True with probability p. Consumes one raw draw."""
        return self.uniform_real() < p

    def derive(self, index: int) -> "RandomStream":
        """Child stream for a non-negative derivation index.

        Pure: the parent is not advanced, and repeated calls with the same
        index return identical streams. Children for distinct indices are
        statistically independent.
        """
        if index < 0:
            raise ValueError(f"derivation index must be >= 0, got {index}")
        child_id = _mix64(self.stream_id ^ _mix64((index + 1) * _GOLDEN))
        return RandomStream(self.seed, child_id)


def derive_stream(parent: RandomStream, index: int) -> RandomStream:
    """Functional alias for :meth:`RandomStream.derive`."""
    return parent.derive(index)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class Series:
    """One multivariate time series: float32 matrix of shape (channels, length).

    Values must be finite. The backing array is copied on construction and
    marked read-only, so a Series can be shared freely across threads.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float32, order="C", copy=True)
        if arr.ndim != 2:
            raise ValueError(f"series values must be 2-D (channels, length), got shape {arr.shape}")
        c, l = arr.shape
        if c < 1 or l < 1:
            raise ValueError(f"series needs at least one channel and one time step, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("series values must be finite (no NaN/Inf)")
        self.values = _freeze(arr)

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"Series(channels={self.channels}, length={self.length})"


class LabeledExample:
    """A Series plus a soft label: probability vector over k classes.

    Labels are soft because mixup averages them; a hard label is just a
    one-hot vector. Entries must be >= 0 and sum to 1 within 1e-6.
    """

    __slots__ = ("series", "label")

    def __init__(self, series: Series, label):
        lab = np.array(label, dtype=np.float32, copy=True)
        if lab.ndim != 1 or lab.shape[0] < 1:
            raise ValueError(f"label must be a 1-D probability vector, got shape {lab.shape}")
        if np.any(lab < 0):
            raise ValueError("label entries must be >= 0")
        total = float(np.sum(lab, dtype=np.float64))
        if abs(total - 1.0) > LABEL_SUM_TOL:
            raise ValueError(f"label must sum to 1 within {LABEL_SUM_TOL}, got {total!r}")
        self.series = series
        self.label = _freeze(lab)

    @property
    def n_classes(self) -> int:
        return self.label.shape[0]

    def hard_label(self) -> int:
        """Class index with the highest probability (ties -> lowest index)."""
        return int(np.argmax(self.label))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledExample):
            return NotImplemented
        return self.series == other.series and np.array_equal(self.label, other.label)

    def __repr__(self) -> str:
        return f"LabeledExample({self.series!r}, k={self.n_classes})"


def one_hot(index: int, n_classes: int) -> np.ndarray:
    """One-hot float32 label vector for a class index."""
    if not 0 <= index < n_classes:
        raise ValueError(f"class index {index} out of range for {n_classes} classes")
    lab = np.zeros(n_classes, dtype=np.float32)
    lab[index] = 1.0
    return lab


def average_labels(y1, y2) -> np.ndarray:
    """Elementwise average of two probability vectors: (y1 + y2) / 2.

    Both inputs must have the same length; the result stays on the simplex.
    """
    a = np.asarray(y1, dtype=np.float64)
    b = np.asarray(y2, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"label length mismatch: {a.shape} vs {b.shape}")
    return ((a + b) / 2.0).astype(np.float32)


class Dataset:
    """An ordered collection of equally shaped labeled examples.

    All series share one (channels, length) shape, and every label vector has
    one entry per name in ``class_names``.
    """

    __slots__ = ("name", "class_names", "examples")

    def __init__(self, name: str, class_names, examples):
        examples = list(examples)
        class_names = [str(c) for c in class_names]
        if not examples:
            raise ValueError("dataset needs at least one example")
        if not class_names:
            raise ValueError("dataset needs at least one class name")
        k = len(class_names)
        c, l = examples[0].series.values.shape
        for i, ex in enumerate(examples):
            if ex.series.values.shape != (c, l):
                raise ValueError(
                    f"example {i} has shape {ex.series.values.shape}, expected {(c, l)}"
                )
            if ex.n_classes != k:
                raise ValueError(f"example {i} has {ex.n_classes} classes, expected {k}")
        self.name = str(name)
        self.class_names = class_names
        self.examples = examples

    @property
    def n_examples(self) -> int:
        return len(self.examples)

    @property
    def channels(self) -> int:
        return self.examples[0].series.channels

    @property
    def length(self) -> int:
        return self.examples[0].series.length

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def hard_labels(self) -> np.ndarray:
        return np.array([ex.hard_label() for ex in self.examples], dtype=np.int64)

    def values_array(self) -> np.ndarray:
        """Stacked float32 values, shape (n, channels, length)."""
        return np.stack([ex.series.values for ex in self.examples])

    def labels_array(self) -> np.ndarray:
        """Stacked float32 labels, shape (n, k)."""
        return np.stack([ex.label for ex in self.examples])

    def class_counts(self) -> dict[int, int]:
        counts = {i: 0 for i in range(self.n_classes)}
        for ex in self.examples:
            counts[ex.hard_label()] += 1
        return counts

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.class_names == other.class_names
            and len(self.examples) == len(other.examples)
            and all(a == b for a, b in zip(self.examples, other.examples))
        )

    def __repr__(self) -> str:
        return (
            f"Dataset({self.name!r}, n={self.n_examples}, channels={self.channels}, "
            f"length={self.length}, classes={self.n_classes})"
        )


@dataclass(frozen=True)
class DatasetMeta:
    """Expected summary stats for a named archive dataset."""

    name: str
    train_size: int
    test_size: int
    dims: int
    length: int
    classes: int
