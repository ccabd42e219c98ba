"""Seeded regeneration of train/test splits preserving per-class counts.

Fold 0 is the untouched original split. For fold >= 1, train and test are
pooled and reassigned: within each class, the pooled examples (train first,
then test, in original order) are shuffled by a Fisher-Yates pass seeded by

    RandomStream(seed).derive(fold_index).derive(class_index)

and the first original-train-count examples become the new train split. The
emitted index lists refer to the concatenated train-then-test order and are
sorted ascending. The exact construction is part of the reproducibility
contract (docs/formats.md).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Dataset, RandomStream


@dataclass(frozen=True)
class SplitSpec:
    """Per-class train/test counts for one fold of one dataset."""

    fold_index: int
    seed: int
    per_class_train_counts: dict[int, int]
    per_class_test_counts: dict[int, int]


def _class_counts(labels) -> dict[int, int]:
    counts: dict[int, int] = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    return counts


def split_spec(train: Dataset, test: Dataset, fold_index: int, seed: int) -> SplitSpec:
    return SplitSpec(
        fold_index,
        seed,
        _class_counts(int(v) for v in train.hard_labels()),
        _class_counts(int(v) for v in test.hard_labels()),
    )


def _shuffle(items: list[int], stream: RandomStream) -> None:
    # Fisher-Yates, descending
    for i in range(len(items) - 1, 0, -1):
        j = stream.uniform_int(0, i)
        items[i], items[j] = items[j], items[i]


def resample_indices(
    train_labels, test_labels, n_classes: int, fold_index: int, seed: int
) -> tuple[list[int], list[int]]:
    """Assign indices of the concatenated train+test pool to a new split.

    Returns sorted (train_indices, test_indices). Fold 0 reproduces the
    original split. Per-class counts always match the originals exactly and
    the two lists partition the pool.
    """
    train_labels = [int(v) for v in train_labels]
    test_labels = [int(v) for v in test_labels]
    if fold_index < 0:
        raise ValueError(f"fold_index must be >= 0, got {fold_index}")
    for lab in train_labels + test_labels:
        if not 0 <= lab < n_classes:
            raise ValueError(f"label {lab} out of range for {n_classes} classes")
    n_train = len(train_labels)
    if fold_index == 0:
        return list(range(n_train)), list(range(n_train, n_train + len(test_labels)))
    fold_stream = RandomStream(seed).derive(fold_index)
    all_labels = train_labels + test_labels
    new_train: list[int] = []
    new_test: list[int] = []
    for ci in range(n_classes):
        pool = [i for i, lab in enumerate(all_labels) if lab == ci]
        if not pool:
            continue
        want_train = sum(1 for lab in train_labels if lab == ci)
        _shuffle(pool, fold_stream.derive(ci))
        new_train.extend(pool[:want_train])
        new_test.extend(pool[want_train:])
    return sorted(new_train), sorted(new_test)


def resample_split(
    train: Dataset, test: Dataset, fold_index: int, seed: int
) -> tuple[Dataset, Dataset]:
    """Materialize one resampled fold; fold 0 returns the inputs unchanged."""
    if train.class_names != test.class_names:
        raise ValueError(
            f"train/test class sets differ: {train.class_names} vs {test.class_names}"
        )
    if (train.channels, train.length) != (test.channels, test.length):
        raise ValueError(
            f"train/test shapes differ: {(train.channels, train.length)} vs "
            f"{(test.channels, test.length)}"
        )
    if fold_index == 0:
        return train, test
    train_idx, test_idx = resample_indices(
        train.hard_labels(), test.hard_labels(), train.n_classes, fold_index, seed
    )
    pool = train.examples + test.examples
    new_train = Dataset(train.name, train.class_names, [pool[i] for i in train_idx])
    new_test = Dataset(test.name, test.class_names, [pool[i] for i in test_idx])
    return new_train, new_test
