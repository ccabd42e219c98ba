"""Array-in/array-out bridge to mtsaug for ML training loops.

Works directly on contiguous numpy buffers of shape (n, c, l) for values and
(n, k) for soft labels, so a trainer never touches the toolkit's domain
types. Outputs are bit-identical to the ``mtsaug augment`` CLI for the same
seed and inputs: :func:`augment_batch` applies one pipeline pass with the
batch stream ``RandomStream(seed).derive(0)``, exactly like the CLI's pass 0.

``code "None"`` and fold 0 return the caller's arrays unchanged (zero-copy).
"""

from __future__ import annotations

import numpy as np

import mtsaug
from mtsaug import (
    LabeledExample,
    PipelineConfig,
    RandomStream,
    Series,
    apply_pipeline,
    builtin_pipeline,
    parse_pipeline_config,
    pipeline_config_from_dict,
    welch_ttest,
)
from mtsaug import resample_indices as _resample_indices

__version__ = mtsaug.__version__

__all__ = [
    "__version__",
    "augment_batch",
    "builtin_pipeline",
    "resample_split",
    "welch_ttest",
    "one_hot_labels",
]


def one_hot_labels(labels, n_classes: int) -> np.ndarray:
    """Convert integer class labels (n,) to a float32 one-hot matrix (n, k)."""
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError(f"labels must be 1-D, got shape {labels.shape}")
    out = np.zeros((labels.shape[0], n_classes), dtype=np.float32)
    for i, lab in enumerate(labels):
        lab = int(lab)
        if not 0 <= lab < n_classes:
            raise ValueError(f"label {lab} out of range for {n_classes} classes")
        out[i, lab] = 1.0
    return out


def _check_arrays(values, labels) -> tuple[np.ndarray, np.ndarray]:
    values = np.asarray(values)
    labels = np.asarray(labels)
    if values.ndim != 3:
        raise ValueError(f"values must have shape (n, channels, length), got {values.shape}")
    if labels.ndim != 2:
        raise ValueError(f"labels must have shape (n, classes), got {labels.shape}")
    if values.shape[0] != labels.shape[0]:
        raise ValueError(
            f"values and labels disagree on n: {values.shape[0]} vs {labels.shape[0]}"
        )
    return values, labels


def _resolve_config(code_or_config) -> PipelineConfig:
    if isinstance(code_or_config, PipelineConfig):
        return code_or_config
    if isinstance(code_or_config, dict):
        return pipeline_config_from_dict(code_or_config)
    if isinstance(code_or_config, str):
        stripped = code_or_config.lstrip()
        if stripped.startswith("{"):
            return parse_pipeline_config(code_or_config)
        return builtin_pipeline(code_or_config)
    raise TypeError(
        "pipeline must be a builtin code, a config JSON string or dict, or a PipelineConfig"
    )


def augment_batch(values, labels, code_or_config, seed: int):
    """Run one augmentation pass over a batch of arrays.

    Returns (values', labels') as float32 arrays. Bit parity with the CLI:
    ``mtsaug augment --seed S --epoch-multiplier 1`` writes exactly these
    values for the same input dataset.
    """
    values, labels = _check_arrays(values, labels)
    config = _resolve_config(code_or_config)
    if not config.steps:
        return values, labels
    batch = [
        LabeledExample(Series(values[i]), labels[i]) for i in range(values.shape[0])
    ]
    out = apply_pipeline(batch, config, RandomStream(seed).derive(0))
    return (
        np.stack([ex.series.values for ex in out]),
        np.stack([ex.label for ex in out]),
    )


def resample_split(train_values, train_labels, test_values, test_labels, fold_index: int, seed: int):
    """Reassign pooled train/test arrays into a new split for one fold.

    Labels are soft matrices; stratification uses their argmax. Returns
    (train_values, train_labels, test_values, test_labels); fold 0 returns
    the inputs untouched. Assignments match the primary resampler exactly.
    """
    train_values, train_labels = _check_arrays(train_values, train_labels)
    test_values, test_labels = _check_arrays(test_values, test_labels)
    if train_values.shape[1:] != test_values.shape[1:]:
        raise ValueError(
            f"train/test series shapes differ: {train_values.shape[1:]} vs {test_values.shape[1:]}"
        )
    if train_labels.shape[1] != test_labels.shape[1]:
        raise ValueError(
            f"train/test class counts differ: {train_labels.shape[1]} vs {test_labels.shape[1]}"
        )
    if fold_index == 0:
        return train_values, train_labels, test_values, test_labels
    k = train_labels.shape[1]
    train_hard = np.argmax(train_labels, axis=1)
    test_hard = np.argmax(test_labels, axis=1)
    train_idx, test_idx = _resample_indices(train_hard, test_hard, k, fold_index, seed)
    pool_values = np.concatenate([train_values, test_values])
    pool_labels = np.concatenate([train_labels, test_labels])
    return (
        pool_values[train_idx],
        pool_labels[train_idx],
        pool_values[test_idx],
        pool_labels[test_idx],
    )
