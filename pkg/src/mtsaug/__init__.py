"""Deterministic multivariate time-series augmentation toolkit.

Library surface: domain types and the seeded random-stream contract
(:mod:`mtsaug.core`), linear time-axis resizing (:mod:`mtsaug.interp`), the
four augmentation kernels (:mod:`mtsaug.augment`), ordered pipelines with
shipped presets (:mod:`mtsaug.pipeline`), dataset I/O (:mod:`mtsaug.ingest`),
stratified split regeneration (:mod:`mtsaug.resample`), Welch t-test
reporting (:mod:`mtsaug.stats`) and a 1-NN sanity baseline
(:mod:`mtsaug.evalkit`). The ``mtsaug`` CLI wraps these for batch use.
"""

__version__ = "0.1.0"

from .core import (
    Dataset,
    DatasetMeta,
    LabeledExample,
    RandomStream,
    Series,
    average_labels,
    derive_stream,
    one_hot,
)
from .interp import ResizeSpec, resize_linear, resize_values
from .augment import (
    CutParams,
    MixupParams,
    SegmentSpec,
    WarpParams,
    apply_cutmix,
    apply_cutout,
    apply_mixup,
    apply_window_warp,
    cutmix,
    cutout,
    mixup,
    sample_channel_mask,
    sample_segment,
    window_warp,
)
from .pipeline import (
    BUILTIN_CODES,
    ConfigError,
    PipelineConfig,
    PipelineStep,
    apply_pipeline,
    builtin_pipeline,
    parse_pipeline_config,
    pipeline_config_from_dict,
    pipeline_config_to_dict,
    serialize_pipeline_config,
)
from .ingest import (
    BinaryFormatError,
    MetaReport,
    TsHeader,
    TsParseError,
    export_csv,
    load_binary,
    load_dataset,
    load_ts,
    parse_ts,
    read_binary,
    save_binary,
    save_ts,
    serialize_ts,
    validate_meta,
    write_binary,
)
from .metadata import ARCHIVE_METADATA, dataset_meta
from .resample import SplitSpec, resample_indices, resample_split, split_spec
from .stats import (
    AccuracyRecord,
    WelchResult,
    best_vs_reference,
    read_accuracy_csv,
    read_reference_csv,
    significance_table,
    welch_ttest,
)
from .evalkit import PredictionSet, accuracy, knn1_classify, predict

__all__ = [
    "__version__",
    "Dataset", "DatasetMeta", "LabeledExample", "RandomStream", "Series",
    "average_labels", "derive_stream", "one_hot",
    "ResizeSpec", "resize_linear", "resize_values",
    "CutParams", "MixupParams", "SegmentSpec", "WarpParams",
    "apply_cutmix", "apply_cutout", "apply_mixup", "apply_window_warp",
    "cutmix", "cutout", "mixup", "sample_channel_mask", "sample_segment", "window_warp",
    "BUILTIN_CODES", "ConfigError", "PipelineConfig", "PipelineStep",
    "apply_pipeline", "builtin_pipeline", "parse_pipeline_config",
    "pipeline_config_from_dict", "pipeline_config_to_dict", "serialize_pipeline_config",
    "BinaryFormatError", "MetaReport", "TsHeader", "TsParseError",
    "export_csv", "load_binary", "load_dataset", "load_ts", "parse_ts",
    "read_binary", "save_binary", "save_ts", "serialize_ts", "validate_meta", "write_binary",
    "ARCHIVE_METADATA", "dataset_meta",
    "SplitSpec", "resample_indices", "resample_split", "split_spec",
    "AccuracyRecord", "WelchResult", "best_vs_reference",
    "read_accuracy_csv", "read_reference_csv", "significance_table", "welch_ttest",
    "PredictionSet", "accuracy", "knn1_classify", "predict",
]
