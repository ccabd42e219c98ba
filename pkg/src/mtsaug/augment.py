"""The four augmentation kernels: cutout, cutmix, mixup, window warp.

Each kernel is a pure function of (inputs, params, random stream) and never
changes the (channels, length) shape of its input. Kernels split into a
sampling layer (segment, channel mask, blend weight, drawn from the stream in
a fixed documented order) and a deterministic application layer
(``apply_*``), so tests can force exact segments and masks.

Stream draw order per kernel call (one draw each unless noted):
  cutout       gate, segment length, segment start, channel mask (c draws)
  cutmix       gate, segment length, segment start, channel mask (c draws)
  mixup        gate, blend weight m
  window_warp  gate, segment length, segment start

The gate draw happens first; when it fails the input object is returned
unchanged and no further draws are consumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import LabeledExample, RandomStream, Series, average_labels
from .interp import resize_values

LABEL_MODES = ("keep_first", "average")

# Segment-length ranges as fractions of the series length: [1/2, 1] for
# cutout/cutmix, [1/8, 1/3] for window warp.
CUT_FRAC_RANGE = (0.5, 1.0)
WARP_FRAC_RANGE = (1.0 / 8.0, 1.0 / 3.0)


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class SegmentSpec:
    """A sampled time window plus an optional per-channel selection mask."""

    start: int
    length: int
    channel_mask: np.ndarray | None = None

    def __post_init__(self):
        if self.start < 0:
            raise ValueError(f"segment start must be >= 0, got {self.start}")
        if self.length < 1:
            raise ValueError(f"segment length must be >= 1, got {self.length}")

    def with_mask(self, mask: np.ndarray) -> "SegmentSpec":
        return SegmentSpec(self.start, self.length, np.asarray(mask, dtype=bool))

    @property
    def stop(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class CutParams:
    """Parameters shared by cutout and cutmix.

    ``label_mode`` only affects cutmix: "keep_first" leaves the first
    example's label untouched, "average" averages both labels.
    """

    p_apply: float
    channel_prob: float
    len_frac_min: float = CUT_FRAC_RANGE[0]
    len_frac_max: float = CUT_FRAC_RANGE[1]
    label_mode: str = "keep_first"

    def __post_init__(self):
        _check_probability("p_apply", self.p_apply)
        _check_probability("channel_prob", self.channel_prob)
        _check_probability("len_frac_min", self.len_frac_min)
        _check_probability("len_frac_max", self.len_frac_max)
        if self.len_frac_min > self.len_frac_max:
            raise ValueError("len_frac_min must be <= len_frac_max")
        if self.label_mode not in LABEL_MODES:
            raise ValueError(f"label_mode must be one of {LABEL_MODES}, got {self.label_mode!r}")


@dataclass(frozen=True)
class MixupParams:
    p_apply: float
    m_min: float = 0.0
    m_max: float = 1.0

    def __post_init__(self):
        _check_probability("p_apply", self.p_apply)
        _check_probability("m_min", self.m_min)
        _check_probability("m_max", self.m_max)
        if self.m_min > self.m_max:
            raise ValueError("m_min must be <= m_max")


@dataclass(frozen=True)
class WarpParams:
    p_apply: float
    scale: float
    len_frac_min: float = WARP_FRAC_RANGE[0]
    len_frac_max: float = WARP_FRAC_RANGE[1]

    def __post_init__(self):
        _check_probability("p_apply", self.p_apply)
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")
        _check_probability("len_frac_min", self.len_frac_min)
        _check_probability("len_frac_max", self.len_frac_max)
        if self.len_frac_min > self.len_frac_max:
            raise ValueError("len_frac_min must be <= len_frac_max")


def sample_segment(
    stream: RandomStream, l_max: int, frac_min: float, frac_max: float
) -> SegmentSpec:
    """Sample a time window: length then start, two integer draws.

    length ~ uniform_int(max(1, floor(frac_min*l_max)), floor(frac_max*l_max))
    start  ~ uniform_int(0, max(0, l_max - length - 1))

    Degenerate ranges clamp instead of erroring: the length upper bound is
    raised to the lower bound, and the start range collapses to {0} once the
    segment (nearly) covers the series.
    """
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    if not 0.0 < frac_min <= frac_max <= 1.0:
        raise ValueError(f"need 0 < frac_min <= frac_max <= 1, got ({frac_min}, {frac_max})")
    lo = max(1, math.floor(frac_min * l_max))
    hi = max(lo, math.floor(frac_max * l_max))
    length = stream.uniform_int(lo, hi)
    start = stream.uniform_int(0, max(0, l_max - length - 1))
    return SegmentSpec(start, length)


def sample_channel_mask(stream: RandomStream, c: int, channel_prob: float) -> np.ndarray:
    """Boolean mask of length c; each channel selected independently."""
    if c < 1:
        raise ValueError(f"channel count must be >= 1, got {c}")
    _check_probability("channel_prob", channel_prob)
    return np.array([stream.uniform_real() < channel_prob for _ in range(c)], dtype=bool)


def _check_segment(segment: SegmentSpec, series: Series, need_mask: bool) -> None:
    if segment.stop > series.length:
        raise ValueError(
            f"segment [{segment.start}, {segment.stop}) exceeds series length {series.length}"
        )
    if need_mask:
        if segment.channel_mask is None:
            raise ValueError("segment needs a channel mask for this operation")
        if segment.channel_mask.shape != (series.channels,):
            raise ValueError(
                f"channel mask has shape {segment.channel_mask.shape}, "
                f"expected ({series.channels},)"
            )


def _check_pair(x1: LabeledExample, x2: LabeledExample) -> None:
    if x1.series.values.shape != x2.series.values.shape:
        raise ValueError(
            f"shape mismatch: {x1.series.values.shape} vs {x2.series.values.shape}"
        )
    if x1.n_classes != x2.n_classes:
        raise ValueError(f"class count mismatch: {x1.n_classes} vs {x2.n_classes}")


def apply_cutout(x: LabeledExample, segment: SegmentSpec) -> LabeledExample:
    """Zero the segment on masked channels; label unchanged."""
    _check_segment(segment, x.series, need_mask=True)
    values = x.series.values.copy()
    values[segment.channel_mask, segment.start:segment.stop] = 0.0
    return LabeledExample(Series(values), x.label)


def apply_cutmix(
    x1: LabeledExample,
    x2: LabeledExample,
    segment: SegmentSpec,
    label_mode: str = "keep_first",
) -> LabeledExample:
    """Copy the time-aligned segment from x2 into x1 on masked channels."""
    _check_pair(x1, x2)
    _check_segment(segment, x1.series, need_mask=True)
    if label_mode not in LABEL_MODES:
        raise ValueError(f"label_mode must be one of {LABEL_MODES}, got {label_mode!r}")
    values = x1.series.values.copy()
    sl = slice(segment.start, segment.stop)
    values[segment.channel_mask, sl] = x2.series.values[segment.channel_mask, sl]
    label = average_labels(x1.label, x2.label) if label_mode == "average" else x1.label
    return LabeledExample(Series(values), label)


def apply_mixup(x1: LabeledExample, x2: LabeledExample, m: float) -> LabeledExample:
    """Convex blend m*x1 + (1-m)*x2 on all channels; labels averaged."""
    _check_pair(x1, x2)
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must be in [0, 1], got {m}")
    a = x1.series.values.astype(np.float64)
    b = x2.series.values.astype(np.float64)
    values = (m * a + (1.0 - m) * b).astype(np.float32)
    return LabeledExample(Series(values), average_labels(x1.label, x2.label))


def _round_half_away(v: float) -> int:
    # round-half-away-from-zero for positive v, pinned for determinism
    return math.floor(v + 0.5)


def apply_window_warp(x: LabeledExample, segment: SegmentSpec, scale: float) -> LabeledExample:
    """Resize the segment by ``scale``, reassemble, then crop or zero-pad the
    end back to the original length. Time steps before the segment are kept
    bit-identical; label unchanged."""
    _check_segment(segment, x.series, need_mask=False)
    if not scale > 0:
        raise ValueError(f"scale must be > 0, got {scale}")
    values = x.series.values
    l = x.series.length
    new_len = max(1, _round_half_away(scale * segment.length))
    resized = resize_values(values[:, segment.start:segment.stop], new_len)
    out = np.concatenate([values[:, : segment.start], resized, values[:, segment.stop:]], axis=1)
    if out.shape[1] > l:
        out = out[:, :l]
    elif out.shape[1] < l:
        pad = np.zeros((x.series.channels, l - out.shape[1]), dtype=np.float32)
        out = np.concatenate([out, pad], axis=1)
    return LabeledExample(Series(out), x.label)


def cutout(x: LabeledExample, params: CutParams, stream: RandomStream) -> LabeledExample:
    """With probability P, zero a random segment on a random channel subset."""
    if stream.uniform_real() >= params.p_apply:
        return x
    segment = sample_segment(stream, x.series.length, params.len_frac_min, params.len_frac_max)
    mask = sample_channel_mask(stream, x.series.channels, params.channel_prob)
    return apply_cutout(x, segment.with_mask(mask))


def cutmix(
    x1: LabeledExample, x2: LabeledExample, params: CutParams, stream: RandomStream
) -> LabeledExample:
    """With probability P, swap a random time-aligned segment in from x2 on a
    random channel subset."""
    _check_pair(x1, x2)
    if stream.uniform_real() >= params.p_apply:
        return x1
    segment = sample_segment(stream, x1.series.length, params.len_frac_min, params.len_frac_max)
    mask = sample_channel_mask(stream, x1.series.channels, params.channel_prob)
    return apply_cutmix(x1, x2, segment.with_mask(mask), params.label_mode)


def mixup(
    x1: LabeledExample, x2: LabeledExample, params: MixupParams, stream: RandomStream
) -> LabeledExample:
    """With probability P, blend x2 into x1 with m ~ U(m_min, m_max)."""
    _check_pair(x1, x2)
    if stream.uniform_real() >= params.p_apply:
        return x1
    m = params.m_min + stream.uniform_real() * (params.m_max - params.m_min)
    return apply_mixup(x1, x2, m)


def window_warp(x: LabeledExample, params: WarpParams, stream: RandomStream) -> LabeledExample:
    """With probability P, stretch or shrink a random segment by the scale
    factor, cropping or zero-padding the end back to the original length."""
    if stream.uniform_real() >= params.p_apply:
        return x
    segment = sample_segment(stream, x.series.length, params.len_frac_min, params.len_frac_max)
    return apply_window_warp(x, segment, params.scale)
