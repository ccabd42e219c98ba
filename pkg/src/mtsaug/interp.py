"""Linear time-axis resizing with half-pixel-center coordinate mapping.

This is the resize used by window warping. Each channel is resampled
independently along time: output index i maps to source coordinate

    x_src = (i + 0.5) * (src_len / dst_len) - 0.5

clamped to [0, src_len - 1], then linearly interpolated between the two
nearest samples. Interpolation runs in float64 and the result is stored back
at series precision (float32). Resizing to the source length is an exact
identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Series


@dataclass(frozen=True)
class ResizeSpec:
    """A source-length to destination-length resize along the time axis."""

    src_len: int
    dst_len: int

    def __post_init__(self):
        if self.src_len < 1 or self.dst_len < 1:
            raise ValueError(f"resize lengths must be >= 1, got {self.src_len} -> {self.dst_len}")


def source_coordinates(spec: ResizeSpec) -> np.ndarray:
    """Clamped float64 source coordinates for every destination index."""
    scale = spec.src_len / spec.dst_len
    coords = (np.arange(spec.dst_len, dtype=np.float64) + 0.5) * scale - 0.5
    return np.clip(coords, 0.0, spec.src_len - 1)


def resize_values(values: np.ndarray, dst_len: int) -> np.ndarray:
    """Resize a (channels, src_len) float array to (channels, dst_len).

    Returns float32; when dst_len equals the source length the input values
    are returned bit-for-bit.
    """
    if values.ndim != 2:
        raise ValueError(f"expected 2-D values, got shape {values.shape}")
    src_len = values.shape[1]
    spec = ResizeSpec(src_len, dst_len)
    if dst_len == src_len:
        return values.astype(np.float32, copy=True)
    coords = source_coordinates(spec)
    i0 = np.floor(coords).astype(np.int64)
    i1 = np.minimum(i0 + 1, src_len - 1)
    frac = coords - i0
    v = values.astype(np.float64, copy=False)
    out = v[:, i0] * (1.0 - frac) + v[:, i1] * frac
    return out.astype(np.float32)


def resize_linear(segment: Series, dst_len: int) -> Series:
    """Resize a series to a new time length; channels resample independently."""
    return Series(resize_values(segment.values, dst_len))
