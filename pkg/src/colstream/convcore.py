"""Reference convolution semantics.

Everything here is plain integer arithmetic: 16-bit signed samples and
weights, 32-bit signed biases, 64-bit signed accumulators. Nothing is
rounded or saturated, so the engine can be checked against these
functions bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidShapeError

INT16_MIN, INT16_MAX = -(1 << 15), (1 << 15) - 1
INT32_MIN, INT32_MAX = -(1 << 31), (1 << 31) - 1


def output_dim(n: int, k: int, s: int = 1) -> int:
    """Output height/width of a valid (unpadded) convolution."""
    if k < 1 or s < 1 or k > n:
        raise InvalidShapeError(f"invalid shape: n={n}, k={k}, s={s}")
    return (n - k) // s + 1


@dataclass(frozen=True)
class ConvParams:
    n: int
    k: int
    s: int = 1

    def __post_init__(self):
        output_dim(self.n, self.k, self.s)

    @property
    def m(self) -> int:
        return output_dim(self.n, self.k, self.s)


def _as_int(values, lo: int, hi: int, dtype, what: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype.kind not in "iub":
        raise InvalidShapeError(f"{what} must be integer-valued, got dtype {arr.dtype}")
    if arr.size and (arr.min() < lo or arr.max() > hi):
        raise InvalidShapeError(f"{what} out of range [{lo}, {hi}]")
    out = arr.astype(dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class FeatureMap:
    """One input channel: a square grid of signed 16-bit samples."""

    data: np.ndarray

    def __post_init__(self):
        arr = _as_int(self.data, INT16_MIN, INT16_MAX, np.int16, "feature map")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InvalidShapeError(f"feature map must be square 2-D, got shape {arr.shape}")
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def n(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class FilterSet:
    """F output filters over C input channels, k x k weights each, one bias per filter."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        w = _as_int(self.weights, INT16_MIN, INT16_MAX, np.int16, "weights")
        if w.ndim != 4 or w.shape[2] != w.shape[3] or 0 in w.shape:
            raise InvalidShapeError(f"weights must have shape (F, C, k, k), got {w.shape}")
        b = _as_int(self.bias, INT32_MIN, INT32_MAX, np.int32, "bias")
        if b.shape != (w.shape[0],):
            raise InvalidShapeError(f"bias must have shape ({w.shape[0]},), got {b.shape}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    @property
    def out_filters(self) -> int:
        return self.weights.shape[0]

    @property
    def in_channels(self) -> int:
        return self.weights.shape[1]

    @property
    def k(self) -> int:
        return self.weights.shape[2]


def _grid(x) -> np.ndarray:
    if isinstance(x, FeatureMap):
        return x.data
    return np.asarray(x)


def conv2d(fmap, kernel, s: int = 1) -> np.ndarray:
    """Direct 2-D valid convolution (cross-correlation) with int64 accumulation.

    Returns an (m, m) int64 array with ``m = output_dim(n, k, s)``.
    """
    x = _grid(fmap).astype(np.int64)
    w = np.asarray(kernel).astype(np.int64)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidShapeError(f"map must be square 2-D, got {x.shape}")
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise InvalidShapeError(f"kernel must be square 2-D, got {w.shape}")
    n, k = x.shape[0], w.shape[0]
    m = output_dim(n, k, s)
    span = s * (m - 1) + 1
    out = np.zeros((m, m), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            out += w[i, j] * x[i:i + span:s, j:j + span:s]
    return out


def conv_layer(inputs, filters: FilterSet, s: int = 1) -> np.ndarray:
    """Multi-channel convolution layer with bias: returns an (F, m, m) int64 array."""
    maps = [_grid(x) for x in inputs]
    if len(maps) != filters.in_channels:
        raise InvalidShapeError(
            f"got {len(maps)} input channels, filters expect {filters.in_channels}")
    if len({mp.shape for mp in maps}) != 1:
        raise InvalidShapeError("all input channels must share one shape")
    m = output_dim(maps[0].shape[0], filters.k, s)
    out = np.zeros((filters.out_filters, m, m), dtype=np.int64)
    for f in range(filters.out_filters):
        for c, mp in enumerate(maps):
            out[f] += conv2d(mp, filters.weights[f, c], s)
        out[f] += np.int64(filters.bias[f])
    return out
