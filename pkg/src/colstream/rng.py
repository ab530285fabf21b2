"""Seeded test-data generator (SplitMix64).

Output i of seed s is the SplitMix64 mix of ``s + (i + 1) * GAMMA``
(mod 2**64), i.e. exactly the sequence of the usual stateful SplitMix64
started at state ``s``. Samples in [-128, 127] are the top byte of each
output minus 128.

A random layer draws, from one stream and in this order: C*n*n map
samples (channel, row, column), F*C*k*k weights (filter, channel, row,
column), then F biases.
"""

from __future__ import annotations

import numpy as np

from .convcore import FeatureMap, FilterSet

GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One step of the scalar generator: returns (new_state, output)."""
    state = (state + GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def splitmix64_block(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Outputs ``offset .. offset + count - 1`` of the stream for ``seed`` as uint64."""
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def int8_samples(seed: int, count: int, offset: int = 0) -> np.ndarray:
    top = (splitmix64_block(seed, count, offset) >> np.uint64(56)).astype(np.int64)
    return top - 128


def random_layer(seed: int, n: int, k: int, channels: int = 1, filters: int = 1):
    """Deterministic random inputs and filter set for a layer."""
    n_map = channels * n * n
    n_w = filters * channels * k * k
    vals = int8_samples(seed, n_map + n_w + filters)
    maps = vals[:n_map].reshape(channels, n, n)
    weights = vals[n_map:n_map + n_w].reshape(filters, channels, k, k)
    bias = vals[n_map + n_w:]
    return [FeatureMap(mp) for mp in maps], FilterSet(weights, bias)
