"""Deterministic 64-bit mixing for derived seeds and per-edge cascade coins."""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 2.0**-53


def mix64(x: int) -> int:
    """SplitMix64 finalizer over a 64-bit integer."""
    x = (x + _GAMMA) & _MASK
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK
    return x ^ (x >> 31)


def derive_seed(*parts: int) -> int:
    """Fold integer parts into one well-mixed 64-bit seed.

    Used wherever a child stream is needed (per-trial, per-node) so that
    streams are independent of each other and stable across runs.
    """
    h = 0
    for part in parts:
        h = mix64(h ^ (int(part) & _MASK))
    return h


def edge_coin(trial_seed: int, i: int, j: int, epoch: int = 0) -> float:
    """Uniform [0,1) coin for one undirected edge within one trial.

    The coin depends only on (trial_seed, min(i,j), max(i,j), epoch), so
    paired runs sharing a trial seed see identical coins on identical edges
    regardless of when the attempt happens.
    """
    lo, hi = (i, j) if i <= j else (j, i)
    h = mix64(trial_seed)
    h = mix64(h ^ lo)
    h = mix64(h ^ hi)
    h = mix64(h ^ epoch)
    return (h >> 11) * _INV53


def _mix64_array(x: np.ndarray) -> np.ndarray:
    x = x + np.uint64(_GAMMA)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
    return x ^ (x >> np.uint64(31))


def edge_coin_array(trial_seed: int, i: np.ndarray, j: np.ndarray, epoch: int = 0) -> np.ndarray:
    """Vectorized `edge_coin` over paired index arrays; bitwise equal to the scalar path."""
    lo = np.minimum(i, j).astype(np.uint64)
    hi = np.maximum(i, j).astype(np.uint64)
    base = np.uint64(mix64(trial_seed))
    h = _mix64_array(base ^ lo)
    h = _mix64_array(h ^ hi)
    h = _mix64_array(h ^ np.uint64(epoch & _MASK))
    return (h >> np.uint64(11)).astype(np.float64) * _INV53
