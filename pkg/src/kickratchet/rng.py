"""Counter-based random substreams.

Item ``i`` of stream ``(seed, stream)`` is drawn from Philox counter ``i``,
so any block of items can be generated on its own and the result does not
depend on how the items were split between workers.
"""

from __future__ import annotations

import numpy as np

__all__ = ["DEFAULT_SEED", "philox_key", "uniforms", "normals_and_uniforms"]

DEFAULT_SEED = 20061031

_MASK64 = (1 << 64) - 1
_TO_UNIT = 2.0**-53


def philox_key(seed: int, stream: int = 0) -> int:
    """128-bit Philox key made of a 64-bit seed and a 64-bit stream id."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be non-negative")
    return (seed & _MASK64) | ((stream & _MASK64) << 64)


def uniforms(seed: int, start: int, count: int, stream: int = 0) -> np.ndarray:
    """Four uniforms in [0, 1) per item for items ``start .. start+count-1``.

    Returns an array of shape ``(count, 4)``.
    """
    bg = np.random.Philox(key=philox_key(seed, stream))
    if start:
        bg.advance(start)
    raw = bg.random_raw(4 * count).reshape(count, 4)
    return (raw >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def normals_and_uniforms(seed: int, start: int, count: int, stream: int = 0):
    """Per item: one standard normal (Box-Muller) and one uniform in [0, 1).

    Uses words 1, 2 for the normal and word 0 for the uniform.
    """
    u = uniforms(seed, start, count, stream)
    r = np.sqrt(-2.0 * np.log1p(-u[:, 1]))  # 1 - u in (0, 1]
    z = r * np.cos(2.0 * np.pi * u[:, 2])
    return z, u[:, 0]
