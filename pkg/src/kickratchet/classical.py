"""Classical ensembles of the two-period, rocked kicked rotor.

The state ``(phi, rho)`` is taken just before kick ``n``.  Kick ``n`` gives
the impulse ``K sin(phi) - (-1)^n A`` and is followed by a free flight of
duration ``1 + b`` or ``1 - b``.  Which parity gets the long flight is the
``parity`` switch:

``"even-long"`` (default)
    odd kicks are followed by ``1 - b``, even kicks by ``1 + b``.  With this
    choice the current phase is exactly ``(1 - b) A - 2 b rho_L``.
``"odd-long"``
    the reverse.

Angles are reduced mod 2 pi after every flight.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .rng import DEFAULT_SEED, normals_and_uniforms
from .stats import MomentumStats, ladder_edges
from .units import DimensionlessParams

__all__ = [
    "PARITIES",
    "ClassicalState",
    "ClassicalEnsemble",
    "flight_time",
    "rocking_impulse",
    "rocking_offset",
    "kick_map_step",
    "sample_initial",
    "evolve_ensemble",
]

PARITIES = ("even-long", "odd-long")
TWO_PI = 2.0 * math.pi
BLOCK = 1 << 16  # trajectories per reduction block; fixed, worker independent


class ClassicalState(NamedTuple):
    angle: float | np.ndarray
    momentum: float | np.ndarray


def _check_parity(parity):
    if parity not in PARITIES:
        raise ValueError(f"parity must be one of {PARITIES} (got {parity!r})")


def flight_time(n: int, b: float, parity: str = "even-long") -> float:
    """Free-flight duration following kick ``n``."""
    _check_parity(parity)
    odd = n % 2 == 1
    long_after_odd = parity == "odd-long"
    return 1.0 + b if odd == long_after_odd else 1.0 - b


def rocking_impulse(n: int, A: float) -> float:
    """``-(-1)^n A``: ``+A`` on odd kicks, ``-A`` on even kicks."""
    return A if n % 2 == 1 else -A


def rocking_offset(n: int, A: float) -> float:
    """Accumulated rocking impulse after kicks 1..n (``A`` or 0)."""
    return A if n % 2 == 1 else 0.0


def kick_map_step(state: ClassicalState, n: int, params: DimensionlessParams,
                  parity: str = "even-long", wrap: bool = True) -> ClassicalState:
    """Apply kick ``n`` and the free flight after it.

    Works on scalars or equal-shape arrays.  ``wrap=False`` skips the mod 2 pi
    reduction (useful for Jacobians).
    """
    if n < 1:
        raise ValueError("kick index n must be >= 1")
    phi, rho = state
    rho = rho + params.K * np.sin(phi) + rocking_impulse(n, params.A)
    phi = phi + rho * flight_time(n, params.b, parity)
    if wrap:
        phi = np.mod(phi, TWO_PI)
    if np.ndim(phi) == 0:
        return ClassicalState(float(phi), float(rho))
    return ClassicalState(phi, rho)


@dataclass
class ClassicalEnsemble:
    """A set of trajectories advanced in lockstep.

    ``angle`` and ``momentum`` are updated in place by :func:`evolve_ensemble`;
    ``kick_index`` counts the kicks applied so far.
    """

    angle: np.ndarray
    momentum: np.ndarray
    params: DimensionlessParams
    rho_L: float
    sigma_p: float
    seed: int
    stream: int = 0
    kick_index: int = 0
    parity: str = "even-long"

    def __post_init__(self):
        _check_parity(self.parity)
        if self.angle.shape != self.momentum.shape or self.angle.ndim != 1:
            raise ValueError("angle and momentum must be equal-length 1-d arrays")
        if self.angle.size < 1:
            raise ValueError("ensemble must hold at least one trajectory")
        if self.kick_index < 0:
            raise ValueError("kick_index must be >= 0")

    def __len__(self):
        return self.angle.size


def sample_initial(n: int, rho_L: float, sigma_p: float,
                   params: DimensionlessParams, seed: int = DEFAULT_SEED,
                   stream: int = 0, parity: str = "even-long") -> ClassicalEnsemble:
    """Uniform angles on [0, 2 pi), Gaussian momenta ``N(rho_L, sigma_p^2)``.

    Trajectory ``i`` is drawn from substream item ``i`` of ``(seed, stream)``;
    ``sigma_p = 0`` gives every trajectory exactly ``rho_L``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if sigma_p < 0:
        raise ValueError("sigma_p must be >= 0")
    angle = np.empty(n)
    momentum = np.empty(n)
    for start in range(0, n, BLOCK):
        cnt = min(BLOCK, n - start)
        z, u = normals_and_uniforms(seed, start, cnt, stream)
        angle[start:start + cnt] = TWO_PI * u
        momentum[start:start + cnt] = rho_L + sigma_p * z if sigma_p else rho_L
    return ClassicalEnsemble(angle, momentum, params, float(rho_L),
                             float(sigma_p), int(seed), int(stream), 0, parity)


def _evolve_block(phi, rho, n0, n_kicks, params, parity, rho_L):
    """Advance one block in place; return per-kick (sum d, sum d^2)."""
    K, A, b = params.K, params.A, params.b
    s1 = np.empty(n_kicks)
    s2 = np.empty(n_kicks)
    sin_buf = np.empty_like(phi)
    d = np.empty_like(rho)
    for j in range(n_kicks):
        n = n0 + j + 1
        np.sin(phi, out=sin_buf)
        sin_buf *= K
        rho += sin_buf
        imp = rocking_impulse(n, A)
        if imp:
            rho += imp
        np.multiply(rho, flight_time(n, b, parity), out=sin_buf)
        phi += sin_buf
        np.mod(phi, TWO_PI, out=phi)
        np.subtract(rho, rho_L + rocking_offset(n, A), out=d)
        s1[j] = d.sum()
        s2[j] = np.dot(d, d)
    return s1, s2


def evolve_ensemble(ens: ClassicalEnsemble, n_kicks: int, workers: int = 1,
                    hist_unit: float | None = None) -> MomentumStats:
    """Evolve every trajectory ``n_kicks`` kicks and collect statistics.

    Trajectories are processed in fixed blocks of ``BLOCK``; per-block sums
    are combined in block order, so the result is bit-identical for any
    ``workers``.  The histogram bin width defaults to ``hbar_eff``.
    """
    if n_kicks < 1:
        raise ValueError("n_kicks must be >= 1")
    N = len(ens)
    n0 = ens.kick_index
    starts = list(range(0, N, BLOCK))

    def job(start):
        sl = slice(start, min(start + BLOCK, N))
        return _evolve_block(ens.angle[sl], ens.momentum[sl], n0, n_kicks,
                             ens.params, ens.parity, ens.rho_L)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, starts))
    else:
        parts = [job(s) for s in starts]
    S1 = np.sum(np.stack([p[0] for p in parts]), axis=0)
    S2 = np.sum(np.stack([p[1] for p in parts]), axis=0)
    ens.kick_index = n0 + n_kicks

    kicks = np.arange(n0 + 1, n0 + n_kicks + 1)
    offsets = np.array([rocking_offset(int(n), ens.params.A) for n in kicks])
    mean = S1 / N
    m2 = S2 / N
    var = np.maximum(m2 - mean * mean, 0.0)
    sem = np.sqrt(var / max(N - 1, 1))

    unit = ens.params.hbar if hist_unit is None else hist_unit
    lo, hi = float(ens.momentum.min()), float(ens.momentum.max())
    edges = ladder_edges(ens.rho_L, unit, lo, hi)
    counts, _ = np.histogram(ens.momentum, bins=edges)
    # second moment about rho_L including the rocking offset is what diffusion
    # measurements use; re-add the offset to the shift-about-rho_L moment
    second = m2 + 2.0 * offsets * mean + offsets**2
    return MomentumStats(
        kicks=kicks,
        mean_shift=mean,
        sem=sem,
        variance=var,
        second_moment=second,
        rocking_offset=offsets,
        hist_edges=edges,
        hist_counts=counts.astype(float),
        n_samples=N,
        final_mean=float(np.mean(ens.momentum)),
        meta={"engine": "classical", "seed": ens.seed, "stream": ens.stream,
              "parity": ens.parity, "n_trajectories": N},
    )
