"""Quantum kicked rotor on a momentum ladder with quasimomentum.

A plane wave of momentum ``rho0`` lives on the ladder
``rho_m = hbar_eff (m + offset + beta)``.  The cos kick couples ladder
sites only, so it is applied on the angle grid with an FFT; the rocking
term ``A (-1)^n phi`` is an exact momentum translation and is folded into
``beta`` and the integer ``offset``.  Free flights are diagonal on the
ladder.

Amplitudes are stored in FFT order on ``n_phi`` sites.  Only
``|m| <= m_max = n_phi // 4`` is meant to be populated; if more than
``EDGE_TOL`` of the probability leaks past ``m_max`` the grid is doubled.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.fft as sfft

from .classical import flight_time, rocking_impulse, rocking_offset, PARITIES
from .rng import DEFAULT_SEED, normals_and_uniforms
from .stats import MomentumStats
from .units import DimensionlessParams

__all__ = [
    "EDGE_TOL",
    "QuantumLadderState",
    "QuantumRunSpec",
    "QuantumResult",
    "plane_wave",
    "floquet_kick",
    "floquet_drift",
    "floquet_step",
    "default_m_max",
    "run_quantum",
]

EDGE_TOL = 1e-8


def _ladder(n_phi):
    return sfft.fftfreq(n_phi, 1.0 / n_phi)  # integer sites, FFT order


def _pow2(x):
    return 1 << max(int(math.ceil(math.log2(max(x, 1)))), 0)


def _kick_phase(n_phi, K, hbar):
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    return np.exp(-1j * (K / hbar) * np.cos(phi))


def _split(y):
    off = np.floor(y)
    return y - off, off


@dataclass
class QuantumLadderState:
    """Amplitudes on an FFT-ordered ladder plus quasimomentum bookkeeping.

    Physical momentum of array slot ``j`` is
    ``hbar * (m_j + offset + beta)`` with ``m_j = fftfreq(n_phi) * n_phi``.
    """

    amplitudes: np.ndarray
    beta: float
    offset: int
    hbar: float

    def __post_init__(self):
        n = self.amplitudes.size
        if n < 4 or n & (n - 1):
            raise ValueError("ladder size must be a power of two >= 4")
        if not 0.0 <= self.beta < 1.0:
            raise ValueError("beta must lie in [0, 1)")

    @property
    def n_phi(self) -> int:
        return self.amplitudes.size

    @property
    def m_max(self) -> int:
        return self.n_phi // 4

    @property
    def sites(self) -> np.ndarray:
        return _ladder(self.n_phi)

    @property
    def momenta(self) -> np.ndarray:
        return self.hbar * (self.sites + self.offset + self.beta)

    @property
    def populations(self) -> np.ndarray:
        a = self.amplitudes
        return a.real**2 + a.imag**2

    def norm(self) -> float:
        return float(self.populations.sum())

    def edge_population(self) -> float:
        M = self.m_max
        return float(self.populations[M + 1:self.n_phi - M].sum())

    def mean_momentum(self) -> float:
        return float(self.populations @ self.momenta)

    def grown(self) -> "QuantumLadderState":
        """Same state on a ladder twice as long."""
        return QuantumLadderState(_grow(self.amplitudes[None, :])[0],
                                  self.beta, self.offset, self.hbar)


def _grow(c):
    S, N = c.shape
    out = np.zeros((S, 2 * N), dtype=complex)
    h = N // 2
    out[:, :h] = c[:, :h]          # m = 0 .. N/2-1
    out[:, 2 * N - h:] = c[:, h:]  # m = -N/2 .. -1
    return out


def plane_wave(rho0: float, hbar: float, n_phi: int = 256) -> QuantumLadderState:
    """Single ladder site carrying momentum ``rho0``."""
    beta, off = _split(rho0 / hbar)
    c = np.zeros(n_phi, dtype=complex)
    c[0] = 1.0
    return QuantumLadderState(c, float(beta), int(off), hbar)


def floquet_kick(state: QuantumLadderState, n: int,
                 params: DimensionlessParams) -> QuantumLadderState:
    """Kick ``n``: rocking translation of the quasimomentum, then the cos kick.

    The two parts are both functions of the angle and commute.
    """
    if params.hbar != state.hbar:
        raise ValueError("state and params disagree on hbar_eff")
    y = state.beta + rocking_impulse(n, params.A) / state.hbar
    beta, shift = _split(y)
    c = sfft.ifft(state.amplitudes)
    c *= _kick_phase(state.n_phi, params.K, params.hbar)
    c = sfft.fft(c)
    return QuantumLadderState(c, float(beta), state.offset + int(shift), state.hbar)


def floquet_drift(state: QuantumLadderState, n: int, params: DimensionlessParams,
                  parity: str = "even-long") -> QuantumLadderState:
    """Free flight after kick ``n``: ``exp(-i rho_m^2 tau_n / (2 hbar))``."""
    tau = flight_time(n, params.b, parity)
    p = state.momenta
    c = state.amplitudes * np.exp(-1j * p * p * (tau / (2.0 * state.hbar)))
    return QuantumLadderState(c, state.beta, state.offset, state.hbar)


def floquet_step(state: QuantumLadderState, n: int, params: DimensionlessParams,
                 parity: str = "even-long") -> QuantumLadderState:
    """One kick followed by its free flight, growing the grid if needed."""
    s = floquet_drift(floquet_kick(state, n, params), n, params, parity)
    while s.edge_population() > EDGE_TOL:
        s = s.grown()
    return s


def default_m_max(params: DimensionlessParams, n_kicks: int) -> int:
    """Heuristic active half-width of the ladder (power of two).

    The smaller of a localised extent (18 localisation lengths) and a
    diffusive extent (7 standard deviations after ``n_kicks``), plus the
    reach of one kick.  Underestimates are caught by the edge trigger.
    """
    K, h = params.K, params.hbar
    loc = 18.0 * K * K / (2.0 * h * h)
    diff = 7.0 * K * math.sqrt(0.5 * n_kicks) / h
    return max(32, _pow2(min(loc, diff) + 2.0 * K / h + 4.0))


@dataclass
class QuantumRunSpec:
    """Everything that determines a quantum ensemble run.

    ``n_samples`` plane waves are propagated; with ``antithetic`` (default)
    they come in mirror pairs ``rho0, 2 rho_L - rho0``, i.e. quasimomenta
    ``beta`` and ``1 - beta``, so ``n_samples`` must be even.
    """

    params: DimensionlessParams
    rho_L: float = 0.0
    sigma_p: float = 1.0
    n_samples: int = 1000
    n_kicks: int = 120
    m_max: int | None = None
    n_phi: int | None = None
    seed: int = DEFAULT_SEED
    stream: int = 0
    parity: str = "even-long"
    antithetic: bool = True
    chunk: int = 256
    workers: int = 1

    def resolved_grid(self):
        m = self.m_max if self.m_max is not None else default_m_max(self.params,
                                                                   self.n_kicks)
        n_phi = self.n_phi if self.n_phi is not None else _pow2(4 * m)
        return m, n_phi

    def validate(self):
        if self.n_kicks < 1:
            raise ValueError("n_kicks must be >= 1")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.antithetic and self.n_samples % 2:
            raise ValueError("antithetic sampling needs an even n_samples")
        if self.sigma_p < 0:
            raise ValueError("sigma_p must be >= 0")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        if self.chunk < 2 or self.chunk % 2:
            raise ValueError("chunk must be an even number >= 2")
        m, n_phi = self.resolved_grid()
        if n_phi & (n_phi - 1) or n_phi < 2 * m + 1:
            raise ValueError("n_phi must be a power of two >= 2*m_max + 1")

    def initial_momenta(self) -> np.ndarray:
        n = self.n_samples // 2 if self.antithetic else self.n_samples
        z, _ = normals_and_uniforms(self.seed, 0, n, self.stream)
        d = self.sigma_p * z
        if not self.antithetic:
            return self.rho_L + d
        out = np.empty(2 * n)
        out[0::2] = self.rho_L + d
        out[1::2] = self.rho_L - d
        return out

    def as_dict(self):
        d = asdict(self)
        d["params"] = asdict(self.params)
        return d


@dataclass
class QuantumResult:
    stats: MomentumStats
    sample_means: np.ndarray     # (n_samples, n_kicks), rho - rho_L - offset
    manifest: dict = field(default_factory=dict)


def _propagate_chunk(rho0, spec: QuantumRunSpec, n_phi0, events, hist_unit):
    """Propagate one chunk of plane waves; per-sample per-kick moments."""
    params = spec.params
    h, A = params.hbar, params.A
    S, T = rho0.size, spec.n_kicks
    n_phi = n_phi0
    c = np.zeros((S, n_phi), dtype=complex)
    c[:, 0] = 1.0
    y0 = rho0 / h
    mean = np.empty((S, T))
    m2 = np.empty((S, T))
    cache = {}

    def tables(n_phi, n):
        odd = n % 2
        key = (n_phi, odd)
        if key not in cache:
            # integer part of the ladder shift goes into the offset, exactly
            beta, off = _split(y0 + rocking_offset(n, A) / h)
            p = h * (_ladder(n_phi)[None, :] + off[:, None] + beta[:, None])
            tau = flight_time(n, params.b, spec.parity)
            cache[key] = (p, np.exp(-1j * p * p * (tau / (2.0 * h))))
        return cache[key]

    kick = _kick_phase(n_phi, params.K, h)
    for j in range(T):
        n = j + 1
        c = sfft.fft(sfft.ifft(c, axis=1) * kick, axis=1)
        p, drift = tables(n_phi, n)
        c *= drift
        P = c.real**2 + c.imag**2
        M = n_phi // 4
        edge = P[:, M + 1:n_phi - M].sum(axis=1)
        if edge.max() > EDGE_TOL:
            events.append({"kick": n, "n_phi_from": n_phi, "n_phi_to": 2 * n_phi,
                           "edge_population": float(edge.max())})
            c = _grow(c)
            n_phi *= 2
            kick = _kick_phase(n_phi, params.K, h)
            p, _ = tables(n_phi, n)
            P = c.real**2 + c.imag**2
        d = p - (spec.rho_L + rocking_offset(n, A))
        mean[:, j] = np.einsum("ij,ij->i", P, d)
        m2[:, j] = np.einsum("ij,ij->i", P, d * d)
    # final histogram on hbar-wide bins centred on rho_L + hbar k
    k = np.rint((p - spec.rho_L) / hist_unit).astype(np.int64)
    return mean, m2, k.ravel(), P.ravel(), n_phi


def run_quantum(spec: QuantumRunSpec) -> QuantumResult:
    """Propagate an incoherent ensemble of plane waves and collect statistics.

    Samples are processed in chunks of ``spec.chunk``; chunks are
    independent and may run on ``spec.workers`` threads.  Reductions run in
    sample order, so results do not depend on the worker count.
    """
    spec.validate()
    t_start = time.perf_counter()
    m_max, n_phi = spec.resolved_grid()
    rho0 = spec.initial_momenta()
    S, T = rho0.size, spec.n_kicks
    hist_unit = spec.params.hbar
    bounds = [(s, min(s + spec.chunk, S)) for s in range(0, S, spec.chunk)]
    chunk_events = [[] for _ in bounds]

    def job(i):
        lo, hi = bounds[i]
        return _propagate_chunk(rho0[lo:hi], spec, n_phi, chunk_events[i], hist_unit)

    if spec.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            parts = list(pool.map(job, range(len(bounds))))
    else:
        parts = [job(i) for i in range(len(bounds))]

    mean = np.concatenate([p[0] for p in parts])
    m2 = np.concatenate([p[1] for p in parts])
    k_all = np.concatenate([p[2] for p in parts])
    w_all = np.concatenate([p[3] for p in parts])

    A = spec.params.A
    kicks = np.arange(1, T + 1)
    offsets = np.array([rocking_offset(int(n), A) for n in kicks])
    mean_shift = mean.mean(axis=0)
    second_shift = m2.mean(axis=0)
    variance = np.maximum(second_shift - mean_shift**2, 0.0)
    # independent units are mirror pairs when sampling antithetically
    units = mean.reshape(S // 2, 2, T).mean(axis=1) if spec.antithetic else mean
    n_units = units.shape[0]
    sem = units.std(axis=0, ddof=1) / math.sqrt(n_units) if n_units > 1 \
        else np.full(T, math.nan)

    kmin, kmax = int(k_all.min()), int(k_all.max())
    counts = np.bincount(k_all - kmin, weights=w_all, minlength=kmax - kmin + 1)
    edges = spec.rho_L + hist_unit * (np.arange(kmin, kmax + 2) - 0.5)
    keep = counts > 0
    first, last = np.argmax(keep), len(keep) - np.argmax(keep[::-1])
    counts = counts[first:last]
    edges = edges[first:last + 1]

    events = [dict(e, chunk=i) for i, evs in enumerate(chunk_events) for e in evs]
    manifest = {
        "engine": "quantum",
        "spec": spec.as_dict(),
        "grid": {"m_max": m_max, "n_phi": n_phi,
                 "final_n_phi": max(p[4] for p in parts)},
        "grid_events": events,
        "wall_time_s": time.perf_counter() - t_start,
    }
    stats = MomentumStats(
        kicks=kicks,
        mean_shift=mean_shift,
        sem=sem,
        variance=variance,
        second_moment=second_shift + 2.0 * offsets * mean_shift + offsets**2,
        rocking_offset=offsets,
        hist_edges=edges,
        hist_counts=counts,
        n_samples=S,
        final_mean=float(spec.rho_L + offsets[-1] + mean_shift[-1]),
        meta={"engine": "quantum", "seed": spec.seed, "stream": spec.stream,
              "parity": spec.parity, "n_samples": S,
              "m_max": m_max, "n_phi": n_phi},
    )
    return QuantumResult(stats=stats, sample_means=mean, manifest=manifest)
