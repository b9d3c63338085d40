"""Closed-form predictions for the two-period, rocked kicked rotor.

The ratchet current after ``t`` kicks of an ensemble started at momentum
``rho_L`` is ::

    I(t) = I0 * sin((1 - b) A - 2 b rho_L) * F(t)
    I0   = -K J1(2Kb) / (1 - J0(2Kb)^2) * [J0(2Kb) J2((1-b)K) + J2((1+b)K)]
    F(t) = 1 - J0(2Kb)^(2t - 2)

together with the timescales that govern whether the quantum ratchet is
visible: the ratchet time ``1/(Kb)^2``, the localisation time
``K^2/hbar_eff^2`` and the uncorrelated diffusion rate ``K^2/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import bessel_j
from .units import DimensionlessParams

__all__ = [
    "AnalyticPrediction",
    "max_current",
    "simplified_max_current",
    "time_factor",
    "current",
    "phase",
    "plot_phase",
    "ratchet_time",
    "localization_time",
    "localization_length",
    "width_damping",
    "uncorrelated_diffusion",
    "predict",
]


def max_current(params: DimensionlessParams) -> float:
    """Saturated current amplitude ``I0`` (sign as in the closed form).

    ``b = 0`` is the time-symmetric point: numerator and denominator both
    vanish and the physical limit 0 is returned.
    """
    K, b = params.K, params.b
    if b == 0.0:
        return 0.0
    x = 2.0 * K * b
    j0 = bessel_j(0, x)
    j1 = bessel_j(1, x)
    bracket = j0 * bessel_j(2, (1.0 - b) * K) + bessel_j(2, (1.0 + b) * K)
    return -K * j1 / (1.0 - j0 * j0) * bracket


def simplified_max_current(params: DimensionlessParams) -> float:
    """Small-b limit ``J2(K)/b`` of ``|I0|``.

    This is the familiar ``K^2 J2(K)/b`` with the ``K^2`` prefactor divided
    out, which is the normalisation that lines it up with :func:`max_current`.
    """
    if params.b == 0.0:
        return math.inf
    return bessel_j(2, params.K) / params.b


def time_factor(params: DimensionlessParams, t):
    """``F(t) = 1 - J0(2Kb)^(2t-2)`` for integer kicks ``t >= 1``.

    Accepts a scalar or an integer array.  ``b = 0`` never builds a current,
    so F is identically 0 there.
    """
    ta = np.asarray(t)
    if not np.issubdtype(ta.dtype, np.integer):
        if not np.all(ta == np.floor(ta)):
            raise ValueError("t must be an integer number of kicks")
        ta = ta.astype(np.int64)
    if np.any(ta < 1):
        raise ValueError("t must be >= 1")
    if params.b == 0.0:
        out = np.zeros(ta.shape)
    else:
        j0 = bessel_j(0, 2.0 * params.K * params.b)
        out = 1.0 - j0 ** (2.0 * ta - 2.0)
    return float(out) if out.ndim == 0 else out


def phase(params: DimensionlessParams, rho_L) -> float:
    """Argument of the sine in I(t): ``(1-b) A - 2 b rho_L``."""
    return (1.0 - params.b) * params.A - 2.0 * params.b * np.asarray(rho_L)


def plot_phase(params: DimensionlessParams, rho_L):
    """The experimental abscissa ``Phi = (2 rho_L b - A)/pi``.

    Equal to ``-phase/pi`` up to the ``b A`` term.
    """
    return (2.0 * np.asarray(rho_L) * params.b - params.A) / math.pi


def current(params: DimensionlessParams, rho_L, t, sigma_p: float = 0.0):
    """Mean momentum shift ``<rho - rho_L>`` after ``t`` kicks.

    ``sigma_p > 0`` applies the Gaussian-width damping of I0.
    """
    amp = max_current(params) * width_damping(sigma_p, params.b)
    return amp * np.sin(phase(params, rho_L)) * time_factor(params, t)


def ratchet_time(params: DimensionlessParams) -> float:
    """Kicks for the current to develop, ``1/(Kb)^2``; ``inf`` at ``b = 0``."""
    kb = params.K * params.b
    return math.inf if kb == 0.0 else 1.0 / (kb * kb)


def localization_time(params: DimensionlessParams) -> float:
    """Order-of-magnitude break time ``K^2/hbar_eff^2`` (heuristic)."""
    return (params.K / params.hbar) ** 2


def uncorrelated_diffusion(K: float) -> float:
    """Lowest-order momentum diffusion rate ``K^2/2`` per kick."""
    return 0.5 * K * K


def localization_length(params: DimensionlessParams) -> float:
    """Momentum-space localisation scale ``D/hbar_eff`` (order of magnitude)."""
    return uncorrelated_diffusion(params.K) / params.hbar


def width_damping(sigma_p: float, b: float) -> float:
    """Reduction ``exp(-4 sigma_p^2 b^2)`` of I0 for a Gaussian initial cloud."""
    if sigma_p < 0:
        raise ValueError("sigma_p must be >= 0")
    return math.exp(-4.0 * sigma_p**2 * b**2)


@dataclass(frozen=True)
class AnalyticPrediction:
    max_current: float
    ratchet_time: float
    localization_time: float
    uncorrelated_diffusion: float
    localization_length: float
    phase: float
    plot_phase: float
    damping: float
    # True at b = 0, where I0 is defined by its limit rather than evaluated
    degenerate: bool = False

    @property
    def saturated_current(self) -> float:
        return self.max_current * self.damping * math.sin(self.phase)


def predict(params: DimensionlessParams, rho_L: float = 0.0,
            sigma_p: float = 0.0) -> AnalyticPrediction:
    """Bundle every closed-form number for one parameter point."""
    return AnalyticPrediction(
        max_current=max_current(params),
        ratchet_time=ratchet_time(params),
        localization_time=localization_time(params),
        uncorrelated_diffusion=uncorrelated_diffusion(params.K),
        localization_length=localization_length(params),
        phase=float(phase(params, rho_L)),
        plot_phase=float(plot_phase(params, rho_L)),
        damping=width_damping(sigma_p, params.b),
        degenerate=params.b == 0.0,
    )
