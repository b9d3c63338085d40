"""Laboratory to dimensionless parameter conversion.

The lattice is pulsed with period ``T``; the dimensionless momentum is
``rho = 2 T k_L p / M`` with ``k_L = 2 pi / lambda`` and the effective Planck
constant is ``hbar_eff = 8 omega_R T``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .constants import (
    CESIUM_D2_WAVELENGTH,
    CESIUM_MASS,
    CESIUM_RECOIL_FREQ,
    HBAR,
)

__all__ = [
    "LabParams",
    "DimensionlessParams",
    "ParameterError",
    "cesium_lab",
    "hbar_eff_from_lab",
    "rho_L_from_lab",
    "freq_offset_for_rho_L",
    "rocking_from_lab",
    "freq_mod_for_rocking",
    "momentum_lab_to_scaled",
    "momentum_scaled_to_lab",
    "to_dimensionless",
]


class ParameterError(ValueError):
    """A parameter violates one of the documented invariants."""


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be finite and > 0 (got {value!r})")


@dataclass(frozen=True)
class LabParams:
    """Laboratory quantities of a pulsed, optionally moving/accelerated lattice.

    Attributes
    ----------
    atom_mass : float
        Atomic mass M in kg.
    wavelength : float
        Lattice laser wavelength in m.
    recoil_freq : float
        Recoil frequency omega_R in rad/s.
    pulse_period : float
        Mean pulse period T in s.
    pulse_width : float
        Square pulse duration t_p in s, strictly less than T.
    lattice_depth : float
        Potential depth V0 in J.  Carried through; not used by the
        conversions here.
    freq_offset : float
        Constant AOM frequency difference Delta f in Hz (the beams differ by
        2 Delta f).  Signed.
    freq_mod_amplitude : float
        Linear frequency modulation delta f per kick period in Hz.  Signed.
    """

    atom_mass: float
    wavelength: float
    recoil_freq: float
    pulse_period: float
    pulse_width: float
    lattice_depth: float = 1.0e-28
    freq_offset: float = 0.0
    freq_mod_amplitude: float = 0.0

    def __post_init__(self):
        for name in ("atom_mass", "wavelength", "recoil_freq",
                     "pulse_period", "pulse_width", "lattice_depth"):
            _positive(name, getattr(self, name))
        for name in ("freq_offset", "freq_mod_amplitude"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.pulse_width >= self.pulse_period:
            raise ParameterError("pulse_width must be < pulse_period")

    @property
    def k_L(self) -> float:
        return 2.0 * math.pi / self.wavelength

    def recoil_mismatch(self) -> float:
        """Relative difference between omega_R and hbar k_L^2 / 2M."""
        derived = HBAR * self.k_L**2 / (2.0 * self.atom_mass)
        return abs(self.recoil_freq - derived) / derived

    def with_(self, **changes) -> "LabParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class DimensionlessParams:
    """Physics knobs of the kicked-rotor ratchet.

    ``kick_strength`` is K, ``period_asymmetry`` is b (free flights alternate
    between 1+b and 1-b), ``rocking_amplitude`` is A (the alternating linear
    potential) and ``hbar_eff`` the effective Planck constant.
    """

    kick_strength: float
    period_asymmetry: float = 0.0
    rocking_amplitude: float = 0.0
    hbar_eff: float = 1.0

    def __post_init__(self):
        K, b, A, h = (self.kick_strength, self.period_asymmetry,
                      self.rocking_amplitude, self.hbar_eff)
        if not (math.isfinite(K) and K > 0):
            raise ParameterError(f"K > 0 violated (K={K!r})")
        if not (math.isfinite(b) and 0.0 <= b < 1.0):
            raise ParameterError(f"0 <= b < 1 violated (b={b!r})")
        if not math.isfinite(A):
            raise ParameterError(f"|A| finite violated (A={A!r})")
        if not (math.isfinite(h) and h > 0):
            raise ParameterError(f"hbar_eff > 0 violated (hbar_eff={h!r})")

    # short aliases, the symbols everybody uses
    @property
    def K(self) -> float:
        return self.kick_strength

    @property
    def b(self) -> float:
        return self.period_asymmetry

    @property
    def A(self) -> float:
        return self.rocking_amplitude

    @property
    def hbar(self) -> float:
        return self.hbar_eff

    def with_(self, **changes) -> "DimensionlessParams":
        return replace(self, **changes)


def cesium_lab(**overrides) -> LabParams:
    """Cesium D2 lab parameters with the typical 9.47 us / 296 ns pulse train."""
    base = dict(
        atom_mass=CESIUM_MASS,
        wavelength=CESIUM_D2_WAVELENGTH,
        recoil_freq=CESIUM_RECOIL_FREQ,
        pulse_period=9.47e-6,
        pulse_width=296e-9,
    )
    base.update(overrides)
    return LabParams(**base)


def _check_recoil(lab: LabParams):
    mismatch = lab.recoil_mismatch()
    if mismatch > 0.01:
        warnings.warn(
            f"recoil_freq differs from hbar k_L^2/2M by {100 * mismatch:.2f}%",
            stacklevel=3,
        )


def hbar_eff_from_lab(lab: LabParams) -> float:
    """Effective Planck constant ``8 omega_R T``."""
    _check_recoil(lab)
    return 8.0 * lab.recoil_freq * lab.pulse_period


def rho_L_from_lab(lab: LabParams, hbar_eff: float) -> float:
    """Scaled momentum of lab-stationary atoms in the moving-lattice frame.

    ``rho_L = M lambda^2 Delta f hbar_eff / (4 pi hbar)``.
    """
    return (lab.atom_mass * lab.wavelength**2 * lab.freq_offset * hbar_eff
            / (4.0 * math.pi * HBAR))


def freq_offset_for_rho_L(rho_L: float, lab: LabParams, hbar_eff: float) -> float:
    """Inverse of :func:`rho_L_from_lab`: the Delta f giving ``rho_L``."""
    return (rho_L * 4.0 * math.pi * HBAR
            / (lab.atom_mass * lab.wavelength**2 * hbar_eff))


def rocking_from_lab(lab: LabParams) -> float:
    """Rocking amplitude ``A = 2 pi t_p delta_f`` for square pulses."""
    return 2.0 * math.pi * lab.pulse_width * lab.freq_mod_amplitude


def freq_mod_for_rocking(A: float, lab: LabParams) -> float:
    return A / (2.0 * math.pi * lab.pulse_width)


def momentum_lab_to_scaled(p, lab: LabParams):
    """``rho = 2 T k_L p / M``; works elementwise on arrays."""
    return 2.0 * lab.pulse_period * lab.k_L * p / lab.atom_mass


def momentum_scaled_to_lab(rho, lab: LabParams):
    return rho * lab.atom_mass / (2.0 * lab.pulse_period * lab.k_L)


def to_dimensionless(lab: LabParams, kick_strength: float,
                     period_asymmetry: float = 0.0):
    """Resolve a lab configuration to ``(DimensionlessParams, rho_L)``.

    K depends on the lattice depth and beam profile, which are not modelled,
    so it is passed in directly.
    """
    h = hbar_eff_from_lab(lab)
    params = DimensionlessParams(
        kick_strength=kick_strength,
        period_asymmetry=period_asymmetry,
        rocking_amplitude=rocking_from_lab(lab),
        hbar_eff=h,
    )
    return params, rho_L_from_lab(lab, h)
