"""
From the optics table to the map
================================

Cesium in a pulsed standing wave: pulse period, pulse width and the AOM
frequencies fix hbar_eff, the rocking amplitude A and the starting
momentum rho_L.
"""

import math
import warnings

from kickratchet import cesium_lab, to_dimensionless
from kickratchet.units import freq_offset_for_rho_L, momentum_lab_to_scaled

# the stock recoil frequency is rounded, so the consistency check warns
warnings.simplefilter("ignore")

lab = cesium_lab(freq_mod_amplitude=1.25e6)
params, rho_L = to_dimensionless(lab, kick_strength=2.6, period_asymmetry=1 / 16)
print(params)
print("A / (3 pi / 4) =", params.A / (3 * math.pi / 4))

# AOM offset that puts the lattice at rho_L = 8 pi
df = freq_offset_for_rho_L(8 * math.pi, lab, params.hbar)
print(f"Delta f for rho_L = 8 pi: {df / 1e3:.2f} kHz")
_, rl = to_dimensionless(lab.with_(freq_offset=df), 2.6, 1 / 16)
print("rho_L / pi =", rl / math.pi)

# a quarter of the pulse period gives hbar_eff near 1/4
short = cesium_lab(pulse_period=lab.pulse_period / 4, pulse_width=100e-9)
print("hbar_eff(T/4) =", to_dimensionless(short, 2.1, 1 / 8)[0].hbar)

# two photon recoils in scaled units; not exactly hbar_eff because the
# rounded recoil frequency is slightly off hbar k_L^2 / 2M
print("2 hbar k_L ->", momentum_lab_to_scaled(2 * 1.054571817e-34 * lab.k_L, lab))
