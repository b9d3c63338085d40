"""Physical constants (CODATA 2018 via scipy) and cesium D2 data."""

import math

from scipy import constants as _c

HBAR = _c.hbar                      # J s
ATOMIC_MASS_UNIT = _c.physical_constants["atomic mass constant"][0]  # kg
CESIUM_MASS = 132.905451958 * ATOMIC_MASS_UNIT  # kg, 133Cs
CESIUM_D2_WAVELENGTH = 852.34727582e-9  # m, vacuum
# Rounded laboratory value; the exact hbar k^2 / 2M is 2 pi x 2.0663 kHz.
CESIUM_RECOIL_FREQ = 2.0 * math.pi * 2.1e3  # rad/s
