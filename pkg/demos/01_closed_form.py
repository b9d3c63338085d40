"""
The closed-form ratchet current
===============================

How the saturated current depends on the kick strength and on the
period asymmetry b, and how quickly it builds up.
"""

import numpy as np

from kickratchet import DimensionlessParams, analytic

p = DimensionlessParams(kick_strength=2.6, period_asymmetry=1 / 16)
pred = analytic.predict(p)
print("I0      =", pred.max_current)
print("t_R     =", pred.ratchet_time)
print("t*      =", pred.localization_time)
print("D       =", pred.uncorrelated_diffusion)

# build-up: F(t) rises on the scale t_R
t = np.arange(1, 121)
F = analytic.time_factor(p, t)
for k in (2, 10, 38, 120):
    print(f"F({k:3d}) = {F[k - 1]:.3f}")

# I0 b is roughly independent of b when b is small
for b in (1 / 8, 1 / 16, 1 / 32, 1 / 64):
    q = DimensionlessParams(3.3, b)
    print(f"b = 1/{round(1 / b):<3d} I0 = {analytic.max_current(q):8.3f}   "
          f"I0*b = {analytic.max_current(q) * b:.4f}")

# the current is a sinusoid in the starting momentum with period pi/b
rho = np.linspace(0, 2 * np.pi / p.b, 9)
print(np.round(analytic.current(p, rho, 120), 3))
