"""
Classical and quantum ratchets side by side
===========================================

At hbar_eff = 1/4 the quantum ensemble follows the classical one
closely; at hbar_eff = 1 dynamical localisation caps the current well
below the classical value.
"""

import math

from kickratchet import (DimensionlessParams, QuantumRunSpec, analytic,
                         evolve_ensemble, run_quantum, sample_initial)

for hbar, K, b in ((0.25, 2.1, 1 / 8), (1.0, 2.6, 1 / 16)):
    # Phi = 1/2 through the rocking amplitude
    p = DimensionlessParams(K, b, -math.pi / 2, hbar)
    cl = evolve_ensemble(sample_initial(200_000, 0.0, 1.0, p), 120)
    qu = run_quantum(QuantumRunSpec(p, sigma_p=1.0, n_samples=200)).stats
    print(f"hbar = {hbar}: t_R = {analytic.ratchet_time(p):.1f}, "
          f"t* = {analytic.localization_time(p):.1f}")
    for t in (5, 15, 40, 120):
        i = t - 1
        print(f"  t = {t:3d}  classical {cl.mean_shift[i]:6.3f} +- {cl.sem[i]:.3f}"
              f"   quantum {qu.mean_shift[i]:6.3f} +- {qu.sem[i]:.3f}"
              f"   closed form {float(analytic.current(p, 0.0, t, 1.0)):6.3f}")
