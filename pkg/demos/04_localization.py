"""
Dynamical localisation
======================

Without asymmetry (b = 0, A = 0) the quantum momentum spread grows like
the classical diffusion for a while and then freezes; the distribution
ends up with exponential tails.
"""

import numpy as np

from kickratchet import DimensionlessParams, QuantumRunSpec, run_quantum
from kickratchet import evolve_ensemble, sample_initial
from kickratchet.stats import fit_exponential_tails, variance_knee

p = DimensionlessParams(5.0, 0.0, 0.0, 1.0)
q = run_quantum(QuantumRunSpec(p, n_samples=100, n_kicks=120)).stats
c = evolve_ensemble(sample_initial(100_000, 0.0, 1.0, p), 120)

for t in (1, 10, 25, 60, 120):
    print(f"t = {t:3d}  <rho^2> quantum {q.second_moment[t - 1]:8.1f}"
          f"   classical {c.second_moment[t - 1]:8.1f}")

knee, rate, plateau = variance_knee(q.kicks, q.second_moment, late_start=60)
print(f"early rate {rate:.1f} per kick, plateau {plateau:.0f}, knee at t = {knee:.1f}")

width = np.sqrt(q.variance[-1])
left, right = fit_exponential_tails(q.hist_centers, q.hist_counts, 0.0, width)
print(f"tail decay lengths {1 / left.slope:.1f} (left), {-1 / right.slope:.1f} (right)"
      f", R^2 {left.r2:.3f} / {right.r2:.3f}")
