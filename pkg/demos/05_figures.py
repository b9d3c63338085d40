"""
Regenerating the figure data
============================

Each scenario writes CSV files, SVG plots drawn from them and a
checksummed manifest.  Sizes are cut down here so the script runs in
under a minute; drop the overrides for full-size runs, or use
``kickratchet experiment fig2 --out fig2``.
"""

import sys
from pathlib import Path

from kickratchet import experiments as E

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-figures")

r2 = E.run_fig2(out_dir=out / "fig2", n_samples=200)
print("fig2 sinusoid amplitude:", round(r2.summary["amplitude"], 3))

r3 = E.run_fig3(out_dir=out / "fig3", n_points=64, n_trajectories=4096)
print("fig3 amplitude ratio b=1/32 : 1/16:", round(r3.summary["classical_amplitude_ratio"], 3))

r4 = E.run_fig4(out_dir=out / "fig4", n_trajectories=200_000, n_samples=200)
q = r4.summary["_quantum_result"]
print("fig4 onsets (classical, quantum):", r4.summary["onset_classical"],
      r4.summary["onset_quantum"])

r5 = E.run_fig5(out_dir=out / "fig5", quantum_result=q, n_samples=200)
print("fig5 mean, variance:", round(r5.summary["mean"], 3), round(r5.summary["variance"], 1))

# a custom sweep from a scenario description
sc = E.Scenario(id="custom", engines=("analytic", "classical"),
                grid={"b": [1 / 32, 1 / 16, 1 / 8], "rho_L": [0.0, 6.0]},
                out_dir=str(out / "sweep"), options={"n_trajectories": 20_000})
print("sweep:", E.run_custom(sc).summary)
