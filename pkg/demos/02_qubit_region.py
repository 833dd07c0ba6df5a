"""Where (H(A), H(B)) can lie for a qubit, and where the boundary is.

Samples Haar pure states for a few axis angles, checks every point against
the pure-state qubit relation, and traces the lower boundary by constrained
minimisation.  The CSV files are meant for an external plotting tool.

Run: python3 demos/02_qubit_region.py [outdir]
"""

# %%
import math
import sys
from pathlib import Path

import numpy as np

from urequiv.cli import rows_to_csv
from urequiv.explorer import map_region, saturate_boundary
from urequiv.observables import axis_in_xz, pauli_operator

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
a = pauli_operator([0, 0, 1])

# %% Region and boundary for each angle
for theta in (90, 45, 30, 0):
    b = pauli_operator(axis_in_xz(theta))
    region = map_region(a, b, n=20_000, seed=theta)
    hsum = region.points[:, 0] + region.points[:, 1]
    c_ab = max(math.cos(math.radians(theta / 2)), math.sin(math.radians(theta / 2)))
    mu = abs(-2 * math.log(c_ab))
    print(f"theta={theta:3d}  violations={region.violations}  min H(A)+H(B)={hsum.min():.6f}  MU bound={mu:.6f}")
    (out / f"region_{theta}.csv").write_text(rows_to_csv(["h_a", "h_b", "purity"], region.points))

    edge = []
    for t in np.linspace(0, math.log(2), 12):
        r = saturate_boundary(a, b, t, seed=1)
        edge.append([r.info["h_a"], r.info["h_b"], r.info["boundary_residual"]])
    (out / f"boundary_{theta}.csv").write_text(rows_to_csv(["h_a", "h_b", "residual"], edge))
    print("   boundary residuals up to", max(abs(e[2]) for e in edge))
