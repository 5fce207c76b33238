"""Relaxation of one Fock sector from its dark state to the steady state."""

import numpy as np

from qeit import SystemParams
from qeit.dynamics import (build_sector, dark_state_coherences, evolve, relaxation_rate,
                           steady_state)

params = SystemParams(g1=0.05, g2=0.05, gamma3=0.01)
n1, n2, delta1 = 3, 40, 0.1
sector = build_sector(params, "b", n1, n2, delta1)
r0 = dark_state_coherences(params, n1, n2, delta1)
rss = np.array(steady_state(sector.M, sector.A))

print(f"slowest relaxation rate: {relaxation_rate(sector.M):.4g}")
for t in (0, 1, 5, 20, 100, 500, 2000):
    r = np.array(evolve(sector.M, sector.A, r0, t))
    print(f"t={t:6g}  rho_ab={r[0]:.5f}  |R - Rss|={np.linalg.norm(r - rss):.3e}")
