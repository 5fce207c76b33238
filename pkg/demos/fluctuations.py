"""Relative fluctuations of the probe susceptibility across the EIT window.

With the coupling field in a coherent state of 500 photons, the
susceptibility is a different number in every coupling Fock sector. This
script sweeps the probe detuning and prints the mean dispersion and
absorption together with their relative spreads p1 and p2.
"""

import numpy as np

from qeit import CoherentPair, SystemParams, fluctuation_sweep

params = SystemParams()  # Omega2_bar = gamma1/2 at 500 coupling photons
fields = CoherentPair.from_photon_numbers(500)
rows = fluctuation_sweep("b", params, fields, np.linspace(-1.0, 1.0, 21))

print(f"{'delta1':>7} {'chi1':>11} {'chi2':>11} {'p1':>9} {'p2':>9}")
for r in rows:
    s = r.stats
    fmt = lambda p: f"{p:9.4f}" if p is not None else f"{'-':>9}"
    print(f"{r.delta1:7.2f} {s.chi1_mean:11.3e} {s.chi2_mean:11.3e} {fmt(s.p1)} {fmt(s.p2)}")

# Dispersion crosses zero near delta1 = -Omega2_bar, where p1 blows up.
