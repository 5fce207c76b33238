"""Slow light from a quantized coupling field.

Each coupling photon number gives its own dispersion slope and so its own
group velocity. The Poisson spread of the coupling field turns into a
spread of velocities, shown here at resonance and slightly off it.
"""

from qeit import CoherentPair, SystemParams, vg_stats

params = SystemParams()
fields = CoherentPair.from_photon_numbers(500)

for delta1 in (0.0, 0.05, 0.1, 0.16):
    s = vg_stats(params, fields, delta1)
    print(f"delta1={delta1:5.2f}  Vg/c={s.vg_mean:.4e}  spread={s.rel_fluct:7.4f}"
          f"  linearized={s.rel_fluct_linear:7.4f}  regime={s.regime}")

# The relative spread does not depend on the overall index prefactor.
deep = vg_stats(params.with_(gindex=10 * params.gindex), fields, 0.0)
print(f"10x gindex at resonance: spread={deep.rel_fluct:.4f}")
