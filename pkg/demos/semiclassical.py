"""Dark-state dispersion in the large-photon-number limit.

Near resonance the dispersion is linear with normal slope; a cubic term
turns it around at a detuning fixed by the two Rabi frequencies.
"""

import numpy as np

from qeit import SystemParams
from qeit.dark_state import dispersion_turning_point, semiclassical_chi

params = SystemParams()
o1, o2 = 0.3, 0.5
turn = dispersion_turning_point(o1, o2)
print(f"turning point: delta1 = {turn:.6f}")
for d in np.linspace(0, 1.5 * turn, 7):
    sc = semiclassical_chi(params, o1, o2, d)
    print(f"delta1={d:7.4f}  chi={sc.chi: .5e}  dchi/domega={sc.dchi_domega: .5e}")
