"""Velocity spread against the coupling-field phase spread.

Linearizing the velocity operator in the coupling photon number makes its
commutator with the cosine phase operator proportional to the sine phase
operator, which bounds the product of spreads from below. The bound
vanishes for a real amplitude and is largest at a phase of pi/2.
"""

import cmath
import math

from qeit import SystemParams, uncertainty_bound

params = SystemParams()
for theta in (0.0, math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3):
    r = uncertainty_bound(params, cmath.rect(math.sqrt(500), theta), 0.1)
    print(f"arg(alpha)={theta:5.3f}  lhs={r.lhs:.4e}  rhs={r.rhs:.4e}  "
          f"holds={r.satisfied}  exact-spread lhs={r.lhs_exact:.4e}")
