"""Fully quantized EIT in a three-level Lambda atom.

Operator-valued probe susceptibility and group velocity evaluated on
coherent-state photon-number distributions, per-sector coherence
dynamics with decay, and the velocity/phase uncertainty bound.
"""

__version__ = "0.1.0"

from .params import SingularSectorError, SystemParams, g2_for
from .fock import (CoherentPair, FockWeights, PhaseExpectations, expect_diag,
                   phase_expectations, poisson_weights)
from .dark_state import (DarkState, RabiTriple, apply_H1, dark_state, rabi,
                         semiclassical_chi)
from .dynamics import (CoherenceVector, Sector, build_sector, evolve, probe_chi,
                       steady_state)
from .susceptibility import (Susceptibility, SusceptibilityStats, chi_mean_case_a,
                             chi_sector, chi_stats, fluctuation_sweep)
from .group_velocity import (GroupVelocityStats, UncertaintyReport, uncertainty_bound,
                             vg_sector, vg_stats)

__all__ = [
    "SingularSectorError", "SystemParams", "g2_for",
    "CoherentPair", "FockWeights", "PhaseExpectations", "expect_diag",
    "phase_expectations", "poisson_weights",
    "DarkState", "RabiTriple", "apply_H1", "dark_state", "rabi", "semiclassical_chi",
    "CoherenceVector", "Sector", "build_sector", "evolve", "probe_chi", "steady_state",
    "Susceptibility", "SusceptibilityStats", "chi_mean_case_a", "chi_sector",
    "chi_stats", "fluctuation_sweep",
    "GroupVelocityStats", "UncertaintyReport", "uncertainty_bound", "vg_sector", "vg_stats",
]
