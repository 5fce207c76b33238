"""System parameters shared by every module.

All rates, detunings and Rabi frequencies are measured in units of the
probe coherence decay rate ``gamma1`` (so ``gamma1 == 1`` by default).
Susceptibilities are reported in units of ``kappa`` and group velocities
as ``V_g / c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

#: Mean coupling photon number used for the dispersion-fluctuation figures.
DEFAULT_NBAR = 500.0

#: Rabi frequency of the coupling laser for those figures, ``g2*sqrt(nbar+1)``.
DEFAULT_OMEGA2 = 0.5

#: Group-index scale giving ``V_g/c ~ 3.3e-8`` (about 10 m/s) on resonance
#: for the default parameters.
DEFAULT_GINDEX = 7.5e6


def g2_for(omega2_bar: float, n_alpha: float) -> float:
    """Coupling constant that yields ``omega2_bar = g2*sqrt(n_alpha + 1)``."""
    return omega2_bar / math.sqrt(n_alpha + 1.0)


@dataclass(frozen=True)
class SystemParams:
    """Decay rates, single-photon couplings and response scales.

    Attributes
    ----------
    gamma1, gamma2, gamma3 : float
        Off-diagonal decay rates of rho_ab, rho_ca and rho_cb.
    g1, g2 : float
        Probe and coupling single-photon coupling constants.
    kappa : float
        Susceptibility scale ``g1**2 N / (omega1 gamma1)``.
    gindex : float
        Group-index scale ``omega1 kappa / (2 gamma1)``; multiplies the
        dispersion slope in the group-velocity denominator.
    """

    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1e-3
    g1: float = g2_for(DEFAULT_OMEGA2, DEFAULT_NBAR)
    g2: float = g2_for(DEFAULT_OMEGA2, DEFAULT_NBAR)
    kappa: float = 1.0
    gindex: float = DEFAULT_GINDEX

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v!r}")
        if self.gamma1 <= 0:
            raise ValueError(f"gamma1 must be > 0, got {self.gamma1}")
        for name in ("gamma2", "gamma3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        # g = 0 is allowed for decoupled-limit checks
        for name in ("g1", "g2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("kappa", "gindex"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    @classmethod
    def calibrated(cls, n_alpha: float = DEFAULT_NBAR, omega2_bar: float = DEFAULT_OMEGA2,
                   **kw) -> "SystemParams":
        """Parameters with ``g2`` chosen so that ``g2*sqrt(n_alpha+1) == omega2_bar``."""
        kw.setdefault("g2", g2_for(omega2_bar, n_alpha))
        return cls(**kw)


class SingularSectorError(ArithmeticError):
    """A Fock sector produced a (near) singular linear system or a pole."""

    def __init__(self, message: str, sector=None):
        super().__init__(message)
        self.sector = sector
