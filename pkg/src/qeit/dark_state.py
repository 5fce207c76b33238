"""Perturbative dark states of the Lambda atom and the semiclassical susceptibility.

Note the two Rabi-frequency conventions in use. Dark states are built
from ``Omega_1 = 2 g1 sqrt(n1)`` and ``Omega_2 = 2 g2 sqrt(n2 + 1)``
(:func:`rabi`), while the decaying-coherence modules write the coupling
strength as ``g2 sqrt(n2 + 1)`` with no factor of two. Both are kept as
they appear in their own derivations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import SystemParams


@dataclass(frozen=True)
class RabiTriple:
    omega1: float
    omega2: float
    omega: float


def rabi(params: SystemParams, n1: int, n2: int) -> RabiTriple:
    if n1 < 0 or n2 < 0:
        raise ValueError(f"photon numbers must be >= 0, got n1={n1}, n2={n2}")
    o1 = 2.0 * params.g1 * math.sqrt(n1)
    o2 = 2.0 * params.g2 * math.sqrt(n2 + 1)
    return RabiTriple(o1, o2, math.hypot(o1, o2))


@dataclass(frozen=True)
class DarkState:
    """Amplitudes on ``|b,n1,n2>``, ``|a,n1-1,n2>`` and ``|c,n1-1,n2+1>``."""

    order: int
    n1: int
    n2: int
    delta1: float
    c_b: complex
    c_a: complex
    c_c: complex
    degenerate: bool = False

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c_b, self.c_a, self.c_c], dtype=complex)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.vector, self.vector).real)

    @property
    def populations(self) -> tuple[float, float]:
        """(rho_bb, rho_cc) carried by this state."""
        return abs(self.c_b) ** 2, abs(self.c_c) ** 2


def dark_state(params: SystemParams, n1: int, n2: int, delta1: float,
               order: int = 1) -> DarkState:
    """Dark state to first or second order in the probe detuning.

    With no probe photons (``n1 == 0``) or vanishing couplings the state is
    the bare ground state ``|b>`` and is returned flagged ``degenerate``.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    r = rabi(params, n1, n2)
    if n1 == 0 or r.omega == 0:
        return DarkState(order, n1, n2, delta1, 1.0, 0.0, 0.0, degenerate=True)
    o1, o2, o = r.omega1, r.omega2, r.omega
    d = delta1
    c_b = o2 / o
    c_a = -2.0 * o1 * o2 * d / o ** 3
    c_c = -o1 / o
    if order == 2:
        c_b -= 4.0 * o1 ** 2 * o2 ** 3 * d ** 2 / o ** 7
        c_c -= 4.0 * o1 * o2 ** 4 * d ** 2 / o ** 7
    return DarkState(order, n1, n2, delta1, complex(c_b), complex(c_a), complex(c_c))


def h1_block(params: SystemParams, n1: int, n2: int, delta1: float) -> np.ndarray:
    """Interaction Hamiltonian (over hbar) on the three dark-state kets."""
    x = params.g1 * math.sqrt(n1)
    y = params.g2 * math.sqrt(n2 + 1)
    return np.array([
        [0.0, -x, 0.0],
        [-x, delta1, -y],
        [0.0, -y, delta1],
    ], dtype=complex)


def dark_energy(params: SystemParams, n1: int, n2: int, delta1: float) -> float:
    """Eigenvalue ``(Omega_1/Omega)^2 Delta_1`` of the dark branch (over hbar)."""
    r = rabi(params, n1, n2)
    if r.omega == 0:
        return 0.0
    return (r.omega1 / r.omega) ** 2 * delta1


def apply_H1(params: SystemParams, state: DarkState, delta1: float | None = None) -> float:
    """Residual ``|H1 psi - E psi| / (hbar gamma1)`` of an approximate dark state."""
    d = state.delta1 if delta1 is None else delta1
    h = h1_block(params, state.n1, state.n2, d)
    e = dark_energy(params, state.n1, state.n2, d)
    psi = state.vector
    return float(np.linalg.norm(h @ psi - e * psi)) / params.gamma1


@dataclass(frozen=True)
class SemiclassicalChi:
    chi: float
    dchi_domega: float


def semiclassical_chi(params: SystemParams, omega1_bar: float, omega2_bar: float,
                      delta1) -> SemiclassicalChi:
    """Dispersion of the lossless dark-state medium for large photon numbers.

    ``chi`` is odd and ``dchi_domega`` even in the detuning; both are in
    units of ``kappa`` with the dipole prefactor absorbed. Valid for small
    ``|delta1|`` only.
    """
    s = omega1_bar ** 2 + omega2_bar ** 2
    if s <= 0:
        raise ValueError("both Rabi frequencies are zero")
    k = params.kappa * params.gamma1
    d = np.asarray(delta1, dtype=float)
    a = 4.0 * omega2_bar ** 2 / s ** 2
    b = 16.0 * omega1_bar ** 2 * omega2_bar ** 4 / s ** 5
    chi = k * (-a * d + b * d ** 3)
    dchi = k * (a - 3.0 * b * d ** 2)
    if chi.ndim == 0:
        return SemiclassicalChi(float(chi), float(dchi))
    return SemiclassicalChi(chi, dchi)


def dispersion_turning_point(omega1_bar: float, omega2_bar: float) -> float:
    """Positive detuning where the semiclassical ``dchi/domega`` changes sign."""
    s = omega1_bar ** 2 + omega2_bar ** 2
    return math.sqrt(s ** 3 / (12.0 * omega1_bar ** 2 * omega2_bar ** 2))
