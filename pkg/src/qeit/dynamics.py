"""Coherence dynamics inside one Fock sector.

The three slowly varying coherences ``R = (rho_ab, rho_cb, rho_ca)`` obey
``dR/dt = -M R + A``. The populations rho_bb and rho_cc are frozen at their
initial (dark-state) values. Photon operators act as scalars on a fixed
sector ``(n1, n2)``, so ``M`` is an ordinary 3x3 complex matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .dark_state import dark_state
from .params import SingularSectorError, SystemParams

CASES = ("a", "b", "c")

#: Condition number above which ``M`` is treated as singular.
SINGULAR_COND = 1e12

#: Eigenvector condition number above which the eigen-expm is abandoned.
EIG_COND_MAX = 1e8


class CoherenceVector(NamedTuple):
    rho_ab: complex
    rho_cb: complex
    rho_ca: complex

    @classmethod
    def from_array(cls, r) -> "CoherenceVector":
        r = np.asarray(r, dtype=complex)
        return cls(complex(r[0]), complex(r[1]), complex(r[2]))


@dataclass(frozen=True)
class Sector:
    """Drift matrix ``M`` and drive ``A`` for one Fock sector."""

    case: str
    n1: int
    n2: int
    delta1: float
    rho_bb0: float
    rho_cc0: float
    M: np.ndarray
    A: np.ndarray

    @property
    def label(self) -> str:
        return f"case={self.case} n1={self.n1} n2={self.n2} delta1={self.delta1:g}"


def initial_populations(params: SystemParams, n1: int, n2: int) -> tuple[float, float]:
    """Zeroth-order dark-state populations ``(rho_bb, rho_cc)``."""
    return dark_state(params, n1, n2, 0.0, order=1).populations


def drift_matrix(params: SystemParams, n1: int, n2: int, delta1: float,
                 probe_coupling: bool = True) -> np.ndarray:
    """``M`` on the sector ``(n1, n2)`` with spatial phases taken at ``z = 0``.

    The coupling entries are ``g2 sqrt(n2+1)`` and the probe entries
    ``g1 sqrt(n1+1)``, so that the products of conjugate entries reproduce
    ``g2^2 a2 a2^+`` and ``g1^2 a1 a1^+`` on the sector.
    """
    c2 = params.g2 * math.sqrt(n2 + 1)
    c1 = params.g1 * math.sqrt(n1 + 1) if probe_coupling else 0.0
    d = 1j * delta1
    return np.array([
        [params.gamma1 + d, -1j * c2, 0.0],
        [-1j * c2, params.gamma3 + d, 1j * c1],
        [0.0, 1j * c1, params.gamma2],
    ], dtype=complex)


def build_sector(params: SystemParams, case: str, n1: int, n2: int, delta1: float,
                 rho_bb0: float | None = None, rho_cc0: float | None = None) -> Sector:
    """Assemble ``M`` and ``A`` for one of the three coupling regimes.

    Case ``"a"`` (strong coupling laser) drops the probe coupling from ``M``
    and puts every atom in ``|b>``. Cases ``"b"`` and ``"c"`` keep the full
    matrix; populations default to those of the zeroth-order dark state.
    Field amplitudes and dipole factors are normalized to one.
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {CASES}")
    if n1 < 0 or n2 < 0:
        raise ValueError(f"photon numbers must be >= 0, got n1={n1}, n2={n2}")
    if case == "a":
        rho_bb0, rho_cc0 = 1.0, 0.0
    else:
        bb, cc = initial_populations(params, n1, n2)
        rho_bb0 = bb if rho_bb0 is None else rho_bb0
        rho_cc0 = cc if rho_cc0 is None else rho_cc0
    if rho_bb0 < 0 or rho_cc0 < 0 or rho_bb0 + rho_cc0 > 1 + 1e-12:
        raise ValueError(f"invalid populations rho_bb0={rho_bb0}, rho_cc0={rho_cc0}")
    M = drift_matrix(params, n1, n2, delta1, probe_coupling=(case != "a"))
    A = np.array([0.5j * rho_bb0, 0.0, 0.5j * rho_cc0], dtype=complex)
    return Sector(case, n1, n2, delta1, rho_bb0, rho_cc0, M, A)


def steady_state(M, A, label: str = "") -> CoherenceVector:
    """Solve ``M R = A`` (LU with partial pivoting)."""
    M = np.asarray(M, dtype=complex)
    A = np.asarray(A, dtype=complex)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise SingularSectorError(
            f"drift matrix is singular (cond={cond:.3g}) {label}".rstrip(), sector=label)
    R = np.linalg.solve(M, A)
    return CoherenceVector.from_array(R)


def sector_steady_state(sector: Sector) -> CoherenceVector:
    return steady_state(sector.M, sector.A, sector.label)


def expm_eig(X: np.ndarray) -> np.ndarray | None:
    """``exp(X)`` by diagonalization, or ``None`` if the eigenbasis is ill-conditioned."""
    w, V = np.linalg.eig(X)
    if np.linalg.cond(V) >= EIG_COND_MAX:
        return None
    return (V * np.exp(w)) @ np.linalg.inv(V)


def expm_pade(X: np.ndarray) -> np.ndarray:
    """``exp(X)`` by scaling and squaring with a Pade approximant."""
    return scipy.linalg.expm(X)


def propagator(M, t: float) -> np.ndarray:
    """``exp(-M t)``."""
    X = -np.asarray(M, dtype=complex) * t
    E = expm_eig(X)
    return expm_pade(X) if E is None else E


def evolve(M, A, R0, t: float) -> CoherenceVector:
    """Coherences at time ``t`` from ``R0``.

    ``R(t) = exp(-Mt) R0 + (1 - exp(-Mt)) M^{-1} A``. ``t = inf`` returns
    the steady state. A singular ``M`` is handled at finite ``t`` through
    the exponential of the augmented generator ``[[-M, A], [0, 0]]``.
    """
    if not t >= 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    M = np.asarray(M, dtype=complex)
    A = np.asarray(A, dtype=complex)
    R0 = np.asarray(R0, dtype=complex)
    if t == 0:
        return CoherenceVector.from_array(R0)
    if math.isinf(t):
        return steady_state(M, A)
    cond = np.linalg.cond(M)
    if np.isfinite(cond) and cond <= SINGULAR_COND:
        Rss = np.linalg.solve(M, A)
        return CoherenceVector.from_array(Rss + propagator(M, t) @ (R0 - Rss))
    G = np.zeros((4, 4), dtype=complex)
    G[:3, :3] = -M
    G[:3, 3] = A
    E = expm_pade(G * t)
    return CoherenceVector.from_array(E[:3, :3] @ R0 + E[:3, 3])


def dark_state_coherences(params: SystemParams, n1: int, n2: int, delta1: float,
                          order: int = 1) -> CoherenceVector:
    """Initial coherences ``rho_ab = c_a c_b*``, ``rho_cb = c_c c_b*``, ``rho_ca = c_c c_a*``."""
    s = dark_state(params, n1, n2, delta1, order)
    cb, ca, cc = s.c_b, s.c_a, s.c_c
    return CoherenceVector(ca * np.conj(cb), cc * np.conj(cb), cc * np.conj(ca))


def relaxation_rate(M) -> float:
    """Smallest real part among the eigenvalues of ``M``."""
    return float(np.min(np.linalg.eigvals(np.asarray(M, dtype=complex)).real))


def probe_chi(params: SystemParams, case: str, n1: int, n2: int, delta1: float) -> complex:
    """Susceptibility of one sector from the steady state driven by the probe only.

    The part of rho_ab linear in the probe field gives
    ``chi = 2 kappa gamma1 rho_ab`` once the drive ``A`` carries only its
    probe component.
    """
    s = build_sector(params, case, n1, n2, delta1)
    A = np.array([s.A[0], 0.0, 0.0])
    r = steady_state(s.M, A, s.label)
    return 2.0 * params.kappa * params.gamma1 * r.rho_ab
