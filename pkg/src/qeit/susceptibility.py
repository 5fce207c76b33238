"""Operator-valued probe susceptibility and its photon-number statistics.

On a Fock sector every photon operator is a number, so the susceptibility
operator becomes a function of ``(n1, n2)``. Means and fluctuations follow
by weighting those values with the coherent-state Poisson distributions.
Values are in units of ``kappa``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import DEFAULT_TAIL_EPS, CoherentPair, FockWeights, poisson_weights
from .params import SingularSectorError, SystemParams

#: Relative fluctuations are left undefined when ``|mean| < P_UNDEFINED * kappa``.
P_UNDEFINED = 1e-14

_DEN_RTOL = 1e-14


@dataclass(frozen=True)
class Susceptibility:
    chi1: float
    chi2: float

    @property
    def complex(self) -> complex:
        return complex(self.chi1, self.chi2)


@dataclass(frozen=True)
class SusceptibilityStats:
    """Mean and spread of the dispersive (1) and absorptive (2) parts.

    ``p1``/``p2`` are ``None`` when the corresponding mean vanishes.
    """

    chi1_mean: float
    chi2_mean: float
    chi1_std: float
    chi2_std: float
    p1: float | None
    p2: float | None


def _check_den(den, scale, where):
    bad = np.abs(den) <= _DEN_RTOL * scale
    if np.any(bad):
        raise SingularSectorError(f"vanishing susceptibility denominator at {where(bad)}",
                                  sector=where(bad))


def chi_coupling_only(params: SystemParams, n2, delta1: float) -> np.ndarray:
    """Complex susceptibility of sectors ``n2`` when only the coupling field matters.

    ``i kappa gamma1 (gamma3 + i delta1) /
    [(gamma1 + i delta1)(gamma3 + i delta1) + g2^2 (n2 + 1)]``.
    ``n2`` may be an array or a non-integer photon number.
    """
    n2 = np.asarray(n2, dtype=float)
    d1 = params.gamma1 + 1j * delta1
    d3 = params.gamma3 + 1j * delta1
    s = params.g2 ** 2 * (n2 + 1.0)
    den = d1 * d3 + s
    _check_den(den, abs(d1 * d3) + s,
               lambda bad: f"n2={np.atleast_1d(n2)[np.atleast_1d(bad)][0]:g}, delta1={delta1:g}")
    return 1j * params.kappa * params.gamma1 * d3 / den


def chi_both_weak(params: SystemParams, n1, n2, delta1: float) -> np.ndarray:
    """Complex susceptibility when probe and coupling are comparably weak.

    The probe couples through ``g1^2 (n1 + 1)`` and the ground-state
    population is ``rho_bb = Omega_2^2 / Omega^2`` of the sector's dark state.
    ``n1`` and ``n2`` broadcast against each other.
    """
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    n1, n2 = np.broadcast_arrays(n1, n2)
    g = params
    o1sq = 4.0 * g.g1 ** 2 * n1
    o2sq = 4.0 * g.g2 ** 2 * (n2 + 1.0)
    tot = o1sq + o2sq
    rho_bb = np.divide(o2sq, tot, out=np.ones_like(tot), where=tot > 0)
    d1 = g.gamma1 + 1j * delta1
    d3 = g.gamma3 + 1j * delta1
    s1 = g.g1 ** 2 * (n1 + 1.0)
    s2 = g.g2 ** 2 * (n2 + 1.0)
    num = d3 * g.gamma2 + s1
    den = d1 * d3 * g.gamma2 + g.gamma2 * s2 + d1 * s1
    scale = abs(d1 * d3) * g.gamma2 + g.gamma2 * s2 + abs(d1) * s1

    def where(bad):
        i = np.argwhere(np.atleast_1d(bad))[0]
        return (f"n1={np.atleast_1d(n1)[tuple(i)]:g}, n2={np.atleast_1d(n2)[tuple(i)]:g}, "
                f"delta1={delta1:g}")

    _check_den(den, scale, where)
    return 1j * g.kappa * g.gamma1 * rho_bb * num / den


def chi_sector(case: str, params: SystemParams, n1: int, n2: int,
               delta1: float) -> Susceptibility:
    """Susceptibility of one Fock sector ``(n1, n2)``."""
    if n1 < 0 or n2 < 0:
        raise ValueError(f"photon numbers must be >= 0, got n1={n1}, n2={n2}")
    if case in ("a", "b"):
        z = complex(chi_coupling_only(params, n2, delta1))
    elif case == "c":
        z = complex(chi_both_weak(params, n1, n2, delta1))
    else:
        raise ValueError(f"unknown case {case!r}")
    return Susceptibility(z.real, z.imag)


def chi_mean_case_a(params: SystemParams, n_alpha: float, delta1: float) -> Susceptibility:
    """Strong-coupling mean: ``a2 a2^+`` replaced by ``n_alpha + 1``."""
    if n_alpha < 0:
        raise ValueError(f"n_alpha must be >= 0, got {n_alpha}")
    z = complex(chi_coupling_only(params, n_alpha, delta1))
    return Susceptibility(z.real, z.imag)


def _relative(std: float, mean: float, kappa: float) -> float | None:
    if abs(mean) < P_UNDEFINED * kappa:
        return None
    return std / abs(mean)


def stats_from_values(values: np.ndarray, weights: np.ndarray, kappa: float) -> SusceptibilityStats:
    """Weighted mean/std of real and imaginary parts (ascending-order sums)."""
    values = np.asarray(values, dtype=complex).ravel()
    weights = np.asarray(weights, dtype=float).ravel()
    m = complex(np.sum(weights * values))
    m2r = float(np.sum(weights * values.real ** 2))
    m2i = float(np.sum(weights * values.imag ** 2))
    s1 = math.sqrt(max(m2r - m.real ** 2, 0.0))
    s2 = math.sqrt(max(m2i - m.imag ** 2, 0.0))
    return SusceptibilityStats(m.real, m.imag, s1, s2,
                               _relative(s1, m.real, kappa), _relative(s2, m.imag, kappa))


def chi_stats(case: str, params: SystemParams, fields: CoherentPair, delta1: float,
              tail_eps: float = DEFAULT_TAIL_EPS, *,
              weights: FockWeights | None = None,
              probe_weights: FockWeights | None = None) -> SusceptibilityStats:
    """Statistics of the susceptibility operator in the coherent state ``fields``.

    Case ``"b"`` sums over the coupling photon number only. Case ``"c"``
    sums over both modes with independent truncations (total omitted mass
    at most ``2 tail_eps``). Case ``"a"`` is the fluctuation-free
    large-photon-number limit. Explicit ``weights`` override the coupling
    distribution, e.g. a :meth:`FockWeights.point_mass`.
    """
    if case == "a":
        z = chi_mean_case_a(params, fields.n_alpha, delta1)
        return stats_from_values(np.array([z.complex]), np.ones(1), params.kappa)
    w2 = weights if weights is not None else poisson_weights(fields.n_alpha, tail_eps)
    if case == "b":
        vals = chi_coupling_only(params, w2.n, delta1)
        return stats_from_values(vals, w2.weights, params.kappa)
    if case == "c":
        w1 = probe_weights if probe_weights is not None else poisson_weights(fields.n_beta, tail_eps)
        n1, n2 = np.meshgrid(w1.n, w2.n, indexing="ij")
        vals = chi_both_weak(params, n1, n2, delta1)
        return stats_from_values(vals, np.outer(w1.weights, w2.weights), params.kappa)
    raise ValueError(f"unknown case {case!r}")


@dataclass(frozen=True)
class FluctuationRow:
    delta1: float
    stats: SusceptibilityStats | None
    error: str | None = None


def fluctuation_sweep(case: str, params: SystemParams, fields: CoherentPair,
                      delta_grid: Sequence[float],
                      tail_eps: float = DEFAULT_TAIL_EPS) -> list[FluctuationRow]:
    """One row per detuning, in grid order; a failing row records its error."""
    grid = list(delta_grid)
    if not grid:
        raise ValueError("delta_grid is empty")
    w2 = poisson_weights(fields.n_alpha, tail_eps) if case != "a" else None
    w1 = poisson_weights(fields.n_beta, tail_eps) if case == "c" else None
    rows = []
    for d in grid:
        try:
            st = chi_stats(case, params, fields, float(d), tail_eps,
                           weights=w2, probe_weights=w1)
            rows.append(FluctuationRow(float(d), st))
        except SingularSectorError as exc:
            rows.append(FluctuationRow(float(d), None, str(exc)))
    return rows

