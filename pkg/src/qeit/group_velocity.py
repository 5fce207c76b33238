"""Probe group velocity as a function of the coupling photon number.

``V_g / c = 1 / (1 + gindex * X)`` where ``X`` is the dispersion slope
``-d chi1 / d delta1`` of a single Fock sector (``d/d omega1 = -d/d delta1``).
Everything here uses the coupling-only susceptibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (DEFAULT_TAIL_EPS, CoherentPair, FockWeights, phase_expectations,
                   poisson_weights)
from .params import SingularSectorError, SystemParams
from .susceptibility import chi_coupling_only

#: ``|1 + gindex X|`` below this is a group-velocity pole.
POLE_TOL = 1e-12

FD_STEP = 1e-5


def _parts(params: SystemParams, n2, delta1):
    n2 = np.asarray(n2, dtype=float)
    d1 = params.gamma1 + 1j * delta1
    d3 = params.gamma3 + 1j * delta1
    den = d1 * d3 + params.g2 ** 2 * (n2 + 1.0)
    num = 1j * d3  # i (gamma3 + i delta1)
    dden = 1j * (params.gamma1 + params.gamma3) - 2.0 * delta1
    return num, den, dden


def dispersion_slope(params: SystemParams, n2, delta1: float):
    """``X = -d(chi1/kappa)/d(delta1/gamma1)`` in closed form."""
    num, den, dden = _parts(params, n2, delta1)
    g1 = params.gamma1
    dchi = g1 * (-1.0 / den - num * dden / den ** 2)
    return -g1 * dchi.real


def dispersion_slope_dn(params: SystemParams, n2, delta1: float):
    """``dX/dn2`` with ``n2`` treated as continuous."""
    num, den, dden = _parts(params, n2, delta1)
    g1 = params.gamma1
    d_ds = g1 * (1.0 / den ** 2 + 2.0 * num * dden / den ** 3)
    return -g1 * params.g2 ** 2 * d_ds.real


def dispersion_slope_fd(params: SystemParams, n2, delta1: float, h: float = FD_STEP):
    """Central difference of the sector dispersion, for cross-checks."""
    h = h * params.gamma1
    up = chi_coupling_only(params, n2, delta1 + h).real
    dn = chi_coupling_only(params, n2, delta1 - h).real
    return -params.gamma1 * (up - dn) / (2.0 * h) / params.kappa


def _denominator(params, n2, delta1):
    return 1.0 + params.gindex * dispersion_slope(params, n2, delta1)


def _check_pole(den, n2, delta1):
    bad = np.abs(den) < POLE_TOL
    if np.any(bad):
        n_bad = np.atleast_1d(n2)[np.atleast_1d(bad)][0]
        raise SingularSectorError(
            f"group-velocity pole at n2={n_bad:g}, delta1={delta1:g}",
            sector=f"n2={n_bad:g}, delta1={delta1:g}")


def vg_sector(params: SystemParams, n2, delta1: float):
    """``V_g / c`` of sector(s) ``n2``.

    Negative values (anomalous dispersion strong enough to flip the sign of
    the denominator) are returned as they are; see :func:`regime`.
    """
    den = _denominator(params, n2, delta1)
    _check_pole(den, n2, delta1)
    v = 1.0 / den
    return float(v) if np.ndim(v) == 0 else v


def regime(vg_over_c) -> str:
    """``slow`` (0 < v <= 1), ``fast`` (v > 1) or ``negative`` (v < 0)."""
    v = np.atleast_1d(vg_over_c)
    kinds = set(np.where(v < 0, "negative", np.where(v > 1, "fast", "slow")).tolist())
    return kinds.pop() if len(kinds) == 1 else "mixed"


def vg_dn(params: SystemParams, n2, delta1: float):
    """``d(V_g/c)/dn2``, the slope of the linearized velocity operator."""
    den = _denominator(params, n2, delta1)
    _check_pole(den, n2, delta1)
    return -params.gindex * dispersion_slope_dn(params, n2, delta1) / den ** 2


@dataclass(frozen=True)
class GroupVelocityStats:
    """Group-velocity statistics over the coupling photon distribution.

    ``vg_std`` is the exact spread of ``V_g(n2)`` under the Poisson weights;
    ``vg_std_linear`` is ``|slope_F| * std(n2)`` from the first-order
    expansion about the mean photon number.
    """

    vg_mean: float
    vg_std: float
    rel_fluct: float
    slope_F: float
    vg_at_mean: float
    vg_std_linear: float
    rel_fluct_linear: float
    regime: str


def vg_stats(params: SystemParams, fields: CoherentPair, delta1: float,
             tail_eps: float = DEFAULT_TAIL_EPS, *,
             weights: FockWeights | None = None) -> GroupVelocityStats:
    w = weights if weights is not None else poisson_weights(fields.n_alpha, tail_eps)
    v = np.atleast_1d(vg_sector(params, w.n, delta1))
    m = float(np.sum(w.weights * v))
    m2 = float(np.sum(w.weights * v * v))
    std = math.sqrt(max(m2 - m * m, 0.0))
    nbar = w.mean
    var_n = float(np.sum(w.weights * (w.n - nbar) ** 2))
    F = float(vg_dn(params, nbar, delta1))
    v0 = float(vg_sector(params, nbar, delta1))
    std_lin = abs(F) * math.sqrt(var_n)
    return GroupVelocityStats(
        vg_mean=m,
        vg_std=std,
        rel_fluct=std / abs(m),
        slope_F=F,
        vg_at_mean=v0,
        vg_std_linear=std_lin,
        rel_fluct_linear=std_lin / abs(v0),
        regime=regime(v),
    )


@dataclass(frozen=True)
class UncertaintyReport:
    """Velocity/phase uncertainty product against the commutator bound.

    ``lhs`` uses the spread of the linearized velocity operator, the
    operator whose commutator with the cosine phase fixes ``rhs``.
    ``lhs_exact`` swaps in the exact Poisson spread of ``V_g(n2)``; that
    product is not bounded by ``rhs`` and is reported for comparison only.
    """

    lhs: float
    rhs: float
    satisfied: bool
    lhs_exact: float
    satisfied_exact: bool
    vg_std: float
    vg_std_linear: float
    cos_std: float
    sin_mean: float
    slope_F: float


def _holds(lhs, rhs):
    tol = 1e-10 * max(lhs, rhs, 1e-30)
    return bool(lhs >= rhs - tol)


def uncertainty_bound(params: SystemParams, alpha: complex, delta1: float,
                      tail_eps: float = DEFAULT_TAIL_EPS) -> UncertaintyReport:
    fields = CoherentPair(alpha)
    st = vg_stats(params, fields, delta1, tail_eps)
    ph = phase_expectations(alpha, min(tail_eps, 1e-14))
    lhs = st.vg_std_linear * ph.cos_std
    lhs_exact = st.vg_std * ph.cos_std
    rhs = 0.5 * abs(st.slope_F * ph.sin_mean)
    return UncertaintyReport(
        lhs=lhs, rhs=rhs, satisfied=_holds(lhs, rhs),
        lhs_exact=lhs_exact, satisfied_exact=_holds(lhs_exact, rhs),
        vg_std=st.vg_std, vg_std_linear=st.vg_std_linear,
        cos_std=ph.cos_std, sin_mean=ph.sin_mean, slope_F=st.slope_F,
    )
