"""Coherent-state photon statistics.

Truncated Poisson weights, diagonal expectation values over Fock sectors,
and Susskind-Glogower phase-operator moments of a coherent state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln, pdtr, pdtrc

DEFAULT_TAIL_EPS = 1e-12


@dataclass(frozen=True)
class CoherentPair:
    """Coherent amplitudes of the coupling (``alpha``) and probe (``beta``) modes."""

    alpha: complex
    beta: complex = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def n_alpha(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def n_beta(self) -> float:
        return abs(self.beta) ** 2

    @classmethod
    def from_photon_numbers(cls, n_alpha: float, n_beta: float = 0.0,
                            alpha_phase: float = 0.0) -> "CoherentPair":
        if n_alpha < 0 or n_beta < 0:
            raise ValueError("mean photon numbers must be >= 0")
        return cls(cmath.rect(math.sqrt(n_alpha), alpha_phase), math.sqrt(n_beta))


@dataclass(frozen=True)
class FockWeights:
    """Poisson photon-number distribution restricted to ``n_lo..n_hi``.

    ``tail_mass`` is the probability of the omitted photon numbers,
    evaluated from the regularized incomplete gamma function rather than
    from ``1 - sum(weights)``.
    """

    mean: float
    n_lo: int
    n_hi: int
    weights: np.ndarray
    tail_mass: float

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_lo, self.n_hi + 1)

    def __len__(self):
        return self.n_hi - self.n_lo + 1

    def weight(self, n: int) -> float:
        if n < self.n_lo or n > self.n_hi:
            return 0.0
        return float(self.weights[n - self.n_lo])

    @classmethod
    def point_mass(cls, n: int) -> "FockWeights":
        """Deterministic photon number ``n`` (no fluctuations)."""
        return cls(float(n), n, n, np.ones(1), 0.0)


_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirlerr(n: np.ndarray) -> np.ndarray:
    """``log(n!) - log(sqrt(2 pi n) (n/e)^n)`` for integer ``n >= 1``."""
    out = np.empty_like(n)
    small = n <= 15
    ns = n[small]
    out[small] = gammaln(ns + 1.0) - (ns + 0.5) * np.log(ns) + ns - _LN_SQRT_2PI
    nb = n[~small]
    nn = nb * nb
    s0, s1, s2, s3, s4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188
    out[~small] = np.select(
        [nb > 500, nb > 80, nb > 35],
        [(s0 - s1 / nn) / nb,
         (s0 - (s1 - s2 / nn) / nn) / nb,
         (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / nb],
        (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / nb,
    )
    return out


def _bd0(x: np.ndarray, m: float) -> np.ndarray:
    """Deviance term ``x log(x/m) + m - x`` without cancellation near ``x = m``."""
    out = x * np.log1p((x - m) / m) + (m - x)
    near = np.abs(x - m) < 0.1 * (x + m)
    if near.any():
        xs = x[near]
        v = (xs - m) / (xs + m)
        s = (xs - m) * v
        ej = 2.0 * xs * v
        v2 = v * v
        for j in range(1, 200):
            ej = ej * v2
            s_next = s + ej / (2 * j + 1)
            if np.array_equal(s_next, s):
                break
            s = s_next
        out[near] = s
    return out


def log_poisson(n, mean: float) -> np.ndarray:
    """``log(exp(-mean) mean**n / n!)`` accurate to a few ulps of the weight.

    Uses the saddle-point split into a Stirling-series error and a
    deviance term (Loader's method), which avoids the cancellation in
    ``n log(mean) - mean - lgamma(n+1)`` when ``mean`` is large.
    """
    n = np.atleast_1d(np.asarray(n, dtype=float))
    out = np.full(n.shape, -np.inf)
    if mean == 0:
        out[n == 0] = 0.0
        return out
    out[n == 0] = -mean
    pos = n > 0
    if pos.any():
        x = n[pos]
        out[pos] = -_stirlerr(x) - _bd0(x, mean) - _LN_SQRT_2PI - 0.5 * np.log(x)
    return out


def _window(mean: float, tail_eps: float) -> tuple[int, int]:
    """A range of photon numbers whose complement has mass below ``tail_eps``."""
    k = 10.0 * math.sqrt(mean) + 20.0
    while True:
        lo = max(0, int(mean - k))
        hi = int(mean + k) + 1
        outside = (pdtr(lo - 1, mean) if lo > 0 else 0.0) + pdtrc(hi, mean)
        if outside < tail_eps / 4:
            return lo, hi
        k *= 2.0


def poisson_weights(mean: float, tail_eps: float = DEFAULT_TAIL_EPS) -> FockWeights:
    """Smallest contiguous block of Poisson weights holding ``1 - tail_eps`` of the mass.

    The block grows from the mode, one photon number at a time, on whichever
    side has the larger next weight. Weights are evaluated in log space so
    that means of several thousand photons do not overflow, and the omitted
    mass comes from the incomplete gamma function.
    """
    if not (mean >= 0 and math.isfinite(mean)):
        raise ValueError(f"mean must be finite and >= 0, got {mean!r}")
    if not 0 < tail_eps < 1:
        raise ValueError(f"tail_eps must lie in (0, 1), got {tail_eps!r}")
    if mean == 0:
        return FockWeights(0.0, 0, 0, np.ones(1), 0.0)

    w_lo, w_hi = _window(mean, tail_eps)
    ns = np.arange(w_lo, w_hi + 1)
    logw = log_poisson(ns, mean).tolist()
    below = np.where(ns > 0, pdtr(ns - 1, mean), 0.0).tolist()  # P(N < n)
    above = pdtrc(ns, mean).tolist()  # P(N > n)

    mode = int(math.floor(mean))
    lo = hi = mode - w_lo
    last = len(ns) - 1
    tail = below[lo] + above[hi]
    while tail > tail_eps:
        left = logw[lo - 1] if lo > 0 else -math.inf
        right = logw[hi + 1] if hi < last else -math.inf
        if left > right:
            lo -= 1
        else:
            hi += 1
        tail = below[lo] + above[hi]
    weights = np.exp(np.asarray(logw[lo:hi + 1]))
    return FockWeights(float(mean), w_lo + lo, w_lo + hi, weights, float(tail))


@dataclass(frozen=True)
class DiagExpectation:
    mean: complex
    second_moment_re: float
    second_moment_im: float

    def std_re(self) -> float:
        return math.sqrt(max(self.second_moment_re - self.mean.real ** 2, 0.0))

    def std_im(self) -> float:
        return math.sqrt(max(self.second_moment_im - self.mean.imag ** 2, 0.0))


def _evaluate(f: Callable, n: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(n), dtype=complex)
    if vals.shape != n.shape:
        vals = np.broadcast_to(vals, n.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        raise ValueError(f"non-finite value at photon number n={int(n[bad][0])}")
    return vals


def expect_diag(f: Callable, w: FockWeights) -> DiagExpectation:
    """Expectation of a Fock-diagonal operator ``f(n)`` under weights ``w``.

    ``f`` is called once with the integer array of photon numbers and must
    return one value per entry (a scalar is broadcast). Sums run over
    ascending ``n`` so repeated calls are bit-identical.
    """
    vals = _evaluate(f, w.n)
    wt = w.weights
    return DiagExpectation(
        complex(np.sum(wt * vals)),
        float(np.sum(wt * vals.real ** 2)),
        float(np.sum(wt * vals.imag ** 2)),
    )


@dataclass(frozen=True)
class PhaseExpectations:
    cos_mean: float
    sin_mean: float
    cos2_mean: float
    cos_std: float


def phase_expectations(alpha: complex, trunc_eps: float = 1e-14) -> PhaseExpectations:
    """Susskind-Glogower cosine and sine moments in the coherent state ``|alpha>``.

    With ``E = sum_n |n><n+1|``, ``cos = (E + E^+)/2`` and
    ``sin = (E - E^+)/(2i)``. Using ``E E^+ = 1`` and
    ``E^+ E = 1 - |0><0|`` the moments reduce to overlaps of neighbouring
    Fock amplitudes.
    """
    alpha = complex(alpha)
    w = poisson_weights(abs(alpha) ** 2, trunc_eps)
    amp = np.sqrt(w.weights)
    phase = cmath.phase(alpha) if alpha != 0 else 0.0
    e1 = cmath.exp(1j * phase) * float(np.sum(amp[:-1] * amp[1:]))
    e2 = cmath.exp(2j * phase) * float(np.sum(amp[:-2] * amp[2:]))
    p0 = w.weight(0)
    mass = float(np.sum(w.weights))
    cos2 = (2.0 * e2.real + 2.0 * mass - p0) / 4.0
    cos_mean = e1.real
    return PhaseExpectations(
        cos_mean=cos_mean,
        sin_mean=e1.imag,
        cos2_mean=cos2,
        cos_std=math.sqrt(max(cos2 - cos_mean ** 2, 0.0)),
    )
