"""Riesz means of explicit spectra and the scalar reductions built on them.

Conventions: a spectrum is a list of energies E_k of -Δ (or of a 1-D
Schrödinger operator), the coupling is λ, and the Riesz mean of order σ is
sum_k (λ - E_k)_+^σ. For σ = 0 only strictly positive gaps are counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate

from .specfun import beta_fn

__all__ = [
    "EigenvalueSpectrum",
    "IntervalPartition",
    "aizenman_lieb_lift",
    "counting_from_riesz",
    "default_tau_grid",
    "eq16_bound",
    "eq16_sum",
    "interval_trace",
    "partition_trace",
    "positive_power",
    "riesz_mean",
]


@dataclass(frozen=True)
class EigenvalueSpectrum:
    """Sorted energies; ``h`` is the grid spacing for numerically computed spectra."""

    values: np.ndarray
    h: float | None = None

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=float).ravel())
        if vals.size and not np.all(np.isfinite(vals)):
            raise ValueError("spectrum must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def exactness(self) -> str:
        return "exact" if self.h is None else f"numerical(h={self.h:g})"

    def __len__(self) -> int:
        return int(self.values.size)

    def riesz(self, lam: float, sigma: float) -> float:
        return riesz_mean(self, lam, sigma)


@dataclass(frozen=True)
class IntervalPartition:
    lengths: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        if any(not x > 0 for x in lengths):
            raise ValueError("interval lengths must be strictly positive")
        object.__setattr__(self, "lengths", lengths)

    @property
    def total(self) -> float:
        return float(sum(self.lengths))


def positive_power(gaps: np.ndarray, sigma: float) -> np.ndarray:
    """(x)_+^σ elementwise with 0^0 = 0."""
    gaps = np.asarray(gaps, dtype=float)
    pos = gaps > 0
    out = np.zeros_like(gaps)
    if sigma == 0:
        out[pos] = 1.0
    else:
        out[pos] = gaps[pos] ** sigma
    return out


def riesz_mean(spec: EigenvalueSpectrum | Sequence[float], lam: float, sigma: float) -> float:
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma!r}")
    values = spec.values if isinstance(spec, EigenvalueSpectrum) else np.asarray(spec, float)
    gaps = lam - values[values < lam]
    return float(positive_power(gaps, sigma).sum())


def interval_trace(lam: float, length: float, gamma: float) -> float:
    """sum_{j>=1} (λ - π²j²/length²)_+^γ, the Dirichlet trace on one interval."""
    if not length > 0:
        raise ValueError("length must be positive")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    if lam <= 0:
        return 0.0
    jmax = int(math.floor(length * math.sqrt(lam) / math.pi)) + 1
    j = np.arange(1, jmax + 1, dtype=float)
    gaps = lam - (math.pi * j / length) ** 2
    return float(positive_power(gaps, gamma).sum())


def partition_trace(lam: float, part: IntervalPartition | Iterable[float], gamma: float) -> float:
    lengths = part.lengths if isinstance(part, IntervalPartition) else tuple(part)
    return float(sum(interval_trace(lam, ell, gamma) for ell in lengths))


def eq16_sum(A: float, gamma: float) -> float:
    """Brute-force sum_{j>=1} (1 - j²/A²)_+^γ."""
    if A <= 1:
        return 0.0
    j = np.arange(1, int(math.floor(A)) + 1, dtype=float)
    return float(positive_power(1.0 - (j / A) ** 2, gamma).sum())


def eq16_bound(A: float, gamma: float) -> float:
    """(A/2) B(1/2, γ+1), an upper bound for :func:`eq16_sum`."""
    if not (A > 0 and gamma > 0):
        raise ValueError("eq16_bound requires A > 0 and gamma > 0")
    return 0.5 * A * beta_fn(0.5, gamma + 1.0)


def aizenman_lieb_lift(
    r_gamma: Callable[[float], float],
    lam: float,
    sigma: float,
    gamma: float,
    quad_tol: float = 1e-10,
    breakpoints: Iterable[float] | None = None,
) -> float:
    """Raise a Riesz mean from order γ to order σ > γ.

    Evaluates (1/B(γ+1, σ-γ)) ∫_0^λ τ^{σ-γ-1} r_γ(λ - τ) dτ. ``breakpoints``
    are the energies where r_γ has kinks or jumps (the spectrum, when known);
    the integration range is split there so each piece is smooth.
    """
    if not 0 <= gamma < sigma:
        raise ValueError(f"need 0 <= gamma < sigma, got gamma={gamma!r}, sigma={sigma!r}")
    if lam <= 0:
        return 0.0
    expo = sigma - gamma - 1.0
    cuts = {0.0, float(lam)}
    for e in (() if breakpoints is None else breakpoints):
        tau = lam - float(e)
        if 0.0 < tau < lam:
            cuts.add(tau)
    cuts = sorted(cuts)
    pieces = len(cuts) - 1
    tol = quad_tol / max(pieces, 1)

    def f(tau):
        return r_gamma(max(lam - tau, 0.0))

    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if a == 0.0 and expo != 0.0:
            # algebraic weight τ^expo handled exactly by QAWS
            val, _ = integrate.quad(
                f, a, b, weight="alg", wvar=(expo, 0.0), epsabs=tol, epsrel=1e-13, limit=200
            )
        else:
            val, _ = integrate.quad(
                lambda t: t**expo * f(t), a, b, epsabs=tol, epsrel=1e-13, limit=200
            )
        total += val
    return total / beta_fn(gamma + 1.0, sigma - gamma)


def default_tau_grid() -> np.ndarray:
    return np.logspace(-2, 2, 64)


def counting_from_riesz(
    r_sigma: Callable[[float], float],
    lam: float,
    sigma: float,
    tau_grid: Sequence[float] | None = None,
) -> float:
    """min over τ of (τλ)^{-σ} r_σ((1+τ)λ), an upper bound for the counting function."""
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    taus = default_tau_grid() if tau_grid is None else np.asarray(tau_grid, dtype=float)
    if taus.size == 0:
        raise ValueError("tau_grid is empty")
    if np.any(taus <= 0):
        raise ValueError("tau_grid entries must be positive")
    best = math.inf
    for tau in taus:
        best = min(best, (tau * lam) ** -sigma * r_sigma((1.0 + tau) * lam))
    return float(best)
