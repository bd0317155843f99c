"""Horn-shaped regions {|x'| |x_d|^{ν/(d-1)} < 1} and their eigenvalue-mean bounds.

The bounds hold for the Dirichlet Laplacian with constant coupling Λ. Bound
evaluators never raise on parameters outside the theorem's range; they
return a :class:`BoundReport` with ``hypotheses_ok=False`` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .report import BoundReport, flagged
from .riesz import IntervalPartition
from .specfun import beta_fn, gamma_fn, lcl_value, log_gamma, zeta_fn

__all__ = [
    "CRITICAL_THRESHOLD",
    "HornRegion",
    "HornSection",
    "cor35_constant",
    "horn1_rotated_contains",
    "horn1_rotated_section",
    "horn_asymptotic_leading",
    "horn_bound_integral_check",
    "horn_bound_thm32",
    "horn_contains",
    "horn_counting_cor33",
    "horn_critical_counting_cor35",
    "horn_critical_thm34",
    "sphere_measure",
    "thm32_coefficient",
    "thm34_constant",
]

# below this coupling the critical horn carries no eigenvalue
CRITICAL_THRESHOLD = math.pi**2 / 16.0


@dataclass(frozen=True)
class HornRegion:
    dim: int
    nu: float

    def __post_init__(self):
        if self.dim < 2 or int(self.dim) != self.dim:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")
        if not self.nu >= 1:
            raise ValueError(f"nu must be >= 1, got {self.nu!r}")
        if self.nu == 1 and self.dim != 2:
            raise ValueError("nu = 1 is only supported in dimension 2")

    def section(self, xprime_norm: float) -> "HornSection":
        return HornSection(self, float(xprime_norm))


@dataclass(frozen=True)
class HornSection:
    """The single interval (-w, w), w = |x'|^{(1-d)/ν}, above a point x'."""

    region: HornRegion
    xprime_norm: float

    @property
    def half_width(self) -> float:
        if self.xprime_norm == 0:
            return math.inf
        return self.xprime_norm ** ((1 - self.region.dim) / self.region.nu)

    @property
    def interval(self) -> tuple[float, float]:
        w = self.half_width
        return (-w, w)

    @property
    def length(self) -> float:
        return 2.0 * self.half_width


def horn_contains(h: HornRegion, point: Sequence[float]) -> bool:
    p = np.asarray(point, dtype=float).ravel()
    if p.size != h.dim:
        raise ValueError(f"point has {p.size} coordinates, region has dim {h.dim}")
    xp = float(np.linalg.norm(p[:-1]))
    xd = abs(float(p[-1]))
    return xp * xd ** (h.nu / (h.dim - 1)) < 1.0


def sphere_measure(m: int) -> float:
    """Surface measure of the unit sphere S^{m-1} in R^m (m = 1 gives 2)."""
    return 2.0 * math.pi ** (m / 2.0) / gamma_fn(m / 2.0)


def _hypothesis_flags(sigma: float, nu: float) -> list[str]:
    flags = []
    if sigma < 1.5:
        flags.append("sigma<3/2")
    if nu <= 1:
        flags.append("nu<=1")
    return flags


def thm32_coefficient(dim: int, nu: float, sigma: float) -> float:
    d = dim
    log_ratio = (
        log_gamma(nu / 2 + 1)
        + log_gamma(sigma + 1)
        - log_gamma((d + 1) / 2)
        - log_gamma(sigma + (d + 1 + nu) / 2)
    )
    return (
        zeta_fn(nu)
        / (2 ** (d - 1) * (d - 1))
        * (2 / math.pi) ** nu
        * math.exp(log_ratio)
    )


def horn_bound_thm32(h: HornRegion, sigma: float, lam: float) -> BoundReport:
    """Uniform upper bound on R_σ(Λ; Ω_ν) for ν > 1, σ >= 3/2.

    With the coefficient c(d, ν, σ) returned by :func:`thm32_coefficient`,
    the value is c · Λ^{σ + (d-1+ν)/2}.
    """
    flags = _hypothesis_flags(sigma, h.nu)
    expo = sigma + (h.dim - 1 + h.nu) / 2
    if h.nu <= 1:
        # zeta has a pole at 1; no finite value exists
        return flagged("horn_thm32", "Theorem 3.2", math.inf, flags, exponent=expo)
    coef = thm32_coefficient(h.dim, h.nu, sigma)
    value = coef * lam**expo if lam > 0 else 0.0
    # For d >= 3 the x'-integral of the section traces is (d-1) times the
    # closed form; both are carried so callers can choose.
    return flagged(
        "horn_thm32",
        "Theorem 3.2",
        value,
        flags,
        coefficient=coef,
        exponent=expo,
        section_integral_value=(h.dim - 1) * value,
    )


def horn_bound_integral_check(
    h: HornRegion, sigma: float, lam: float, quad_tol: float = 1e-8
) -> float:
    """The x'-integral of the section traces, evaluated by quadrature.

    Computes L_{σ,d-1} |S^{d-2}| Σ_j ∫_0^∞ (Λ - π²j²/(4 r^{2(1-d)/ν}))_+^{σ+(d-1)/2} r^{d-2} dr,
    i.e. the reduction to sections written in polar coordinates in x'. Each
    j-term is supported on r < r_j = (2√Λ/(πj))^{ν/(d-1)}. The sum over j is
    truncated once the remaining tail, bounded through the ζ-tail, drops
    below ``quad_tol``.
    """
    d, nu = h.dim, h.nu
    if nu <= 1:
        raise ValueError("integral check requires nu > 1")
    if lam <= 0:
        return 0.0
    p = sigma + (d - 1) / 2
    k = 2.0 * (d - 1) / nu
    pref = lcl_value(sigma, d - 1) * sphere_measure(d - 1)

    def term(j: int) -> float:
        c = math.pi**2 * j**2 / 4.0
        rj = (lam / c) ** (1.0 / k)
        # substitute r = rj * s so the integrand lives on [0, 1]
        scale = rj ** (d - 1)

        def f(s):
            return (lam - c * (rj * s) ** k) ** p * s ** (d - 2)

        val, _ = integrate.quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
        return scale * val

    # the j-th term is exactly term(1) * j^{-ν}; the closed form is not used,
    # only its decay rate to bound the truncated tail
    first = term(1)
    total = first
    j = 2
    while True:
        t = term(j)
        total += t
        # tail bound: sum_{i>j} first * i^{-ν} <= first * j^{1-ν}/(ν-1)
        tail = first * j ** (1 - nu) / (nu - 1)
        if pref * tail < quad_tol or j > 10**6:
            break
        if j > 64:
            # remaining terms scale as j^{-ν}; sum them analytically by the
            # Euler-Maclaurin tail of the Hurwitz series
            rest = first * _hurwitz_tail(nu, j + 1)
            total += rest
            break
        j += 1
    return pref * total


def _hurwitz_tail(s: float, a: int) -> float:
    """sum_{i>=a} i^{-s} via Euler-Maclaurin (a >= 64)."""
    tail = a ** (1 - s) / (s - 1) + 0.5 * a**-s + s * a ** (-s - 1) / 12.0
    tail -= s * (s + 1) * (s + 2) * a ** (-s - 3) / 720.0
    return tail


def horn_counting_cor33(h: HornRegion, lam: float) -> BoundReport:
    """Counting-function bound C_{d,ν} Λ^{(d-1+ν)/2} obtained at τ_min = 3/(d+ν-1)."""
    d, nu = h.dim, h.nu
    flags = _hypothesis_flags(1.5, nu)
    tau_min = 3.0 / (d + nu - 1)
    if nu <= 1:
        return flagged("horn_cor33", "Corollary 3.3", math.inf, flags, tau_min=tau_min)
    e = d + nu
    geom = math.exp(
        (e + 2) / 2 * math.log(e + 2) - 1.5 * math.log(3.0) - (e - 1) / 2 * math.log(e - 1)
    )
    const = geom * thm32_coefficient(d, nu, 1.5)
    expo = (d - 1 + nu) / 2
    value = const * lam**expo if lam > 0 else 0.0
    return flagged(
        "horn_cor33", "Corollary 3.3", value, flags, constant=const, exponent=expo, tau_min=tau_min
    )


def thm34_constant() -> float:
    return (33.0 + 16.0 * math.log(4.0 / math.pi)) / (8.0 * math.pi)


def horn_critical_thm34(sigma: float, lam: float) -> BoundReport:
    """R_σ(Λ; Ω_1) bound in the critical planar case (ν = 1, d = 2)."""
    flags = ["sigma<3/2"] if sigma < 1.5 else []
    C = thm34_constant()
    if lam <= CRITICAL_THRESHOLD:
        return flagged("horn_thm34", "Theorem 3.4", 0.0, flags, constant=C, zero_regime=True)
    p = sigma + 1.0
    value = lam**p * math.log(lam) / (math.pi * p) + C * lam**p / p
    return flagged("horn_thm34", "Theorem 3.4", value, flags, constant=C, zero_regime=False)


def cor35_constant() -> float:
    return (
        math.sqrt(5.0 / 3.0)
        * (825.0 + 400.0 * math.log(4.0 / math.pi) + 360.0 * math.pi * math.log(5.0 / 3.0))
        / (72.0 * math.pi)
    )


def horn_critical_counting_cor35(lam: float) -> BoundReport:
    C = cor35_constant()
    lead = (5.0 / 3.0) ** 1.5 / math.pi
    if lam <= CRITICAL_THRESHOLD:
        return flagged(
            "horn_cor35", "Corollary 3.5", 0.0, [], constant=C, leading=lead, zero_regime=True
        )
    value = lead * lam * math.log(lam) + C * lam
    return flagged(
        "horn_cor35", "Corollary 3.5", value, [], constant=C, leading=lead, zero_regime=False
    )


def horn_asymptotic_leading(h: HornRegion, sigma: float, lam: float) -> float:
    """Leading term of R_σ(Λ; Ω_ν) as Λ -> ∞, planar horns only."""
    if h.dim != 2:
        raise NotImplementedError("asymptotics are only available for d = 2")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    nu = h.nu
    if nu == 1:
        return lam ** (sigma + 1) * math.log(lam) / (math.pi * (sigma + 1))
    coef = (
        zeta_fn(nu)
        * (2 / math.pi) ** nu
        * beta_fn(nu / 2 + 1, sigma + 1)
        / beta_fn(sigma + (nu + 3) / 2, 0.5)
    )
    return coef * lam ** (sigma + (nu + 1) / 2)


def horn1_rotated_section(x1: float) -> IntervalPartition:
    """Section of Ω_1 in coordinates rotated by π/4, where |x1² - x2²| < 2."""
    a = x1 * x1
    if abs(x1) <= math.sqrt(2.0):
        return IntervalPartition((2.0 * math.sqrt(a + 2.0),))
    width = math.sqrt(a + 2.0) - math.sqrt(a - 2.0)
    return IntervalPartition((width, width))


def horn1_rotated_contains(x1: float, x2: float) -> bool:
    return abs(x1 * x1 - x2 * x2) < 2.0
