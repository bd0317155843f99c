"""Gamma, Beta and Riemann zeta in double precision, plus the semiclassical constant.

Everything here is real-argument only and pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SemiclassicalConstant",
    "beta_fn",
    "gamma_fn",
    "lcl_constant",
    "lcl_value",
    "log_gamma",
    "zeta_fn",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_ZETA_TERMS = 60


def _lanczos_series(z: float) -> float:
    # z is x - 1
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    return acc


def log_gamma(x: float) -> float:
    """ln Γ(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    if x < 0.5:
        # reflection keeps the series in its accurate range
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (z + 0.5) * math.log(t) - t + math.log(_lanczos_series(z))


def gamma_fn(x: float) -> float:
    """Γ(x) for real x > 0.

    Relative error stays below 1e-12 on (0, 50]. Integers up to 20 are
    returned exactly from the factorial table.
    """
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise ValueError(f"gamma_fn requires finite x > 0, got {x!r}")
    if x.is_integer() and x <= 21:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    if x > 10.0:
        # shift down with the recurrence so the power term stays small
        n = int(x - 9.0)
        prod = 1.0
        y = x
        for _ in range(n):
            y -= 1.0
            prod *= y
        return prod * gamma_fn(y)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * _lanczos_series(z)


def beta_fn(a: float, b: float) -> float:
    """B(a, b) = Γ(a)Γ(b)/Γ(a+b) for a, b > 0.

    Symmetric bit-for-bit: the arguments are ordered before evaluation.
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"beta_fn requires a, b > 0, got ({a!r}, {b!r})")
    a, b = (a, b) if a <= b else (b, a)
    if a + b < 40.0:
        return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b)
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def _borwein_d(n: int) -> list[float]:
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    d = []
    acc = 0.0
    for i in range(n + 1):
        acc += (
            n
            * math.factorial(n + i - 1)
            * 4.0**i
            / (math.factorial(n - i) * math.factorial(2 * i))
        )
        d.append(acc)
    return d


_BORWEIN_D = _borwein_d(_ZETA_TERMS)


def zeta_fn(s: float) -> float:
    """Riemann ζ(s) for real s > 1.

    Accelerated alternating (eta) series with 60 terms. The prefactor
    1/(1 - 2^{1-s}) is evaluated through expm1, so accuracy degrades only
    like the conditioning of ζ itself as s -> 1+.
    """
    s = float(s)
    if not s > 1:
        raise ValueError(f"zeta_fn requires s > 1, got {s!r}")
    if s > 60.0:
        return 1.0 + 2.0**-s + 3.0**-s
    n = _ZETA_TERMS
    d = _BORWEIN_D
    dn = d[n]
    acc = 0.0
    for k in range(n):
        term = (d[k] - dn) / (k + 1.0) ** s
        acc += -term if k % 2 else term
    eta = -acc / dn
    return eta / -math.expm1((1.0 - s) * math.log(2.0))


def lcl_value(sigma: float, dim: int) -> float:
    """Γ(σ+1) / ((4π)^{d/2} Γ(σ + d/2 + 1))."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma!r}")
    if dim < 1 or int(dim) != dim:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")
    top = sigma + 1.0
    bot = sigma + dim / 2.0 + 1.0
    if bot < 40.0:
        ratio = gamma_fn(top) / gamma_fn(bot)
    else:
        ratio = math.exp(log_gamma(top) - log_gamma(bot))
    return ratio / (4.0 * math.pi) ** (dim / 2.0)


@dataclass(frozen=True)
class SemiclassicalConstant:
    sigma: float
    dim: int
    value: float

    def recompute(self) -> float:
        return lcl_value(self.sigma, self.dim)


def lcl_constant(sigma: float, dim: int) -> SemiclassicalConstant:
    return SemiclassicalConstant(float(sigma), int(dim), lcl_value(sigma, dim))
