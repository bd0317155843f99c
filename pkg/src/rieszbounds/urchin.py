"""Spiny urchins: the plane minus dyadically refining radial slits.

Slits at level n start at radius r_n and sit at angles (k-1)π/2^{n+1},
k = 1..2^{n+2}; r_0 = 0. Sequences are handled through log2(r_n) so that
fast-growing choices such as r_n = 2^n/√n do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .report import BoundReport, flagged
from .riesz import aizenman_lieb_lift, counting_from_riesz, riesz_mean
from .specfun import beta_fn

__all__ = [
    "UrchinIndex",
    "UrchinSequence",
    "VDB_PREFACTOR",
    "packing_count",
    "square_riesz_exact",
    "urchin_corollary_order",
    "urchin_index",
    "urchin_lower_lemma37",
    "urchin_section_trace",
    "urchin_upper_lemma36",
    "urchin_vdb_counting",
]

VDB_PREFACTOR = 50.0 * (1.0 / 8.0 + 8.0 * math.pi) ** 2
_HORIZON = 10_000
_DECAY_TARGET = 1e-6


def _exp2(x: float) -> float:
    if x > 1023.0:
        return math.inf
    if x < -1074.0:
        return 0.0
    return 2.0**x


@dataclass(frozen=True)
class UrchinSequence:
    """Slit radii r_n, n >= 1.

    ``kind`` is one of ``linear`` (r_n = n), ``geometric`` (r_n = 2^{δn}),
    ``exp_over_sqrt`` (r_n = 2^n/√n) or ``explicit`` (given list r_1..r_N).
    """

    kind: str
    delta: float | None = None
    values: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in ("linear", "geometric", "exp_over_sqrt", "explicit"):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.kind == "geometric":
            if self.delta is None or not 0 < self.delta < 1:
                raise ValueError("geometric sequences need 0 < delta < 1")
        if self.kind == "explicit":
            vals = tuple(float(v) for v in self.values)
            if not vals:
                raise ValueError("explicit sequence is empty")
            if any(not v > 0 for v in vals):
                raise ValueError("explicit radii must be positive")
            object.__setattr__(self, "values", vals)

    @classmethod
    def linear(cls) -> "UrchinSequence":
        return cls("linear")

    @classmethod
    def geometric(cls, delta: float) -> "UrchinSequence":
        return cls("geometric", delta=float(delta))

    @classmethod
    def exp_over_sqrt(cls) -> "UrchinSequence":
        return cls("exp_over_sqrt")

    @classmethod
    def explicit(cls, radii) -> "UrchinSequence":
        return cls("explicit", values=tuple(radii))

    @property
    def label(self) -> str:
        if self.kind == "geometric":
            return f"geometric(delta={self.delta:g})"
        if self.kind == "explicit":
            return f"explicit(n={len(self.values)})"
        return self.kind

    @property
    def length(self) -> int | None:
        """Number of available terms, None for infinite generators."""
        return len(self.values) if self.kind == "explicit" else None

    @property
    def horizon(self) -> int:
        if self.kind == "explicit":
            return len(self.values)
        return self._validation[0]

    def log2_r(self, n: int) -> float:
        if n < 1:
            raise ValueError("log2_r is defined for n >= 1")
        if self.kind == "linear":
            return math.log2(n)
        if self.kind == "geometric":
            return self.delta * n
        if self.kind == "exp_over_sqrt":
            return n - 0.5 * math.log2(n)
        if n > len(self.values):
            raise IndexError(f"explicit sequence has only {len(self.values)} terms")
        return math.log2(self.values[n - 1])

    def r(self, n: int) -> float:
        if n == 0:
            return 0.0
        if self.kind == "explicit":
            if n > len(self.values):
                raise IndexError(f"explicit sequence has only {len(self.values)} terms")
            return self.values[n - 1]
        if self.kind == "linear":
            return float(n)
        return _exp2(self.log2_r(n))

    def scaled(self, n: int) -> float:
        """r_n 2^{-n}."""
        return _exp2(self.log2_r(n) - n)

    def threshold(self, n: int) -> float:
        """(2^{2n} - 1/4)/r_n², the coupling at which level n starts to bind."""
        lr = self.log2_r(n)
        return _exp2(2.0 * (n - lr)) - _exp2(-2.0 - 2.0 * lr)

    @cached_property
    def _validation(self) -> tuple[int, tuple[str, ...]]:
        flags: list[str] = []
        r1 = self.r(1)
        limit = len(self.values) if self.kind == "explicit" else _HORIZON
        scaled = []
        horizon = limit
        prev_log = -math.inf
        for n in range(1, limit + 1):
            lr = self.log2_r(n)
            if not lr > prev_log:
                flags.append(f"not-increasing@{n}")
                break
            if n > 1 and lr - prev_log > 1.0 + 1e-12:
                flags.append(f"doubling(24)-fails@{n - 1}")
            prev_log = lr
            s = _exp2(lr - n)
            scaled.append(s)
            if self.kind != "explicit" and s < _DECAY_TARGET * r1:
                horizon = n
                break
        # decay test for condition (20): either tiny, or monotone decay over
        # the second half of the horizon down to a tenth of the peak
        arr = np.asarray(scaled)
        if arr.size and not arr[-1] < _DECAY_TARGET * r1:
            tail = arr[arr.size // 2 :]
            decaying = tail.size >= 2 and np.all(np.diff(tail) <= 0) and arr[-1] <= 0.1 * arr.max()
            if not decaying:
                flags.append("decay(20)-not-evident")
        return horizon, tuple(flags)

    @property
    def validation_flags(self) -> list[str]:
        return list(self._validation[1])

    @property
    def valid(self) -> bool:
        return not self._validation[1]

    def level_of_radius(self, r: float) -> int:
        """n0 with r_{n0-1} < r <= r_{n0}."""
        if not r > 0:
            raise ValueError("radius must be positive")
        lo, hi = 0, 1
        target = math.log2(r)
        while self.log2_r(hi) < target:
            lo, hi = hi, 2 * hi
            if self.kind == "explicit" and hi > len(self.values):
                hi = len(self.values)
                if self.log2_r(hi) < target:
                    raise IndexError("radius beyond the explicit sequence")
                break
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.log2_r(mid) < target:
                lo = mid
            else:
                hi = mid
        return hi


@dataclass(frozen=True)
class UrchinIndex:
    lam: float
    n_hat: int
    r_hat: float


def urchin_index(seq: UrchinSequence, lam: float) -> UrchinIndex | None:
    """The largest n with Λ > (2^{2n} - 1/4)/r_n².

    Returns None when Λ <= 15/(4 r_1²): no level binds and the spectrum below
    Λ is empty. Raises if an explicit sequence is too short to decide.
    """
    if not lam > seq.threshold(1):
        return None
    if not seq.valid:
        # thresholds need not be monotone; scan the whole horizon
        best = 1
        for n in range(1, seq.horizon + 1):
            if lam > seq.threshold(n):
                best = n
        return UrchinIndex(lam, best, seq.r(best))
    lo, hi = 1, 2
    n_max = seq.length
    while True:
        if n_max is not None and hi > n_max:
            hi = n_max
            if lam > seq.threshold(hi):
                raise ValueError("explicit sequence too short to locate the index")
            break
        if not lam > seq.threshold(hi):
            break
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if lam > seq.threshold(mid):
            lo = mid
        else:
            hi = mid
    return UrchinIndex(lam, lo, seq.r(lo))


def urchin_section_trace(seq: UrchinSequence, r: float, lam: float, gamma: float) -> float:
    """Tr W(r, Λ)^γ for the angular operator on the circle of radius r."""
    n0 = seq.level_of_radius(r)
    pieces = 2.0 ** (n0 + 1)
    shift = lam + 1.0 / (4.0 * r * r)
    step = 4.0**n0 / (r * r)
    jmax = int(math.floor(math.sqrt(max(shift, 0.0) / step))) + 1
    total = 0.0
    for j in range(1, jmax + 1):
        gap = shift - step * j * j
        if gap > 0:
            total += 1.0 if gamma == 0 else gap**gamma
    return pieces * total


def _lemma36_flags(seq: UrchinSequence, sigma: float) -> list[str]:
    flags = list(seq.validation_flags)
    if sigma < 1.5:
        flags.append("sigma<3/2")
    return flags


def urchin_upper_lemma36(seq: UrchinSequence, sigma: float, lam: float) -> BoundReport:
    """(1/(4(σ+1))) r̂²Λ^{σ+1} + (16^{σ-1}/15^σ) Λ^σ ln(4Λ r̂²), zero below 15/(4r_1²)."""
    flags = _lemma36_flags(seq, sigma)
    idx = urchin_index(seq, lam)
    if idx is None:
        return flagged("urchin_lemma36", "Lemma 3.6", 0.0, flags, n_hat=None, r_hat=None)
    rh = idx.r_hat
    main = rh * rh * lam ** (sigma + 1) / (4.0 * (sigma + 1))
    log_term = 16.0 ** (sigma - 1) / 15.0**sigma * lam**sigma * math.log(4.0 * lam * rh * rh)
    return flagged(
        "urchin_lemma36",
        "Lemma 3.6",
        main + log_term,
        flags,
        n_hat=idx.n_hat,
        r_hat=rh,
        main_term=main,
        log_term=log_term,
    )


def square_riesz_exact(side: float, lam: float, sigma: float) -> float:
    """Σ_{j,k>=1} (Λ - π²(j²+k²)/side²)_+^σ."""
    m = int(math.floor(side * math.sqrt(max(lam, 0.0)) / math.pi)) + 1
    j = np.arange(1, m + 1, dtype=float)
    energies = (math.pi / side) ** 2 * (j[:, None] ** 2 + j[None, :] ** 2)
    return riesz_mean(energies.ravel(), lam, sigma)


def packing_count(seq: UrchinSequence, n: int) -> int:
    """Number of disjoint squares of side r_n/2^{n+1} packed in one segment of annulus n.

    Squares sit in a single radial row on the bisector of the segment's
    wedge (half-angle π/2^{n+1}), inner edges at r_{n-1} + i·side. A square
    is accepted when its inner corners lie strictly inside the wedge and its
    outer corners lie within radius r_n, so it meets no slit.
    """
    side_log = seq.log2_r(n) - (n + 1)
    if side_log < -1000:
        return 0
    side = _exp2(side_log)
    r_in, r_out = seq.r(n - 1), seq.r(n)
    tan_half = math.tan(math.pi / 2.0 ** (n + 1))
    half = 0.5 * side

    def fits(i: int) -> bool:
        rho = r_in + i * side
        return rho * tan_half > half and (rho + side) ** 2 + half * half <= r_out * r_out

    i_lo = max(0, math.floor((half / tan_half - r_in) / side) + 1)
    outer = r_out * r_out - half * half
    if outer <= 0:
        return 0
    i_hi = math.floor((math.sqrt(outer) - side - r_in) / side)
    # repair rounding at both ends against the exact predicate
    while i_lo > 0 and fits(i_lo - 1):
        i_lo -= 1
    while i_lo <= i_hi and not fits(i_lo):
        i_lo += 1
    while i_hi >= i_lo and not fits(i_hi):
        i_hi -= 1
    while fits(i_hi + 1):
        i_hi += 1
    return max(0, i_hi - i_lo + 1)


def _lemma37_start(seq: UrchinSequence) -> int:
    """Smallest N0 with r_{n-1} < (1 - 2^{-n}) r_n for all n >= N0 in the horizon."""
    n0 = 1
    for n in range(1, seq.horizon + 1):
        if not seq.r(n - 1) < (1.0 - 2.0**-n) * seq.r(n):
            n0 = n + 1
    return n0


def urchin_lower_lemma37(
    seq: UrchinSequence,
    sigma: float,
    lam: float,
    square_oracle: Callable[[float, float, float], float] = square_riesz_exact,
) -> BoundReport:
    """Variational lower bound from disjoint Dirichlet squares packed into the segments.

    Sum over levels n >= N0 of 2^{n+1} τ(n) R_σ(Λ; Q_{l_n}). ``square_oracle``
    is called as ``square_oracle(side, lam, sigma)``.
    """
    flags = list(seq.validation_flags)
    if sigma < 0:
        flags.append("sigma<0")
    n_start = _lemma37_start(seq)
    total = 0.0
    used = []
    for n in range(n_start, seq.horizon + 1):
        side_log = seq.log2_r(n) - (n + 1)
        side = _exp2(side_log)
        # lowest square eigenvalue 2π²/side² must lie below Λ
        if not 2.0 * math.pi**2 < lam * side * side:
            continue
        tau = packing_count(seq, n)
        if tau == 0:
            continue
        contrib = 2.0 ** (n + 1) * tau * square_oracle(side, lam, sigma)
        if contrib > 0:
            used.append(n)
            total += contrib
    return flagged(
        "urchin_lemma37",
        "Lemma 3.7",
        total,
        flags,
        n_start=n_start,
        levels_used=used,
        n_star=max(used) if used else None,
    )


def urchin_vdb_counting(seq: UrchinSequence, lam: float) -> BoundReport:
    """50(1/8 + 8π)² Λ r_{K(Λ)}² with K(Λ) = max{n : r_n 2^{-n} > √Λ/32}.

    The comparison bound assumes r_0 > 0; for the r_0 = 0 sequences used here
    r_1 serves as the base radius and the report is flagged.
    """
    flags = list(seq.validation_flags)
    base = seq.r(1)
    flags.append("r0=0:r1-as-base")
    if not lam > 2.0**14 / base**2:
        flags.append("lambda<=2^14/r0^2")
    level = math.sqrt(lam) / 32.0
    K = None
    for n in range(1, seq.horizon + 1):
        if seq.scaled(n) > level:
            K = n
    if K is not None and K == seq.horizon and seq.length is None:
        raise ValueError("K(Λ) reaches the validation horizon")
    if K is None:
        flags.append("K-empty")
        return flagged(
            "urchin_vdb", "van den Berg", math.nan, flags, K=None, prefactor=VDB_PREFACTOR
        )
    value = VDB_PREFACTOR * lam * seq.r(K) ** 2
    return flagged("urchin_vdb", "van den Berg", value, flags, K=K, prefactor=VDB_PREFACTOR)


_ORDER_THEOREM = {
    "linear": "Corollary 3.8(1)",
    "geometric": "Corollary 3.8(2)",
    "exp_over_sqrt": "Corollary 3.9",
}


def _order_form(seq: UrchinSequence, sigma: float, lam: float) -> float:
    if seq.kind == "linear":
        return lam ** (sigma + 1) * math.log(lam) ** 2
    if seq.kind == "geometric":
        return lam ** (sigma + 1.0 / (1.0 - seq.delta))
    try:
        return math.exp(2.0 * lam * math.log(2.0)) * lam**sigma
    except OverflowError:
        return math.inf


def urchin_corollary_order(seq: UrchinSequence, sigma: float, lam: float) -> BoundReport:
    """Explicit bound realising the growth orders of the urchin corollaries.

    For σ >= 3/2 the value is the Lemma 3.6 bound. For 0 <= σ < 3/2 the
    Lemma 3.6 bound at order 3/2 is turned into a counting bound and lifted
    back to order σ. ``details['effective_constant']`` is value divided by
    the order form (Λ^{σ+1}(ln Λ)², Λ^{σ+1/(1-δ)} or 2^{2Λ}Λ^σ).
    """
    if seq.kind not in _ORDER_THEOREM:
        raise ValueError("order forms exist for linear, geometric and exp_over_sqrt only")
    theorem = _ORDER_THEOREM[seq.kind]
    flags = list(seq.validation_flags)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if seq.kind == "exp_over_sqrt" and sigma < 1.5:
        flags.append("sigma<3/2")
    threshold = seq.threshold(1)
    if lam <= threshold:
        return flagged(
            "urchin_order", theorem, 0.0, flags, threshold=threshold, effective_constant=None
        )
    if sigma >= 1.5:
        report = urchin_upper_lemma36(seq, sigma, lam)
        value, r_hat = report.value, report.details["r_hat"]
    else:
        def upper32(m):
            return urchin_upper_lemma36(seq, 1.5, m).value

        def counting(m):
            return counting_from_riesz(upper32, m, 1.5) if m > threshold else 0.0

        if sigma == 0:
            value = counting(lam)
        else:
            value = aizenman_lieb_lift(counting, lam, sigma, 0.0, quad_tol=1e-8 * lam**sigma,
                                       breakpoints=[threshold])
        idx = urchin_index(seq, lam)
        r_hat = idx.r_hat if idx else None
    form = _order_form(seq, sigma, lam)
    eff = value / form if form and math.isfinite(form) else None
    return flagged(
        "urchin_order",
        theorem,
        value,
        flags,
        threshold=threshold,
        r_hat=r_hat,
        order_form=form,
        effective_constant=eff,
    )
