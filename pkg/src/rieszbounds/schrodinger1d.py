"""One-dimensional Schrödinger operators -d²/dt² - V on (0, l) and on the line.

Negative eigenvalues are written -ν. Boundary conditions of the third kind
are parametrised by angles α, β in [0, π/2]:

    u'(0) = cot(α) u(0),    u'(l) = -cot(β) u(l),

so α = β = 0 is Dirichlet. Eigenvalues are located through the Prüfer angle
θ = atan2(u, u'), which increases through every zero of u and decreases
strictly in ν; the k-th eigenvalue solves θ(l; ν) = kπ - β.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize

from .report import BoundReport, flagged
from .specfun import lcl_value

__all__ = [
    "BoundaryAngles",
    "NegativeEigenvalueList",
    "PotentialProfile1D",
    "ShootResult",
    "SolverError",
    "TWO_LN3",
    "eigen_interval",
    "eigen_line",
    "eq33_identity_check",
    "eq34_residual",
    "lemma42_derivative_check",
    "lemma44_gap_bound",
    "omega_of",
    "riesz_dirichlet",
    "shoot",
    "thm41_bound",
]

TWO_LN3 = 2.0 * math.log(3.0)
_RTOL = 1e-12
_ATOL = 1e-13


class SolverError(RuntimeError):
    """Integration or root bracketing failed."""


@dataclass(frozen=True)
class PotentialProfile1D:
    """A non-negative potential on (0, length), extended by zero outside.

    ``func`` must accept a float. ``breakpoints`` are interior points where V
    or its derivatives jump; integrators restart there.
    """

    length: float
    func: Callable[[float], float]
    breakpoints: tuple[float, ...] = ()
    smoothness: str = "smooth"
    quad_tol: float = 1e-12
    samples: tuple[np.ndarray, np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("support length must be positive")
        bps = tuple(sorted(float(b) for b in self.breakpoints if 0 < b < self.length))
        object.__setattr__(self, "breakpoints", bps)

    @classmethod
    def square_well(cls, depth: float, length: float, a: float | None = None, b: float | None = None):
        """V = depth on (a, b) ⊂ (0, length), zero elsewhere; default (a, b) = (0, length)."""
        a = 0.0 if a is None else float(a)
        b = float(length) if b is None else float(b)
        if not 0 <= a < b <= length:
            raise ValueError("need 0 <= a < b <= length")

        def f(t, depth=float(depth), a=a, b=b):
            return depth if a < t < b else 0.0

        return cls(length, f, breakpoints=(a, b), smoothness="piecewise-constant")

    @classmethod
    def from_samples(cls, t: Sequence[float], v: Sequence[float]):
        """Piecewise-linear potential through (t_i, V_i); support shifted to (0, t_N - t_0)."""
        t = np.asarray(t, dtype=float)
        v = np.asarray(v, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise ValueError("need two equal-length 1-D sample arrays with at least 2 points")
        if np.any(np.diff(t) <= 0):
            raise ValueError("sample abscissae must be strictly increasing")
        if np.any(v < 0):
            raise ValueError("potential samples must be non-negative")
        ts = t - t[0]
        length = float(ts[-1])

        def f(x, ts=ts, v=v):
            if x <= 0.0 or x >= length:
                return 0.0
            return float(np.interp(x, ts, v))

        return cls(
            length,
            f,
            breakpoints=tuple(ts[1:-1]),
            smoothness="piecewise-linear",
            samples=(ts, v),
        )

    @classmethod
    def from_file(cls, path) -> "PotentialProfile1D":
        data = np.loadtxt(path, ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two whitespace-separated columns (t, V)")
        return cls.from_samples(data[:, 0], data[:, 1])

    def __call__(self, t: float) -> float:
        if t <= 0.0 or t >= self.length:
            return 0.0
        return float(self.func(t))

    @property
    def nodes(self) -> list[float]:
        return [0.0, *self.breakpoints, self.length]

    def integral(self, power: float = 1.0) -> float:
        """∫_0^l V(t)^power dt."""
        if self.samples is not None:
            ts, v = self.samples
            if power == 1.0:
                return float(integrate.trapezoid(v, ts))
            # refine each linear piece so Simpson sees the curvature of V^p
            fine_t = np.linspace(0.0, 1.0, 17)
            total = 0.0
            for i in range(ts.size - 1):
                tt = ts[i] + (ts[i + 1] - ts[i]) * fine_t
                vv = v[i] + (v[i + 1] - v[i]) * fine_t
                total += integrate.simpson(vv**power, x=tt)
            return float(total)
        total = 0.0
        pts = self.nodes
        for a, b in zip(pts[:-1], pts[1:]):
            val, _ = integrate.quad(
                lambda t: self.func(t) ** power, a, b, epsabs=self.quad_tol, epsrel=1e-12, limit=200
            )
            total += val
        return total

    def vmax(self) -> float:
        if self.samples is not None:
            return float(np.max(self.samples[1]))
        pts = self.nodes
        best = 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            grid = np.linspace(a, b, 2001)[1:-1]
            best = max(best, max(self.func(float(t)) for t in grid))
        return best

    def reflected(self) -> "PotentialProfile1D":
        """t -> V(l - t)."""
        ell = self.length
        f = self.func
        samples = None
        if self.samples is not None:
            ts, v = self.samples
            samples = ((ell - ts)[::-1], v[::-1].copy())
        return PotentialProfile1D(
            ell,
            lambda t: f(ell - t),
            breakpoints=tuple(ell - b for b in self.breakpoints),
            smoothness=self.smoothness,
            quad_tol=self.quad_tol,
            samples=samples,
        )

    def scaled(self, s: float) -> "PotentialProfile1D":
        """s² V(s t) on (0, l/s)."""
        f = self.func
        return PotentialProfile1D(
            self.length / s,
            lambda t: s * s * f(s * t),
            breakpoints=tuple(b / s for b in self.breakpoints),
            smoothness=self.smoothness,
            quad_tol=self.quad_tol,
        )

    def times(self, c: float) -> "PotentialProfile1D":
        f = self.func
        samples = None
        if self.samples is not None:
            samples = (self.samples[0], c * self.samples[1])
        return PotentialProfile1D(
            self.length,
            lambda t: c * f(t),
            breakpoints=self.breakpoints,
            smoothness=self.smoothness,
            quad_tol=self.quad_tol,
            samples=samples,
        )


@dataclass(frozen=True)
class BoundaryAngles:
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            x = getattr(self, name)
            if not 0.0 <= x <= math.pi / 2 + 1e-15:
                raise ValueError(f"{name} must lie in [0, π/2], got {x!r}")


@dataclass(frozen=True)
class NegativeEigenvalueList:
    """ν_1 > ν_2 > ... > 0; the eigenvalues themselves are -ν_k."""

    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> float:
        return self.values[k]

    def riesz(self, sigma: float) -> float:
        if sigma == 0:
            return float(len(self.values))
        return float(sum(v**sigma for v in self.values))


@dataclass(frozen=True)
class ShootResult:
    u_end: float
    du_end: float
    node_count: int
    theta_end: float
    norm2: float
    solution: object = field(default=None, repr=False, compare=False)


def _pieces(pot: PotentialProfile1D):
    pts = pot.nodes
    return list(zip(pts[:-1], pts[1:]))


def _theta_end(pot: PotentialProfile1D, nu: float, alpha: float) -> float:
    """Prüfer angle at t = l of the solution with initial data (sin α, cos α)."""
    theta = float(alpha)
    f = pot.func

    def rhs(t, y):
        s = math.sin(y[0])
        c = math.cos(y[0])
        return [c * c - (nu - f(t)) * s * s]

    for a, b in _pieces(pot):
        sol = integrate.solve_ivp(
            rhs, (a, b), [theta], method="DOP853", rtol=_RTOL, atol=_ATOL
        )
        if not sol.success:
            raise SolverError(f"Prüfer integration failed on ({a}, {b}) at ν={nu}: {sol.message}")
        theta = float(sol.y[0, -1])
    return theta


def _count_nodes(theta_end: float, tol: float = 1e-9) -> int:
    # interior zeros: multiples mπ, m >= 1, strictly below θ(l); a crossing
    # within ``tol`` of the endpoint is the boundary zero itself
    return max(math.ceil((theta_end - tol) / math.pi) - 1, 0)


def shoot(
    pot: PotentialProfile1D, nu: float, alpha: float, dense: bool = False
) -> ShootResult:
    """Integrate -u'' - Vu = -νu from u(0) = sin α, u'(0) = cos α to t = l.

    Returns u(l), u'(l), the number of interior sign changes of u, the
    Prüfer angle at l and ∫_0^l u². With ``dense=True`` the piecewise dense
    solutions are kept for later evaluation of u(t).
    """
    if not nu > 0:
        raise ValueError("nu must be positive")
    f = pot.func

    def rhs(t, y):
        q = nu - f(t)
        s = math.sin(y[2])
        c = math.cos(y[2])
        return [y[1], q * y[0], c * c - q * s * s, y[0] * y[0]]

    y = [math.sin(alpha), math.cos(alpha), float(alpha), 0.0]
    sols = []
    for a, b in _pieces(pot):
        sol = integrate.solve_ivp(
            rhs, (a, b), y, method="DOP853", rtol=_RTOL, atol=_ATOL, dense_output=dense
        )
        if not sol.success:
            raise SolverError(f"shooting failed on ({a}, {b}) at ν={nu}: {sol.message}")
        y = list(sol.y[:, -1])
        if dense:
            sols.append((a, b, sol.sol))
    return ShootResult(
        u_end=y[0],
        du_end=y[1],
        node_count=_count_nodes(y[2]),
        theta_end=y[2],
        norm2=y[3],
        solution=_PiecewiseSolution(sols) if dense else None,
    )


class _PiecewiseSolution:
    def __init__(self, pieces):
        self.pieces = pieces

    def u(self, t: float) -> float:
        for a, b, s in self.pieces:
            if a <= t <= b:
                return float(s(t)[0])
        raise ValueError("t outside the integration interval")


def eq34_residual(pot: PotentialProfile1D, nu: float, alpha: float, n_points: int = 25) -> float:
    """Max deviation of the shooting solution from its integral-equation form.

    u(t) = sin α cosh(√ν t) + cos α sinh(√ν t)/√ν - ∫_0^t sinh(√ν(t-s))/√ν V(s)u(s) ds,
    evaluated by quadrature at ``n_points`` points of (0, l], relative to
    max |u| on those points.
    """
    res = shoot(pot, nu, alpha, dense=True)
    sol = res.solution
    k = math.sqrt(nu)
    worst = 0.0
    scale = 0.0
    for t in np.linspace(0.0, pot.length, n_points + 1)[1:]:
        hom = math.sin(alpha) * math.cosh(k * t) + math.cos(alpha) * math.sinh(k * t) / k
        pts = [p for p in pot.breakpoints if p < t]
        val = 0.0
        edges = [0.0, *pts, t]
        for a, b in zip(edges[:-1], edges[1:]):
            piece, _ = integrate.quad(
                lambda s: math.sinh(k * (t - s)) / k * pot(s) * sol.u(s),
                a,
                b,
                epsabs=1e-13,
                epsrel=1e-12,
                limit=200,
            )
            val += piece
        u_t = sol.u(t)
        worst = max(worst, abs(u_t - (hom - val)))
        scale = max(scale, abs(u_t))
    return worst / max(scale, 1e-300)


def _nu_ceiling(pot: PotentialProfile1D, target: float, alpha: float) -> float:
    """A ν with θ(l; ν) below ``target``, starting from sup V."""
    hi = pot.vmax() * (1.0 + 1e-6) + 1e-12
    for _ in range(60):
        if _theta_end(pot, hi, alpha) < target:
            return hi
        hi = 2.0 * hi + 1.0
    raise SolverError("could not bracket the eigenvalue from above")


def eigen_interval(
    pot: PotentialProfile1D, bc: BoundaryAngles | tuple[float, float] = BoundaryAngles()
) -> NegativeEigenvalueList:
    """All negative eigenvalues -ν_k of the (α, β) problem on (0, l)."""
    if not isinstance(bc, BoundaryAngles):
        bc = BoundaryAngles(*bc)
    alpha, beta = bc.alpha, bc.beta
    theta0 = _theta_end(pot, 0.0, alpha)
    # θ(l; ν) decreases strictly in ν; roots of θ(l; ν) = kπ - β for kπ - β < θ(l; 0)
    count = 0
    while theta0 > (count + 1) * math.pi - beta:
        count += 1
    if count == 0:
        return NegativeEigenvalueList(())
    hi = _nu_ceiling(pot, math.pi - beta, alpha)
    values = []
    upper = hi
    for k in range(1, count + 1):
        target = k * math.pi - beta

        def g(nu, target=target):
            return _theta_end(pot, nu, alpha) - target

        nu_k = optimize.brentq(g, 0.0, upper, xtol=1e-15, rtol=1e-14, maxiter=200)
        theta_k = _theta_end(pot, nu_k, alpha)
        nodes = _count_nodes(theta_k)
        if nodes != k - 1:
            raise SolverError(f"eigenfunction {k} has {nodes} interior nodes, expected {k - 1}")
        values.append(nu_k)
        upper = nu_k
    return NegativeEigenvalueList(tuple(values))


def omega_of(mu: float) -> float:
    """arccot √μ on the branch (0, π/2]."""
    if mu <= 0:
        return math.pi / 2
    return math.atan(1.0 / math.sqrt(mu))


def eigen_line(pot: PotentialProfile1D) -> NegativeEigenvalueList:
    """Negative eigenvalues -μ_k of -d²/dt² - V on the whole line.

    Outside (0, l) an eigenfunction is c·exp(∓√μ t), which turns into the
    energy-dependent boundary angle ω = arccot √μ at both endpoints.
    """

    def theta_line(mu):
        w = omega_of(mu)
        return _theta_end(pot, mu, w) + w

    theta0 = theta_line(0.0)
    count = 0
    while theta0 > (count + 1) * math.pi:
        count += 1
    if count == 0:
        return NegativeEigenvalueList(())
    hi = pot.vmax() * (1.0 + 1e-6) + 1e-12
    for _ in range(60):
        if theta_line(hi) < math.pi:
            break
        hi = 2.0 * hi + 1.0
    else:
        raise SolverError("could not bracket the line eigenvalue from above")
    values = []
    upper = hi
    for k in range(1, count + 1):
        mu_k = optimize.brentq(
            lambda m, k=k: theta_line(m) - k * math.pi, 0.0, upper, xtol=1e-15, rtol=1e-14,
            maxiter=200,
        )
        values.append(mu_k)
        upper = mu_k
    return NegativeEigenvalueList(tuple(values))


def _eigen_k(pot, alpha, beta, k) -> float:
    ev = eigen_interval(pot, BoundaryAngles(alpha, beta))
    if len(ev) < k:
        raise SolverError(f"eigenvalue {k} does not exist at α={alpha}, β={beta}")
    return ev[k - 1]


def lemma42_derivative_check(
    pot: PotentialProfile1D,
    bc: BoundaryAngles | tuple[float, float],
    k: int = 1,
    h_alpha: float = 1e-4,
    wrt: str = "alpha",
) -> tuple[float, float]:
    """Finite-difference derivative of ν_k in α (or β) against ‖u‖^{-2}.

    ``u`` is the shooting solution normalised by its initial data (sin α,
    cos α), not by its L² norm. For ``wrt='beta'`` the reversed solution with
    terminal data (sin β, -cos β) is used.
    """
    if not isinstance(bc, BoundaryAngles):
        bc = BoundaryAngles(*bc)
    a, b = bc.alpha, bc.beta
    if wrt == "alpha":
        var, other = a, b
        fwd = pot
    elif wrt == "beta":
        var, other = b, a
        fwd = pot.reflected()
    else:
        raise ValueError("wrt must be 'alpha' or 'beta'")
    if not (h_alpha < var < math.pi / 2 - h_alpha):
        raise ValueError("stencil leaves (0, π/2)")
    # reflection swaps the roles of the two endpoint angles
    plus = _eigen_k(fwd, var + h_alpha, other, k)
    minus = _eigen_k(fwd, var - h_alpha, other, k)
    lhs = (plus - minus) / (2.0 * h_alpha)
    nu = _eigen_k(fwd, var, other, k)
    rhs = 1.0 / shoot(fwd, nu, var).norm2
    return lhs, rhs


def eq33_identity_check(
    pot: PotentialProfile1D, k: int = 1, quad_tol: float = 1e-9
) -> tuple[float, float]:
    """μ_k - λ_k computed directly and as the sum of two angle integrals.

    The integrands are ‖u(·; ν_k(α, ω_k), α)‖^{-2} over α ∈ [0, ω_k] and
    ‖ũ(·; ν_k(0, β), β)‖^{-2} over β ∈ [0, ω_k]; each quadrature node needs
    its own eigenvalue solve, so this is expensive.
    """
    line = eigen_line(pot)
    dirichlet = eigen_interval(pot, BoundaryAngles(0.0, 0.0))
    if len(line) < k or len(dirichlet) < k:
        raise SolverError(f"eigenvalue {k} missing on the line or on the interval")
    mu, lam = line[k - 1], dirichlet[k - 1]
    w = omega_of(mu)
    rev = pot.reflected()

    def f_alpha(alpha):
        nu = _eigen_k(pot, alpha, w, k)
        return 1.0 / shoot(pot, nu, alpha).norm2

    def f_beta(beta):
        # ν_k(0, β) on pot equals ν_k(β, 0) on the reflected potential
        nu = _eigen_k(rev, beta, 0.0, k)
        return 1.0 / shoot(rev, nu, beta).norm2

    i1, _ = integrate.quad(f_alpha, 0.0, w, epsabs=quad_tol / 2, epsrel=1e-10, limit=50)
    i2, _ = integrate.quad(f_beta, 0.0, w, epsabs=quad_tol / 2, epsrel=1e-10, limit=50)
    return mu - lam, i1 + i2


def riesz_dirichlet(pot: PotentialProfile1D, sigma: float) -> float:
    """R_σ(V; (0, l)) from the Dirichlet eigenvalues."""
    return eigen_interval(pot, BoundaryAngles(0.0, 0.0)).riesz(sigma)


def lemma44_gap_bound(pot: PotentialProfile1D, mu1: float | None = None) -> BoundReport:
    """Lower bound 2(∫V)²/(exp(l∫V) - 1) for the ground-state gap μ_1 - λ_1.

    ``details['zero_criterion']`` is True when l∫V <= 2 ln 3, in which case
    the Dirichlet problem has no negative eigenvalue. When ``mu1`` is given
    the sharper intermediate bound 8μ_1/(exp(2l√μ_1) - 1) is included.
    """
    mass = pot.integral(1.0)
    A = pot.length * mass
    value = 2.0 * mass * mass / math.expm1(A) if A > 0 else 0.0
    details = {"A": A, "mass": mass, "zero_criterion": A <= TWO_LN3}
    if mu1 is not None:
        details["eq35_bound"] = 8.0 * mu1 / math.expm1(2.0 * pot.length * math.sqrt(mu1))
    return BoundReport("lemma44_gap", float(value), True, "Lemma 4.4", [], details)


def thm41_bound(pot: PotentialProfile1D, sigma: float) -> BoundReport:
    """Lieb-Thirring bound with Dirichlet remainder on an interval, clamped at 0."""
    flags = ["sigma<3/2"] if sigma < 1.5 else []
    mass = pot.integral(1.0)
    A = pot.length * mass
    lt_integral = pot.integral(sigma + 0.5)
    if not math.isfinite(lt_integral):
        raise ValueError("V^{σ+1/2} is not integrable")
    plain = lcl_value(sigma, 1) * lt_integral
    if A <= TWO_LN3:
        return flagged("thm41", "Theorem 4.1", 0.0, flags, A=A, plain_lt=plain, remainder=None,
                       zero_regime=True)
    remainder = (2.0 * mass * mass / math.expm1(A)) ** sigma
    value = max(0.0, plain - remainder)
    return flagged("thm41", "Theorem 4.1", value, flags, A=A, plain_lt=plain,
                   remainder=remainder, zero_regime=False)
