import math

import numpy as np
import pytest

from rieszbounds.fdverify import (
    RasterDomain,
    ResolutionError,
    TruncationPolicy,
    empirical_riesz,
    fd_laplacian_spectrum,
    max_resolution_h,
    square_spectrum,
)
from rieszbounds.horn import CRITICAL_THRESHOLD, HornRegion, horn_bound_thm32
from rieszbounds.riesz import riesz_mean

J0_SQ = 5.783185962946784  # square of the first zero of J_0


def unit_square(h):
    return RasterDomain.from_predicate(lambda X, Y: np.ones_like(X, bool), (0, 1, 0, 1), h)


def test_square_spectrum_enumeration():
    assert list(square_spectrum(1.0, 50.0).values / math.pi**2) == pytest.approx([2, 5, 5])
    assert len(square_spectrum(1.0, 19.0)) == 0


def test_square_spectrum_scaling():
    a = square_spectrum(1.0, 400.0).values
    b = square_spectrum(2.0, 100.0).values
    assert np.allclose(b * 4, a)


def test_square_counting_weyl_slope():
    lams = np.geomspace(1e4, 1e6, 7)
    counts = [riesz_mean(square_spectrum(1.0, l), l, 0) for l in lams]
    slope = np.polyfit(np.log(lams), np.log(counts), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.01)
    assert counts[-1] == pytest.approx(lams[-1] / (4 * math.pi), rel=0.01)


def test_fd_square_matches_discrete_formula():
    h = 1 / 20
    spec = fd_laplacian_spectrum(unit_square(h), 60.0)
    exact = 8 / h**2 * math.sin(math.pi * h / 2) ** 2
    assert spec.values[0] == pytest.approx(exact, rel=1e-12)
    assert spec.exactness == f"numerical(h={h:g})"


def test_fd_square_second_order():
    errs = []
    for n in (10, 20, 40):
        spec = fd_laplacian_spectrum(unit_square(1 / n), 25.0)
        errs.append(abs(spec.values[0] - 2 * math.pi**2))
    rates = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert rates == pytest.approx([2.0, 2.0], abs=0.02)


def test_fd_disk_first_eigenvalue():
    # node exclusion puts the effective wall up to h outside the circle, so
    # the error is first order and the eigenvalue approaches j0² from below
    disk = lambda X, Y: X**2 + Y**2 < 1
    errs = []
    for h in (0.04, 0.02, 0.01, 0.005):
        rd = RasterDomain.from_predicate(disk, (-1, 1, -1, 1), h)
        errs.append(J0_SQ - fd_laplacian_spectrum(rd, 10.0).values[0])
    assert all(e > 0 for e in errs)
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] / J0_SQ < 5e-3


def test_empty_mask():
    rd = RasterDomain.from_predicate(lambda X, Y: np.zeros_like(X, bool), (0, 1, 0, 1), 0.1)
    assert rd.n_unknowns == 0
    assert len(fd_laplacian_spectrum(rd, 10.0)) == 0


def test_resolution_guard():
    with pytest.raises(ResolutionError) as exc:
        fd_laplacian_spectrum(unit_square(0.25), 100.0)
    assert exc.value.suggested == pytest.approx(max_resolution_h(100.0))
    assert max_resolution_h(100.0) == pytest.approx(2 * math.pi / 100)


def test_sparse_path_matches_dense():
    rd = unit_square(1 / 30)
    dense = fd_laplacian_spectrum(rd, 300.0).values
    sparse = fd_laplacian_spectrum(rd, 300.0, {"dense_limit": 0, "k0": 4}).values
    assert np.allclose(dense, sparse, rtol=1e-9)


def test_nested_masks_lower_eigenvalues():
    h = 0.05
    pred = lambda X, Y: np.abs(X) * np.abs(Y) ** 2 < 1
    small = RasterDomain.from_predicate(pred, (-6, 6, -2.5, 2.5), h)
    big = RasterDomain.from_predicate(pred, (-9, 9, -3.5, 3.5), h)
    a = fd_laplacian_spectrum(small, 30.0).values
    b = fd_laplacian_spectrum(big, 30.0).values
    assert len(b) >= len(a)
    assert np.all(b[: len(a)] <= a + 1e-9)


def test_truncation_policy():
    with pytest.raises(ValueError):
        TruncationPolicy(1.5)
    rx, ry = TruncationPolicy(2.0).horn_radii(2.0, 60.0)
    s = 2 * math.sqrt(60) / math.pi
    assert (rx, ry) == pytest.approx((2 * s**2, 2 * s**0.5))
    # width of the cusp at the unscaled radius is exactly π/√Λ
    assert 2 * (rx / 2) ** -0.5 == pytest.approx(math.pi / math.sqrt(60))


def test_truncation_monotone():
    values = [
        empirical_riesz("horn", 1.5, 20.0, 0.1, TruncationPolicy(c), nu=2.0, refine=False)[0]
        for c in (2.0, 3.0, 4.0)
    ]
    assert values[0] <= values[1] * (1 + 1e-12) and values[1] <= values[2] * (1 + 1e-12)


def test_horn_dominance_small_lambda():
    lam = 20.0
    v, spec, d = empirical_riesz("horn", 1.5, lam, 0.1, nu=2.0)
    bound = horn_bound_thm32(HornRegion(2, 2.0), 1.5, lam).value
    assert d["value_half"] - d["refinement_delta"] <= bound
    assert d["nodes_half"] > d["nodes"]


def test_refinement_deltas_shrink():
    lam = 15.0
    vals = [
        empirical_riesz("horn", 1.5, lam, h, nu=2.0, refine=False)[0] for h in (0.16, 0.08, 0.04)
    ]
    d1, d2 = abs(vals[0] - vals[1]), abs(vals[1] - vals[2])
    assert d2 < d1


def test_critical_horn_empty_below_threshold():
    v, spec, d = empirical_riesz("horn1-rotated", 1.5, 0.5, 0.1)
    assert v == 0.0 and len(spec) == 0 and d["value_half"] == 0.0
    v, spec, d = empirical_riesz("horn1-rotated", 0.0, 4.0, 0.1)
    assert spec.values[0] >= CRITICAL_THRESHOLD


def test_unknown_domain():
    with pytest.raises(ValueError):
        empirical_riesz("disk", 1.5, 1.0, 0.1)
    with pytest.raises(ValueError):
        empirical_riesz("horn", 1.5, 1.0, 0.1)
