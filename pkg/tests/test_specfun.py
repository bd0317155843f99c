import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rieszbounds.specfun import (
    SemiclassicalConstant,
    beta_fn,
    gamma_fn,
    lcl_constant,
    lcl_value,
    log_gamma,
    zeta_fn,
)


@pytest.mark.parametrize("x", [0.013, 0.25, 0.5, 1.5, 2.5, 3.25, 7.75, 11.5, 19.9, 33.3, 49.5])
def test_gamma_against_mpmath(x):
    assert gamma_fn(x) == pytest.approx(float(mp.gamma(x)), rel=1e-13)


def test_gamma_integers_are_exact():
    for n in range(1, 22):
        assert gamma_fn(n) == math.factorial(n - 1)


def test_gamma_half():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, math.inf])
def test_gamma_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        gamma_fn(bad)


@pytest.mark.parametrize("x", [0.1, 1.0, 5.5, 40.0, 170.5, 1e4])
def test_log_gamma(x):
    assert log_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-13, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 30), st.floats(0.05, 30))
def test_beta_symmetric_and_accurate(a, b):
    assert beta_fn(a, b) == beta_fn(b, a)
    assert beta_fn(a, b) == pytest.approx(float(mp.beta(a, b)), rel=1e-12)


def test_beta_large_arguments_use_logs():
    assert beta_fn(30.0, 25.0) == pytest.approx(float(mp.beta(30, 25)), rel=1e-12)


@pytest.mark.parametrize("s", [1.01, 1.1, 1.5, 2.0, 3.0, 4.0, 7.5, 20.0, 59.0, 80.0])
def test_zeta_against_mpmath(s):
    assert zeta_fn(s) == pytest.approx(float(mp.zeta(s)), rel=1e-13)


def test_zeta_closed_forms():
    assert zeta_fn(2.0) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert zeta_fn(4.0) == pytest.approx(math.pi**4 / 90, rel=1e-15)


def test_zeta_pole():
    with pytest.raises(ValueError):
        zeta_fn(1.0)


def test_lcl_values():
    assert lcl_value(1.5, 2) == pytest.approx(1 / (10 * math.pi), rel=1e-15)
    assert lcl_value(0.0, 2) == pytest.approx(1 / (4 * math.pi), rel=1e-15)
    assert lcl_value(1.0, 1) == pytest.approx(
        float(mp.gamma(2) / (mp.sqrt(4 * mp.pi) * mp.gamma(2.5))), rel=1e-14
    )


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 6), st.integers(1, 5))
def test_lcl_dimension_splitting(sigma, d):
    # L_{σ,d} = L_{σ,d-1} L_{σ+(d-1)/2,1}
    if d == 1:
        return
    lhs = lcl_value(sigma, d)
    rhs = lcl_value(sigma, d - 1) * lcl_value(sigma + (d - 1) / 2, 1)
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_lcl_large_order():
    v = lcl_value(60.0, 3)
    ref = mp.gamma(61) / ((4 * mp.pi) ** 1.5 * mp.gamma(62.5))
    assert v == pytest.approx(float(ref), rel=1e-12)


def test_lcl_constant_record():
    c = lcl_constant(2, 3)
    assert isinstance(c, SemiclassicalConstant)
    assert c.recompute() == c.value
    with pytest.raises(ValueError):
        lcl_value(-0.1, 2)
    with pytest.raises(ValueError):
        lcl_value(1.0, 0)
