import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewexp.errors import DomainError, PoleError
from skewexp.trig import TrigKernelConfig, cosc, cotc, sinc


def test_values_at_zero():
    assert sinc(0.0) == 1.0
    assert cosc(0.0) == 0.0
    assert cotc(0.0) == 1.0


def test_simple_values():
    assert abs(sinc(math.pi)) < 1e-16
    assert cosc(math.pi) == pytest.approx(-2.0 / math.pi, rel=1e-15)
    assert abs(cotc(math.pi / 2)) < 1e-15


def test_small_argument_against_extended_precision():
    # frozen from a 40-digit evaluation of sin(x)/x and (cos(x)-1)/x at x = 1e-6
    assert sinc(1e-6) == pytest.approx(0.9999999999998334, rel=2e-16)
    assert cosc(1e-6) == pytest.approx(-4.999999999999584e-07, rel=2e-16)


def test_cotc_pole():
    with pytest.raises(PoleError):
        cotc(math.pi)
    with pytest.raises(PoleError):
        cotc(np.array([0.3, -2 * math.pi]))


def test_non_finite_rejected():
    for f in (sinc, cosc, cotc):
        with pytest.raises(DomainError):
            f(float("inf"))


def test_config_validation():
    with pytest.raises(DomainError):
        TrigKernelConfig(taylor_threshold=0.0)


def test_branches_agree_at_threshold():
    thr = TrigKernelConfig().taylor_threshold
    with mpmath.workdps(40):
        for x in (thr * (1 - 1e-9), thr * (1 + 1e-9)):
            mx = mpmath.mpf(x)
            assert sinc(x) == pytest.approx(float(mpmath.sin(mx) / mx), abs=1e-15)
            assert cosc(x) == pytest.approx(float((mpmath.cos(mx) - 1) / mx), rel=1e-15)
            assert cotc(x) == pytest.approx(float(mx * mpmath.cot(mx)), abs=1e-15)


def test_vectorized_matches_scalar():
    xs = np.linspace(-5, 5, 41)
    np.testing.assert_array_equal(sinc(xs), [sinc(float(x)) for x in xs])


def test_squared_sum_identity_on_log_grid():
    z = np.logspace(-8, 1, 400)
    lhs = sinc(z) ** 2 + cosc(z) ** 2
    rhs = 4 * np.sin(z / 2) ** 2 / z**2
    np.testing.assert_allclose(lhs, rhs, rtol=1e-13)
    assert sinc(0.0) ** 2 + cosc(0.0) ** 2 == 1.0


@given(st.floats(-20, 20).filter(lambda z: abs(z) > 1e-3 and abs(z / math.pi - round(z / math.pi)) > 1e-6))
def test_cotc_times_sinc_is_cos(z):
    assert cotc(z) * sinc(z) == pytest.approx(math.cos(z), abs=1e-12)


@given(st.floats(-50, 50).filter(lambda z: abs(z / math.pi - round(z / math.pi)) > 1e-9 or round(z / math.pi) == 0))
def test_parity(z):
    assert sinc(-z) == sinc(z)
    assert cosc(-z) == -cosc(z)
    assert cotc(-z) == cotc(z)
