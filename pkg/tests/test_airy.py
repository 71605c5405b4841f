import math

import numpy as np
import pytest

from trapwell import (AIRY_CONSTANTS, DomainError, OverflowRangeError,
                      airy_eval, airy_eval_scaled, f_factor)
from trapwell.errors import DegenerateFactorError


def series_airy(x, terms=80):
    """Independent Maclaurin oracle from the ODE y'' = x*y.

    Seeds from the gamma-function closed forms at the origin; adequate
    for |x| <= 2.
    """
    ai0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    aip0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
    bi0 = 3.0 ** (-1.0 / 6.0) / math.gamma(2.0 / 3.0)
    bip0 = 3.0 ** (1.0 / 6.0) / math.gamma(1.0 / 3.0)

    def series(a0, a1):
        coef = [a0, a1, 0.0]
        for k in range(terms):
            coef.append(coef[k] / ((k + 3) * (k + 2)))
        val = sum(c * x ** i for i, c in enumerate(coef))
        dval = sum(i * c * x ** (i - 1) for i, c in enumerate(coef) if i)
        return val, dval

    ai, aip = series(ai0, aip0)
    bi, bip = series(bi0, bip0)
    return ai, aip, bi, bip


def test_values_at_origin_match_closed_forms():
    q = airy_eval(0.0)
    assert q.ai == pytest.approx(3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0), rel=1e-14)
    assert q.bi == pytest.approx(3.0 ** (-1.0 / 6.0) / math.gamma(2.0 / 3.0), rel=1e-14)
    assert q.ai == pytest.approx(0.355028, abs=1e-6)
    assert q.bi == pytest.approx(0.614927, abs=1e-6)


@pytest.mark.parametrize("x", [-2.0, -1.3, -0.6, 0.0, 0.4, 1.0, 1.7, 2.0])
def test_against_maclaurin_series_oracle(x):
    ai, aip, bi, bip = series_airy(x)
    q = airy_eval(x)
    assert q.ai == pytest.approx(ai, rel=1e-12, abs=1e-14)
    assert q.aip == pytest.approx(aip, rel=1e-12, abs=1e-14)
    assert q.bi == pytest.approx(bi, rel=1e-12, abs=1e-14)
    assert q.bip == pytest.approx(bip, rel=1e-12, abs=1e-14)


def test_wronskian_at_unity():
    q = airy_eval(1.0)
    assert q.ai * q.bip - q.aip * q.bi == pytest.approx(1.0 / math.pi, rel=1e-12)


def test_wronskian_identity_over_range():
    mag = np.geomspace(1e-3, 30.0, 500)
    xs = np.concatenate([-mag[::-1], mag])
    worst = 0.0
    for x in xs:
        q = airy_eval(float(x))
        w = q.ai * q.bip - q.aip * q.bi
        worst = max(worst, abs(w * math.pi - 1.0))
    assert worst <= 1e-11


def test_ode_residual_finite_difference():
    # central-difference y'' compared with x*y for both kinds
    h = 1e-4
    xs = np.linspace(-10.0, 5.0, 61)
    for x in xs:
        qm, q0, qp = airy_eval(float(x - h)), airy_eval(float(x)), airy_eval(float(x + h))
        for a, b, c, y in ((qm.ai, q0.ai, qp.ai, q0.ai), (qm.bi, q0.bi, qp.bi, q0.bi)):
            resid = (a - 2.0 * b + c) / h ** 2 - x * y
            assert abs(resid) <= 1e-6


def test_ode_residual_at_minus_five():
    h = 1e-4
    qm, q0, qp = airy_eval(-5.0 - h), airy_eval(-5.0), airy_eval(-5.0 + h)
    assert abs((qm.ai - 2.0 * q0.ai + qp.ai) / h ** 2 - (-5.0) * q0.ai) <= 1e-6


def test_scaled_matches_unscaled_where_defined():
    s0 = airy_eval_scaled(0.0)
    q0 = airy_eval(0.0)
    assert s0.scale == 0.0
    assert (s0.ai, s0.bi, s0.aip, s0.bip) == (q0.ai, q0.bi, q0.aip, q0.bip)

    s10 = airy_eval_scaled(10.0)
    q10 = airy_eval(10.0)
    assert s10.scale == pytest.approx((2.0 / 3.0) * 10.0 ** 1.5, rel=1e-15)
    assert math.exp(-s10.scale) * s10.bi * math.exp(2 * s10.scale) == pytest.approx(q10.bi, rel=1e-10)
    assert s10.ai * math.exp(-s10.scale) == pytest.approx(q10.ai, rel=1e-10)


def test_scaled_wronskian_far_out():
    # ai carries e^{+s}, bi carries e^{-s}: the products need no rescaling
    q = airy_eval_scaled(50.0)
    w = q.ai * q.bip - q.aip * q.bi
    assert w == pytest.approx(1.0 / math.pi, rel=1e-9)


def test_negative_argument_scaled_is_unscaled():
    s = airy_eval_scaled(-7.5)
    q = airy_eval(-7.5)
    assert s.scale == 0.0
    assert s.ai == q.ai and s.bip == q.bip


def test_domain_and_overflow_errors():
    with pytest.raises(DomainError):
        airy_eval(float("nan"))
    with pytest.raises(DomainError):
        airy_eval_scaled(float("inf"))
    with pytest.raises(OverflowRangeError):
        airy_eval(150.0)
    with pytest.raises(DomainError):
        f_factor(-1.0)
    with pytest.raises(OverflowRangeError):
        f_factor(1e6)


def test_constants():
    assert AIRY_CONSTANTS.f0 == pytest.approx(-1.73205, abs=1e-5)
    assert AIRY_CONSTANTS.f0 == pytest.approx(-math.sqrt(3.0), rel=1e-12)
    assert AIRY_CONSTANTS.lambda_const == pytest.approx(1.22985, abs=1e-5)


def test_f_factor_origin_and_identity():
    assert f_factor(0.0) == pytest.approx(-1.73205, abs=1e-5)
    # defining identity: Bi - f*Ai = -(Bi' - f*Ai')/sqrt(z) for z > 0
    for z in (0.3, 1.0, 4.0, 12.0):
        f = f_factor(z)
        q = airy_eval(z)
        lhs = q.bi - f * q.ai
        rhs = -(q.bip - f * q.aip) / math.sqrt(z)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_f_factor_continuity_toward_origin():
    assert abs(f_factor(1e-6) - f_factor(0.0)) <= 1e-3


def test_factor_limit_is_lambda_constant():
    # -(Bi' - f*Ai')/sqrt(z) -> Lambda as z -> 0+
    z = 1e-8
    f = f_factor(z)
    q = airy_eval(z)
    val = -(q.bip - f * q.aip) / math.sqrt(z)
    assert val == pytest.approx(AIRY_CONSTANTS.lambda_const, abs=1e-4)


def test_f_factor_denominator_never_vanishes_on_scan():
    # precondition scan: sqrt(z)*Ai(z) + Ai'(z) stays strictly negative
    zs = np.concatenate([np.linspace(0.0, 5.0, 4001), np.geomspace(5.0, 200.0, 2000)])
    for z in zs:
        q = airy_eval_scaled(float(z))
        den = math.sqrt(z) * q.ai + q.aip   # scaled by e^{+s} > 0
        assert den < 0.0 or z == 0.0 and den < 0.0


def test_f_factor_monotone_decreasing_small_z():
    vals = [f_factor(z) for z in np.linspace(0.0, 2.0, 40)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
