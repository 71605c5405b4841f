"""Real-argument Airy kernel: Ai, Bi, first derivatives, scaled variants,
and the junction factor f(z) = (√z·Bi + Bi′)/(√z·Ai + Ai′).

Values come from scipy.special (AMOS), which comfortably exceeds the
accuracy targets here; this module adds the domain checks, the
overflow-safe scaled interface, and the two limit constants

    f0 = Bi′(0)/Ai′(0) = −√3 ≈ −1.73205
    Λ  = Bi(0) − f0·Ai(0) ≈ 1.22985

used throughout the well solvers.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DegenerateFactorError, DomainError, OverflowRangeError

# Unscaled Bi overflows near x ≈ 104; stay safely below.
_UNSCALED_MAX = 100.0
# exp(2s) in f(z) overflows once 2s = (4/3) z^{3/2} > ~709.
_F_FACTOR_MAX = (0.75 * 708.0) ** (2.0 / 3.0)


@dataclass(frozen=True)
class AiryQuad:
    """Ai, Bi and their first derivatives at a common point."""

    ai: float
    bi: float
    aip: float
    bip: float


@dataclass(frozen=True)
class ScaledAiryQuad:
    """Scaled values: ai, aip carry e^{+s}; bi, bip carry e^{-s}.

    The exponent s = (2/3)x^{3/2} for x > 0 and 0 otherwise, so
    Ai(x) = ai·e^{-s}, Bi(x) = bi·e^{+s}.
    """

    ai: float
    bi: float
    aip: float
    bip: float
    scale: float


@dataclass(frozen=True)
class AiryConstants:
    f0: float
    lambda_const: float


def _constants() -> AiryConstants:
    ai0, aip0, bi0, bip0 = special.airy(0.0)
    f0 = bip0 / aip0
    return AiryConstants(f0=f0, lambda_const=bi0 - f0 * ai0)


AIRY_CONSTANTS = _constants()


def airy_eval(x: float) -> AiryQuad:
    """Unscaled Ai, Bi, Ai′, Bi′ at a real point."""
    if not math.isfinite(x):
        raise DomainError(f"airy_eval requires finite x, got {x!r}")
    if x > _UNSCALED_MAX:
        raise OverflowRangeError(
            f"Bi({x:g}) would overflow; use airy_eval_scaled instead")
    ai, aip, bi, bip = special.airy(x)
    return AiryQuad(float(ai), float(bi), float(aip), float(bip))


def airy_eval_scaled(x: float) -> ScaledAiryQuad:
    """Overflow-safe variant; exact for all finite real x."""
    if not math.isfinite(x):
        raise DomainError(f"airy_eval_scaled requires finite x, got {x!r}")
    if x <= 0.0:
        ai, aip, bi, bip = special.airy(x)
        return ScaledAiryQuad(float(ai), float(bi), float(aip), float(bip), 0.0)
    eai, eaip, ebi, ebip = special.airye(x)
    s = (2.0 / 3.0) * x ** 1.5
    return ScaledAiryQuad(float(eai), float(ebi), float(eaip), float(ebip), s)


def airy_arrays(x):
    """Vectorized (ai, aip, bi, bip) for array arguments; no range checks."""
    return special.airy(np.asarray(x, dtype=float))


def f_factor(z: float) -> float:
    """Junction factor f(z) soldering a ramp solution to a shoulder exponential.

    Defined for z ≥ 0; f(0) = Bi′(0)/Ai′(0).  The denominator √z·Ai + Ai′
    is strictly negative on z ≥ 0 (verified by scan in the test suite), so
    the factor is always finite and real.
    """
    if not math.isfinite(z):
        raise DomainError(f"f_factor requires finite z, got {z!r}")
    if z < 0.0:
        raise DomainError(f"f_factor requires z >= 0, got {z!r}")
    if z == 0.0:
        return AIRY_CONSTANTS.f0
    if z > _F_FACTOR_MAX:
        raise OverflowRangeError(
            f"f_factor({z:g}) exceeds double-precision range (z > {_F_FACTOR_MAX:.1f})")
    q = airy_eval_scaled(z)
    rz = math.sqrt(z)
    den = rz * q.ai + q.aip           # (√z·Ai + Ai′)·e^{+s}
    if abs(den) < 1e-300:
        raise DegenerateFactorError(f"f_factor denominator vanished at z={z!r}")
    num = rz * q.bi + q.bip           # (√z·Bi + Bi′)·e^{-s}
    return math.exp(2.0 * q.scale) * num / den
