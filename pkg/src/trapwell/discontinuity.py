"""Square-well eigenfunctions with prescribed jumps at ξ = ±1.

Keeping the eigenvalue spectrum discrete only requires the first
derivative's jumps to be slaved to the function's:

    Δφ'(-1) = +√k1·Δφ(-1),   Δφ'(+1) = -√k2·Δφ(+1).

Under that constraint the homogeneous (A0, B0) system — and hence the
spectrum — is unchanged; the outer amplitudes shift to
B̃1 = B̃1a - Δφ(-1), B̃2 = B̃2a + Δφ(+1), and the normalization becomes a
quadratic in the overall scale C0 (positive root taken).  The price is
paid downstream: for distinct eigenvalues ∫φ_a φ_b dξ = T1 + T2 ≠ 0,
the Wronskian of a degenerate pair is only piecewise constant, the
uniqueness proof fails, and a superposition containing a discontinuous
member no longer conserves its norm in time.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleJumpError, UndefinedRatioError
from .spectrum import EigenvalueRecord
from .swlimit import SquareWellSolution, _sw_eval, unit_coefficients
from .well import WellSpec


@dataclass(frozen=True)
class DiscontinuousEigenfunction:
    """A normalized square-well eigenfunction carrying prescribed jumps."""

    v1: float
    v2: float
    record: EigenvalueRecord
    jump_left: float         # Δφ(-1) = φ0(-1) - φ1(-1)
    jump_right: float        # Δφ(+1) = φ2(+1) - φ0(+1)
    djump_left: float        # Δφ'(-1) = +√k1·Δφ(-1)
    djump_right: float       # Δφ'(+1) = -√k2·Δφ(+1)
    a0: float
    b0: float
    bt1: float
    bt2: float
    bt1e: float
    bt1d: float
    bt2e: float
    bt2d: float
    bt1a: float
    bt2a: float
    c0: float
    d2jump_left: float       # Δφ''(-1) = -v1·B̃1 - β·Δφ(-1)
    d2jump_right: float      # Δφ''(+1) = +v2·B̃2 - β·Δφ(+1)

    @property
    def well(self):
        return WellSpec(self.v1, self.v2, 0.0)

    @property
    def beta(self):
        return self.record.beta

    @property
    def k1(self):
        return self.v1 - self.record.beta

    @property
    def k2(self):
        return self.v2 - self.record.beta

    @property
    def lam(self):
        return 0.0

    def phi(self, xi):
        """Piecewise value; zone-0 limits at ξ = ±1 differ from the outer
        values by the prescribed jumps (outer zones own the closed ends)."""
        return _disc_eval(self, xi, "phi")

    def dphi(self, xi):
        return _disc_eval(self, xi, "dphi")

    def d2phi(self, xi):
        return _disc_eval(self, xi, "d2phi")


def _disc_eval(sol, xi, which):
    beta = sol.record.beta
    rk1, rk2, rb = math.sqrt(sol.k1), math.sqrt(sol.k2), math.sqrt(beta)
    x = np.asarray(xi, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    m1 = x <= -1.0
    m0 = (x > -1.0) & (x < 1.0)
    m2 = x >= 1.0
    if m1.any():
        t = (x[m1] + 1.0) * rk1
        e = np.where(t > -700.0, np.exp(np.maximum(t, -700.0)), 0.0)
        out[m1] = {"phi": sol.bt1, "dphi": rk1 * sol.bt1,
                   "d2phi": sol.k1 * sol.bt1}[which] * e
    if m0.any():
        xb = x[m0] * rb
        if which == "phi":
            out[m0] = sol.a0 * np.sin(xb) + sol.b0 * np.cos(xb)
        elif which == "dphi":
            out[m0] = rb * (sol.a0 * np.cos(xb) - sol.b0 * np.sin(xb))
        else:
            out[m0] = -beta * (sol.a0 * np.sin(xb) + sol.b0 * np.cos(xb))
    if m2.any():
        t = (-x[m2] + 1.0) * rk2
        e = np.where(t > -700.0, np.exp(np.maximum(t, -700.0)), 0.0)
        out[m2] = {"phi": sol.bt2, "dphi": -rk2 * sol.bt2,
                   "d2phi": sol.k2 * sol.bt2}[which] * e
    return float(out[0]) if scalar else out


def build_discontinuous(v1, v2, record: EigenvalueRecord,
                        dphi_left: float, dphi_right: float) -> DiscontinuousEigenfunction:
    """Normalized jump-carrying eigenfunction for a square-well eigenvalue.

    dphi_left, dphi_right are the prescribed Δφ(-1), Δφ(+1) of the final
    normalized function.  The normalization condition is a quadratic in
    the interior scale C0; the branch continuous with the zero-jump case
    (positive C0) is selected, and a negative discriminant means no
    positive-norm solution exists for these jumps.
    """
    if not (math.isfinite(dphi_left) and math.isfinite(dphi_right)):
        raise DomainError("jumps must be finite")
    beta = record.beta
    k1, k2 = v1 - beta, v2 - beta
    if k2 <= 0:
        raise DomainError("record lies at or above the square-well threshold")
    a0u, b0u, b1pu, b2pu, bt1u, bt2u, _ = unit_coefficients(v1, v2, beta)
    s, c = math.sin(math.sqrt(beta)), math.cos(math.sqrt(beta))
    snc = math.sin(2.0 * math.sqrt(beta)) / (2.0 * math.sqrt(beta))
    # quadratic alpha·C0² + b·C0 + const = 0 from the normalization sum
    alpha = (bt1u ** 2 / (2.0 * math.sqrt(k1)) + a0u ** 2 * (1.0 - snc)
             + b0u ** 2 * (1.0 + snc) + bt2u ** 2 / (2.0 * math.sqrt(k2)))
    blin = -(bt1u * dphi_left / math.sqrt(k1) - bt2u * dphi_right / math.sqrt(k2))
    const = (dphi_left ** 2 / (2.0 * math.sqrt(k1))
             + dphi_right ** 2 / (2.0 * math.sqrt(k2)) - 2.0)
    disc = blin * blin - 4.0 * alpha * const
    if disc < 0:
        raise InfeasibleJumpError(
            f"no positive-norm solution for jumps ({dphi_left!r}, {dphi_right!r})")
    c0 = (-blin + math.sqrt(disc)) / (2.0 * alpha)
    if c0 <= 0:
        raise InfeasibleJumpError(
            f"normalization scale is nonpositive for jumps ({dphi_left!r}, {dphi_right!r})")
    a0, b0 = c0 * a0u, c0 * b0u
    bt1e = -a0 * s + b0 * c
    bt1d = math.sqrt(beta / k1) * (a0 * c + b0 * s)
    bt2e = a0 * s + b0 * c
    bt2d = -math.sqrt(beta / k2) * (a0 * c - b0 * s)
    bt1a = 0.5 * (bt1e + bt1d)
    bt2a = 0.5 * (bt2e + bt2d)
    bt1 = bt1a - dphi_left
    bt2 = bt2a + dphi_right
    return DiscontinuousEigenfunction(
        v1=v1, v2=v2, record=record,
        jump_left=dphi_left, jump_right=dphi_right,
        djump_left=math.sqrt(k1) * dphi_left,
        djump_right=-math.sqrt(k2) * dphi_right,
        a0=a0, b0=b0, bt1=bt1, bt2=bt2,
        bt1e=bt1e, bt1d=bt1d, bt2e=bt2e, bt2d=bt2d,
        bt1a=bt1a, bt2a=bt2a, c0=c0,
        d2jump_left=-v1 * bt1 - beta * dphi_left,
        d2jump_right=v2 * bt2 - beta * dphi_right)


def _check_pair(a, b):
    if not np.isclose(a.v1, b.v1, rtol=0, atol=0) or a.v1 != b.v1 or a.v2 != b.v2:
        raise DomainError("states belong to different wells")


@dataclass(frozen=True)
class OverlapResult:
    integral: float          # (1/2)∫ φ_a φ_b dξ
    t1: float
    t2: float


def _zone0_product_integral(a, b):
    """∫_{-1}^{1} φ0_a φ0_b dξ in closed form (cross terms vanish by parity)."""
    pa, pb = math.sqrt(a.beta), math.sqrt(b.beta)

    def sinc(x):
        return math.sin(x) / x if abs(x) > 1e-8 else 1.0 - x * x / 6.0

    dif = (pa - pb)
    tot = (pa + pb)
    ss = sinc(dif) - sinc(tot)      # ∫ sin(pa x) sin(pb x) over [-1, 1]
    cc = sinc(dif) + sinc(tot)      # ∫ cos cos
    return a.a0 * b.a0 * ss + a.b0 * b.b0 * cc


def overlap(a, b) -> OverlapResult:
    """Overlap integral and its boundary decomposition T1 + T2.

    For distinct real eigenvalues ∫φ_aφ_b dξ = T1 + T2 exactly; both
    sides vanish when both members are continuous.
    """
    _check_pair(a, b)
    ka1, kb1 = math.sqrt(a.k1), math.sqrt(b.k1)
    ka2, kb2 = math.sqrt(a.k2), math.sqrt(b.k2)
    total = (a.bt1 * b.bt1 / (ka1 + kb1) + a.bt2 * b.bt2 / (ka2 + kb2)
             + _zone0_product_integral(a, b))
    phi0a_l = a.bt1 + a.jump_left
    phi0b_l = b.bt1 + b.jump_left
    phi0a_r = a.bt2 - a.jump_right
    phi0b_r = b.bt2 - b.jump_right
    t1 = (a.bt1 * b.bt1 - phi0a_l * phi0b_l) / (kb1 + ka1)
    t2 = (a.bt2 * b.bt2 - phi0a_r * phi0b_r) / (kb2 + ka2)
    return OverlapResult(integral=0.5 * total, t1=t1, t2=t2)


def piecewise_wronskian(a, b, xi: float) -> float:
    """W = φ_a φ_b' - φ_a' φ_b for a degenerate pair; zone-wise constant."""
    _check_pair(a, b)
    if abs(a.beta - b.beta) > 1e-10 * max(1.0, abs(a.beta)):
        raise DomainError("piecewise Wronskian requires a common eigenvalue")
    return a.phi(xi) * b.dphi(xi) - a.dphi(xi) * b.phi(xi)


@dataclass(frozen=True)
class ObstructionResult:
    a0_left: float
    a0_right: float
    independent: bool


def uniqueness_obstruction(a, b) -> ObstructionResult:
    """Candidate proportionality constants Δϑ(∓1)/Δφ(∓1) of a degenerate pair.

    ϑ is the second member; the denominators come from the first, or
    from the second when the first is continuous on that side.  Unequal
    (or vanishing) ratios witness the loss of uniqueness.
    """
    _check_pair(a, b)
    ratios = []
    for ja, jb in ((a.jump_left, b.jump_left), (a.jump_right, b.jump_right)):
        if ja != 0.0:
            ratios.append(jb / ja)
        elif jb != 0.0:
            ratios.append(ja / jb)
        else:
            raise UndefinedRatioError("both members are continuous on one side")
    left, right = ratios
    dependent = (left == right) and left != 0.0
    return ObstructionResult(a0_left=left, a0_right=right, independent=not dependent)


def hermiticity_defect(states, coefficients, tau: float):
    """(defect, norm) of a superposition Σ c_a e^{-iβ_a τ} φ_a.

    defect = Σ_{a<b} (β_b - β_a)(T1 + T2)(a, b) is the strength of the
    boundary integral that must vanish for hermiticity; it is zero for
    all-continuous states.  norm is the (1/2)∫|Ψ|² dξ value at τ; with
    any discontinuous member it oscillates in τ instead of staying put.
    """
    if len(states) != len(coefficients):
        raise DomainError("states and coefficients must have equal length")
    n = len(states)
    ov = {}
    for i in range(n):
        for j in range(i, n):
            ov[(i, j)] = overlap(states[i], states[j])
    defect = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            o = ov[(i, j)]
            defect += (states[j].beta - states[i].beta) * (o.t1 + o.t2)
    norm = 0.0
    for i in range(n):
        norm += coefficients[i] ** 2 * ov[(i, i)].integral
    for i in range(n):
        for j in range(i + 1, n):
            db = states[i].beta - states[j].beta
            norm += (2.0 * coefficients[i] * coefficients[j]
                     * math.cos(db * tau) * ov[(i, j)].integral)
    return defect, norm


def continuous_counterpart(sws: SquareWellSolution) -> DiscontinuousEigenfunction:
    """Zero-jump construction; must reproduce the continuous coefficients."""
    return build_discontinuous(sws.v1, sws.v2, sws.record, 0.0, 0.0)
