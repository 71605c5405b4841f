"""Closed-form square-well limit of the trapezoidal pipeline.

When the ramps become vertical the junction factors collapse to
g_l = √(β/k1), g_r = -√(β/k2), the phase angle becomes
φ = arcsin√(β/v1) + arcsin√(β/v2), and the eigenvalues solve

    2√β + arcsin√(β/v1) + arcsin√(β/v2) = nπ,  n = 1, 2, ...

The coefficient chain survives with the ramp factors replaced by the
limit constant Λ = Bi(0) - f(0)·Ai(0): B̃1 = B1'·Λ, B̃2 = B2'·Λ, and the
eigenfunction keeps φ and φ' continuous across the collapsed ramps but
picks up second-derivative jumps -v1·B̃1 at ξ=-1 and +v2·B̃2 at ξ=+1.
"""

import math
from dataclasses import dataclass

import numpy as np

from .airy import AIRY_CONSTANTS
from .errors import DomainError, ValidationError
from .spectrum import EigenvalueRecord
from .well import WellSpec

_EXP_CUTOFF = -700.0


def _check_depths(v1, v2):
    if not (0 < v2 <= v1):
        raise ValidationError(f"square well requires 0 < v2 <= v1, got ({v1!r}, {v2!r})")


def _arcsin_clamped(x):
    # absorbs rounding just past the domain edge at β = v2
    if x > 1.0:
        if x > 1.0 + 1e-12:
            raise DomainError(f"arcsin argument {x!r} out of range")
        x = 1.0
    elif x < 0.0:
        if x < -1e-14:
            raise DomainError(f"arcsin argument {x!r} out of range")
        x = 0.0
    return math.asin(math.sqrt(x))


def swp_phase(v1, v2, beta):
    """Closed-form φ(β) = arcsin√(β/v1) + arcsin√(β/v2)."""
    return _arcsin_clamped(beta / v1) + _arcsin_clamped(beta / v2)


def swp_theta(v1, v2, beta):
    return (2.0 * math.sqrt(beta) + swp_phase(v1, v2, beta)) / math.pi


def swp_d_form(v1, v2, beta):
    """Collapsed raw transcendental form (1 - β/√(k1k2))sin2√β + (√(β/k1)+√(β/k2))cos2√β."""
    k1, k2 = v1 - beta, v2 - beta
    return ((1.0 - beta / math.sqrt(k1 * k2)) * math.sin(2.0 * math.sqrt(beta))
            + (math.sqrt(beta / k1) + math.sqrt(beta / k2)) * math.cos(2.0 * math.sqrt(beta)))


def reed_residual(v, beta):
    """Symmetric-well form (1 - β/k)sin2√β + 2√(β/k)cos2√β with k = v - β."""
    k = v - beta
    return ((1.0 - beta / k) * math.sin(2.0 * math.sqrt(beta))
            + 2.0 * math.sqrt(beta / k) * math.cos(2.0 * math.sqrt(beta)))


def absence_landau(v1, v2) -> bool:
    """No bound state iff 2√v2 < π/2 - arcsin√(v2/v1)."""
    _check_depths(v1, v2)
    return 2.0 * math.sqrt(v2) < math.pi / 2.0 - _arcsin_clamped(v2 / v1)


def absence_messiah(v1, v2) -> bool:
    """No bound state iff 2√v2 < arccos√(v2/v1) (equivalent to the other form)."""
    _check_depths(v1, v2)
    return 2.0 * math.sqrt(v2) < math.acos(min(1.0, math.sqrt(v2 / v1)))


def swp_exists(v1, v2) -> bool:
    """True when the square well has at least one bound state."""
    return not absence_messiah(v1, v2)


def _parity_tag(v1, v2, beta):
    if abs(v1 - v2) > 1e-12 * v1:
        return "none"
    k = v1 - beta
    if k <= 0:
        return "none"
    g = math.sqrt(beta / k)
    s, c = math.sin(math.sqrt(beta)), math.cos(math.sqrt(beta))
    return "even" if abs(g * s - c) <= abs(s + g * c) else "odd"


def swp_eigenvalues(v1, v2, residual_tol=1e-12, max_iterations=80):
    """All square-well eigenvalues in (0, v2], by monotone bracketing + Newton.

    The left side of the transcendental equation is strictly increasing
    in β, so each root is bracketed against nπ and polished by a
    safeguarded Newton iteration with the analytic derivative.
    """
    _check_depths(v1, v2)
    top = 2.0 * math.sqrt(v2) + _arcsin_clamped(v2 / v1) + math.pi / 2.0
    count = int(math.floor(top / math.pi))
    records = []
    for n in range(1, count + 1):
        target = n * math.pi

        def t(b):
            return 2.0 * math.sqrt(b) + swp_phase(v1, v2, b) - target

        def dt(b):
            d = 1.0 / math.sqrt(b)
            for v in (v1, v2):
                if v > b:
                    d += 1.0 / (2.0 * math.sqrt(b) * math.sqrt(v - b))
                else:
                    d += 1e300
            return d

        lo, hi = v2 * 1e-300, v2
        x = v2 * (n / (count + 0.5)) ** 2
        x = min(max(x, 1e-30 * v2), v2 * (1 - 1e-15))
        iters = 0
        residual = abs(math.sin(t(x)))
        for iters in range(1, max_iterations + 1):
            tx = t(x)
            residual = abs(math.sin(tx))
            if abs(tx) <= 1e-13 or residual <= residual_tol and abs(tx) < 1e-9:
                break
            if tx < 0:
                lo = x
            else:
                hi = x
            xn = x - tx / dt(x)
            if not (lo < xn < hi):
                xn = 0.5 * (lo + hi)
            if abs(xn - x) <= 5e-16 * v2:
                x = xn
                residual = abs(math.sin(t(x)))
                break
            x = xn
        records.append(EigenvalueRecord(index_n=n, beta=x,
                                        residual=abs(math.sin(t(x))),
                                        parity=_parity_tag(v1, v2, x),
                                        newton_iterations=iters,
                                        threshold=(v2 - x) <= 1e-10 * v2))
    return records


@dataclass(frozen=True)
class SquareWellSolution:
    """One normalized square-well bound state with its jump bookkeeping."""

    v1: float
    v2: float
    record: EigenvalueRecord
    a0: float
    b0: float
    b1p: float
    b2p: float
    bt1: float
    bt2: float
    c0: float
    d0: float
    plateau_left: float      # B1'·Λ, the collapsed-ramp value at ξ = -1
    plateau_right: float     # B2'·Λ at ξ = +1
    d2_jump_left: float      # -v1·B̃1
    d2_jump_right: float     # +v2·B̃2

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

    # zero jumps: lets the discontinuity module treat this state as the
    # continuous member of a mixed pair
    @property
    def jump_left(self):
        return 0.0

    @property
    def jump_right(self):
        return 0.0

    def phi(self, xi):
        return _sw_eval(self, xi, "phi")

    def dphi(self, xi):
        return _sw_eval(self, xi, "dphi")

    def d2phi(self, xi):
        return _sw_eval(self, xi, "d2phi")

    def d2phi_one_sided(self, side):
        """(left limit, right limit, jump) of φ″ at ξ = side ∈ {-1, +1}."""
        beta = self.record.beta
        if side == -1:
            left = self.k1 * self.bt1
            right = -beta * (-self.a0 * math.sin(math.sqrt(beta))
                             + self.b0 * math.cos(math.sqrt(beta)))
        elif side == +1:
            left = -beta * (self.a0 * math.sin(math.sqrt(beta))
                            + self.b0 * math.cos(math.sqrt(beta)))
            right = self.k2 * self.bt2
        else:
            raise DomainError("side must be -1 or +1")
        return left, right, right - left


def unit_coefficients(v1, v2, beta):
    """(a0, b0, b1p, b2p, bt1, bt2) in C0 = 1 units, dual forms averaged."""
    k1, k2 = v1 - beta, v2 - beta
    gl = math.sqrt(beta / k1)
    gr = -math.sqrt(beta / k2)
    s, c = math.sin(math.sqrt(beta)), math.cos(math.sqrt(beta))
    r1 = -(((1 + gl) * s - (1 - gl) * c) / ((1 - gl) * s + (1 + gl) * c))
    r2 = -(((1 + gr) * s + (1 - gr) * c) / ((1 - gr) * s - (1 + gr) * c))
    d0r = 0.5 * (r1 + r2)
    a0, b0 = 1.0 + d0r, 1.0 - d0r
    lam_c = AIRY_CONSTANTS.lambda_const
    b1p = 0.5 * ((-a0 * s + b0 * c) + math.sqrt(beta / k1) * (a0 * c + b0 * s)) / lam_c
    b2p = 0.5 * ((a0 * s + b0 * c) - math.sqrt(beta / k2) * (a0 * c - b0 * s)) / lam_c
    return a0, b0, b1p, b2p, b1p * lam_c, b2p * lam_c, d0r


def swp_solution(v1, v2, record: EigenvalueRecord) -> SquareWellSolution:
    """Normalized solution from the collapsed coefficient chain."""
    _check_depths(v1, v2)
    beta = record.beta
    k1, k2 = v1 - beta, v2 - beta
    if k2 <= 0:
        raise DomainError("threshold state β = v2 has no normalizable square-well solution")
    a0, b0, b1p, b2p, bt1, bt2, d0r = unit_coefficients(v1, v2, beta)
    snc = math.sin(2.0 * math.sqrt(beta)) / (2.0 * math.sqrt(beta))
    total = (bt1 ** 2 / (2.0 * math.sqrt(k1)) + a0 ** 2 * (1.0 - snc)
             + b0 ** 2 * (1.0 + snc) + bt2 ** 2 / (2.0 * math.sqrt(k2)))
    c0 = math.sqrt(2.0 / total)
    lam_c = AIRY_CONSTANTS.lambda_const
    return SquareWellSolution(v1=v1, v2=v2, record=record,
                              a0=c0 * a0, b0=c0 * b0,
                              b1p=c0 * b1p, b2p=c0 * b2p,
                              bt1=c0 * bt1, bt2=c0 * bt2,
                              c0=c0, d0=c0 * d0r,
                              plateau_left=c0 * b1p * lam_c,
                              plateau_right=c0 * b2p * lam_c,
                              d2_jump_left=-v1 * c0 * bt1,
                              d2_jump_right=v2 * c0 * bt2)


def _sw_eval(sol, xi, which):
    beta = sol.record.beta if hasattr(sol, "record") else sol.beta
    rk1, rk2, rb = math.sqrt(sol.k1), math.sqrt(sol.k2), math.sqrt(beta)
    x = np.asarray(xi, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    m1 = x <= -1.0
    m0 = (x > -1.0) & (x <= 1.0)
    m2 = x > 1.0
    if m1.any():
        t = (x[m1] + 1.0) * rk1
        e = np.where(t > _EXP_CUTOFF, np.exp(np.maximum(t, _EXP_CUTOFF)), 0.0)
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
        e = np.where(t > _EXP_CUTOFF, np.exp(np.maximum(t, _EXP_CUTOFF)), 0.0)
        out[m2] = {"phi": sol.bt2, "dphi": -rk2 * sol.bt2,
                   "d2phi": sol.k2 * sol.bt2}[which] * e
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class SweepRow:
    lam: float
    n: int
    beta_twp: float
    beta_swp: float
    abs_dev: float
    d2jump_left: float
    d2jump_right: float
    error: str = ""


def lambda_sweep(v1, v2, lambdas):
    """Trapezoid-to-square-well convergence table over descending λ values.

    Per λ and state: |β_twp - β_swp| and the emergent second-derivative
    jump across each (shrinking) ramp, Δφ″ = φ″(inner junction) -
    φ″(outer junction).  Solver failures are recorded per row instead of
    aborting the sweep.
    """
    from .eigenfunction import build_solution, eval_d2phi
    from .spectrum import find_eigenvalues
    lambdas = list(lambdas)
    if any(l <= 0 for l in lambdas):
        raise ValidationError("lambda_sweep requires strictly positive lambdas")
    if any(b >= a for a, b in zip(lambdas[:-1], lambdas[1:])) and len(lambdas) > 1:
        if not all(b < a for a, b in zip(lambdas[:-1], lambdas[1:])):
            raise ValidationError("lambda_sweep expects a descending lambda list")
    sw = swp_eigenvalues(v1, v2)
    rows = []
    for lam in lambdas:
        try:
            w = WellSpec(v1, v2, lam)
            recs = find_eigenvalues(w)
            for rec in recs:
                match = next((r for r in sw if r.index_n == rec.index_n), None)
                if match is None:
                    rows.append(SweepRow(lam, rec.index_n, rec.beta, math.nan,
                                         math.nan, math.nan, math.nan,
                                         error="no square-well counterpart"))
                    continue
                sol = build_solution(w, rec)
                jl = eval_d2phi(sol, -1.0) - eval_d2phi(sol, -(1.0 + lam))
                jr = eval_d2phi(sol, 1.0 + lam) - eval_d2phi(sol, np.nextafter(1.0, 2.0))
                rows.append(SweepRow(lam=lam, n=rec.index_n, beta_twp=rec.beta,
                                     beta_swp=match.beta,
                                     abs_dev=abs(rec.beta - match.beta),
                                     d2jump_left=jl, d2jump_right=jr))
        except Exception as exc:  # per-λ isolation is part of the contract
            rows.append(SweepRow(lam, 0, math.nan, math.nan, math.nan,
                                 math.nan, math.nan, error=str(exc)))
    return rows
