"""Eigenfunction coefficients, normalization, and piecewise evaluation.

Once β is known, the coefficient chain runs through the rotated pair
(C0, D0) = ((A0+B0)/2, (A0-B0)/2), which never degenerates even for
symmetric wells where one of A0, B0 vanishes.  Every dual expression
(two analytically equal forms) is evaluated as the arithmetic average
of both forms to damp round-off, and the raw outer amplitudes B1, B2
are never materialized: the outer zones use the merged forms
B̃·exp[(±ξ+1+λ)√k] whose exponents are nonpositive inside their zones.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .airy import airy_arrays, airy_eval, f_factor
from .errors import (DegenerateCoefficientError, DomainError, IntegrationError,
                     NormalizationError)
from .spectrum import EigenvalueRecord, ZoneGeometry, _Parts, zone_geometry
from .well import WellSpec

_TINY = 1e-250
_EXP_CUTOFF = -700.0


@dataclass(frozen=True)
class CoefficientSet:
    c0: float
    d0: float
    a0: float
    b0: float
    b1p: float
    b2p: float
    a1p: float
    a2p: float
    bt1: float
    bt2: float
    j1p: float
    j2p: float


@dataclass(frozen=True)
class EigenSolution:
    """A normalized bound state, evaluable piecewise over all five zones."""

    well: WellSpec
    record: EigenvalueRecord
    geometry: ZoneGeometry
    coeffs: CoefficientSet

    @property
    def beta(self):
        return self.record.beta

    @property
    def b0(self):
        return self.coeffs.b0

    @property
    def bt1(self):
        return self.coeffs.bt1

    @property
    def bt2(self):
        return self.coeffs.bt2

    @property
    def k1(self):
        return self.geometry.k1

    @property
    def k2(self):
        return self.geometry.k2

    @property
    def lam(self):
        return self.well.lam

    def phi(self, xi):
        return eval_phi(self, xi)

    def dphi(self, xi):
        return eval_dphi(self, xi)

    def d2phi(self, xi):
        return eval_d2phi(self, xi)


def _dual_average(form_a, den_a, form_b, den_b):
    """Average of two equivalent expressions, skipping degenerate denominators."""
    ok_a = abs(den_a) >= _TINY
    ok_b = abs(den_b) >= _TINY
    if ok_a and ok_b:
        return 0.5 * (form_a() + form_b())
    if ok_a:
        return form_a()
    if ok_b:
        return form_b()
    raise DegenerateCoefficientError("both denominators of a dual expression vanished")


def solve_coefficients(w: WellSpec, rec: EigenvalueRecord) -> CoefficientSet:
    """Coefficient set for a converged eigenvalue, normalized to ∫φ²/2 = 1."""
    beta = rec.beta
    parts = _Parts(w, beta)
    geom = parts.geom
    s = math.sin(math.sqrt(beta))
    c = math.cos(math.sqrt(beta))
    pl, ql, pr, qr = parts.pl, parts.ql, parts.pr, parts.qr

    # D0/C0 ratio, both fractional forms averaged (homogeneous in pl, pr).
    d0r = _dual_average(
        lambda: -((pl + ql) * s - (pl - ql) * c) / ((pl - ql) * s + (pl + ql) * c),
        (pl - ql) * s + (pl + ql) * c,
        lambda: -((pr + qr) * s + (pr - qr) * c) / ((pr - qr) * s - (pr + qr) * c),
        (pr - qr) * s - (pr + qr) * c)
    a0 = 1.0 + d0r                    # C0 = 1 units until normalization
    b0 = 1.0 - d0r

    rt_eh = math.sqrt(-geom.eta_hat)
    rt_zh = math.sqrt(-geom.zeta_hat)
    b1p = _dual_average(
        lambda: (-a0 * s + b0 * c) / parts.nl, parts.nl,
        lambda: -rt_eh * (a0 * c + b0 * s) / parts.dl, parts.dl)
    b2p = _dual_average(
        lambda: (a0 * s + b0 * c) / parts.nr, parts.nr,
        lambda: rt_zh * (a0 * c - b0 * s) / parts.dr, parts.dr)

    qb = airy_eval(geom.eta_bar)
    nl_bar = qb.bi - parts.f1p * qb.ai
    dl_bar = qb.bip - parts.f1p * qb.aip
    if geom.eta_bar > 1e-10:
        bt1 = 0.5 * b1p * (nl_bar - dl_bar / math.sqrt(geom.eta_bar))
    else:
        bt1 = b1p * nl_bar            # second form is 0/0 at the collapsed edge
    qb = airy_eval(geom.zeta_bar)
    nr_bar = qb.bi - parts.f2p * qb.ai
    dr_bar = qb.bip - parts.f2p * qb.aip
    if geom.zeta_bar > 1e-10:
        bt2 = 0.5 * b2p * (nr_bar - dr_bar / math.sqrt(geom.zeta_bar))
    else:
        bt2 = b2p * nr_bar

    j1p = _ramp_norm_integral(geom.eta_hat, geom.eta_bar, parts.f1p)
    j2p = _ramp_norm_integral(geom.zeta_hat, geom.zeta_bar, parts.f2p)

    snc = math.sin(2.0 * math.sqrt(beta)) / (2.0 * math.sqrt(beta))
    total = (bt1 ** 2 / (2.0 * math.sqrt(geom.k1))
             + b1p ** 2 * math.sqrt(geom.eta_bar / geom.k1) * j1p
             + a0 ** 2 * (1.0 - snc) + b0 ** 2 * (1.0 + snc)
             + b2p ** 2 * math.sqrt(geom.zeta_bar / geom.k2) * j2p
             + bt2 ** 2 / (2.0 * math.sqrt(geom.k2)))
    if not (total > 0 and math.isfinite(total)):
        raise NormalizationError(f"normalization sum is {total!r}")
    c0 = math.sqrt(2.0 / total)

    return CoefficientSet(c0=c0, d0=c0 * d0r, a0=c0 * a0, b0=c0 * b0,
                          b1p=c0 * b1p, b2p=c0 * b2p,
                          a1p=-c0 * b1p * parts.f1p, a2p=-c0 * b2p * parts.f2p,
                          bt1=c0 * bt1, bt2=c0 * bt2, j1p=j1p, j2p=j2p)


def _ramp_norm_integral(lo, hi, f):
    """∫ [Bi(t) - f·Ai(t)]² dt by adaptive quadrature, tolerance 1e-12."""
    def integrand(t):
        ai, aip, bi, bip = airy_arrays(t)
        return float((bi - f * ai) ** 2)

    val, err = quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
    if not math.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
        raise NormalizationError(
            f"ramp normalization integral failed to converge (err={err!r})")
    return val


def build_solution(w: WellSpec, rec: EigenvalueRecord) -> EigenSolution:
    return EigenSolution(well=w, record=rec, geometry=zone_geometry(w, rec.beta),
                         coeffs=solve_coefficients(w, rec))


def eigenbasis(w: WellSpec, records=None):
    """All bound states of a well as normalized EigenSolutions."""
    from .spectrum import find_eigenvalues
    if records is None:
        records = find_eigenvalues(w)
    return [build_solution(w, r) for r in records]


def _zone_masks(w: WellSpec, x):
    lam = w.lam
    m1 = x <= -(1.0 + lam)
    m1p = (x > -(1.0 + lam)) & (x <= -1.0)
    m0 = (x > -1.0) & (x <= 1.0)
    m2p = (x > 1.0) & (x <= 1.0 + lam)
    m2 = x > 1.0 + lam
    return m1, m1p, m0, m2p, m2


def _eval_piecewise(sol: EigenSolution, xi, which: str):
    w, beta, g, cf = sol.well, sol.record.beta, sol.geometry, sol.coeffs
    f1p = f_factor(g.eta_bar)
    f2p = f_factor(g.zeta_bar)
    x = np.asarray(xi, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    m1, m1p, m0, m2p, m2 = _zone_masks(w, x)
    rk1, rk2, rb = math.sqrt(g.k1), math.sqrt(g.k2), math.sqrt(beta)

    if m1.any():
        t = (x[m1] + 1.0 + w.lam) * rk1
        e = np.where(t > _EXP_CUTOFF, np.exp(np.maximum(t, _EXP_CUTOFF)), 0.0)
        out[m1] = {"phi": cf.bt1, "dphi": rk1 * cf.bt1, "d2phi": g.k1 * cf.bt1}[which] * e
    if m1p.any():
        eta = -(w.v1 / w.lam) ** (1.0 / 3.0) * (x[m1p] + 1.0 + w.lam * beta / w.v1)
        ai, aip, bi, bip = airy_arrays(eta)
        if which == "phi":
            out[m1p] = cf.b1p * (bi - f1p * ai)
        elif which == "dphi":
            out[m1p] = -rk1 * cf.b1p * (bip - f1p * aip) / math.sqrt(g.eta_bar)
        else:
            out[m1p] = g.k1 * (eta / g.eta_bar) * cf.b1p * (bi - f1p * ai)
    if m0.any():
        xb = x[m0] * rb
        if which == "phi":
            out[m0] = cf.a0 * np.sin(xb) + cf.b0 * np.cos(xb)
        elif which == "dphi":
            out[m0] = rb * (cf.a0 * np.cos(xb) - cf.b0 * np.sin(xb))
        else:
            out[m0] = -beta * (cf.a0 * np.sin(xb) + cf.b0 * np.cos(xb))
    if m2p.any():
        zeta = (w.v2 / w.lam) ** (1.0 / 3.0) * (x[m2p] - 1.0 - w.lam * beta / w.v2)
        ai, aip, bi, bip = airy_arrays(zeta)
        if which == "phi":
            out[m2p] = cf.b2p * (bi - f2p * ai)
        elif which == "dphi":
            out[m2p] = rk2 * cf.b2p * (bip - f2p * aip) / math.sqrt(g.zeta_bar)
        else:
            out[m2p] = g.k2 * (zeta / g.zeta_bar) * cf.b2p * (bi - f2p * ai)
    if m2.any():
        t = (-x[m2] + 1.0 + w.lam) * rk2
        e = np.where(t > _EXP_CUTOFF, np.exp(np.maximum(t, _EXP_CUTOFF)), 0.0)
        out[m2] = {"phi": cf.bt2, "dphi": -rk2 * cf.bt2, "d2phi": g.k2 * cf.bt2}[which] * e
    return float(out[0]) if scalar else out


def eval_phi(sol: EigenSolution, xi):
    """Eigenfunction value(s); total on the real line."""
    return _eval_piecewise(sol, xi, "phi")


def eval_dphi(sol: EigenSolution, xi):
    return _eval_piecewise(sol, xi, "dphi")


def eval_d2phi(sol: EigenSolution, xi):
    return _eval_piecewise(sol, xi, "d2phi")


def _decay_rates(state):
    return math.sqrt(state.k1), math.sqrt(state.k2)


def overlap_integral(a, b, quad_tol=1e-12):
    """(1/2)∫ φ_a φ_b dξ for two states of the same well.

    Outer-zone tails are integrated analytically through the merged
    amplitudes; the interior [-(1+λ), 1+λ] is adaptive quadrature split
    at the junctions.  Works for any pair of state objects exposing
    phi(), bt1, bt2, k1, k2 and a common `well`.
    """
    if a.well != b.well:
        raise DomainError("overlap requires states of the same well")
    lam = a.well.lam
    ka1, ka2 = _decay_rates(a)
    kb1, kb2 = _decay_rates(b)
    tail_l = a.bt1 * b.bt1 / (ka1 + kb1)
    tail_r = a.bt2 * b.bt2 / (ka2 + kb2)

    def f(x):
        return a.phi(x) * b.phi(x)

    total = tail_l + tail_r
    breaks = [-(1.0 + lam), -1.0, 1.0, 1.0 + lam] if lam > 0 else [-1.0, 1.0]
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi > lo:
            val, err = quad(f, lo, hi, epsabs=quad_tol, epsrel=quad_tol, limit=200)
            if err > 1e-8 * max(1.0, abs(val)):
                raise IntegrationError(f"overlap quadrature on [{lo}, {hi}] failed")
            total += val
    return 0.5 * total


def inner_product(f: EigenSolution, g: EigenSolution) -> float:
    """Normalized inner product (1/2)∫φ_f φ_g dξ; δ_fg for exact states."""
    return overlap_integral(f, g)


def junction_mismatches(sol: EigenSolution):
    """Max |Δφ|, |Δφ′|, |Δφ″| over the four junctions.

    The left-adjacent zone is evaluated exactly at the junction; the
    right-adjacent zone one ulp past it, so the gap measures the
    discontinuity of the piecewise formulas, not the local slope.
    """
    lam = sol.well.lam
    points = [-(1.0 + lam), -1.0, 1.0, 1.0 + lam]
    out = {}
    for name, fn in (("phi", eval_phi), ("dphi", eval_dphi), ("d2phi", eval_d2phi)):
        worst = 0.0
        for xj in points:
            gap = abs(fn(sol, xj) - fn(sol, np.nextafter(xj, np.inf)))
            worst = max(worst, gap)
        out[name] = worst
    return out
