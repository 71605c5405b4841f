"""Expansion of an initial wavefunction on the finite eigenbasis.

With the nondimensional inner product ⟨f, g⟩ = (1/2)∫ f g dξ and the
nondimensional time τ = ħt/(2mL²), a state launched as F expands as

    Ψ(ξ, τ) = Σ c_n e^{-i β_n τ} φ_n(ξ),   c_n = ⟨φ_n, F⟩.

Because the basis is finite, Σ c_n² < 1 in general (Bessel), and the
reconstruction defect measures how far F is from the span.  The
triangular test function F(ξ) = √3·max(0, 1-|ξ|) has the closed-form
coefficients c_n = √3·B0_n·(1 - cos√β_n)/β_n, valid whenever the flat
zone covers [-1, 1] (both well families here).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .eigenfunction import overlap_integral
from .errors import BasisError, IntegrationError
from .well import WellSpec

TRIANGULAR_TAG = "triangular"


def triangular(xi):
    """Normalized triangular initial wavefunction on [-1, 1]."""
    x = np.asarray(xi, dtype=float)
    out = math.sqrt(3.0) * np.maximum(0.0, 1.0 - np.abs(x))
    return float(out) if np.isscalar(xi) else out


@dataclass(frozen=True)
class ProjectionResult:
    coefficients: np.ndarray
    probabilities: np.ndarray
    probability_sum: float
    reconstruction_error: float
    initial_function: str


@dataclass(frozen=True)
class TimeState:
    tau: float
    xis: np.ndarray
    psi: np.ndarray          # complex samples
    norm: float


def _domain(basis):
    lam = max(s.lam for s in basis)
    kmin = min(min(s.k1, s.k2) for s in basis)
    cut = (1.0 + lam) + 45.0 / math.sqrt(kmin)
    return -cut, cut, lam


def _quad_breaks(lo, hi, lam, extra=()):
    pts = {-(1.0 + lam), -1.0, 0.0, 1.0, 1.0 + lam, *extra}
    return sorted(p for p in pts if lo < p < hi)


def _integrate(f, lo, hi, breaks, tol):
    total = 0.0
    edges = [lo] + list(breaks) + [hi]
    for a, b in zip(edges[:-1], edges[1:]):
        val, err = quad(f, a, b, epsabs=tol, epsrel=tol, limit=300)
        if err > 1e-6 * max(1.0, abs(val)):
            raise IntegrationError(f"projection quadrature failed on [{a}, {b}]")
        total += val
    return total


def gram_matrix(basis):
    n = len(basis)
    g = np.eye(n)
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = overlap_integral(basis[i], basis[j])
    return g


def project(F, basis, tag="custom", gram_tol=1e-6, quad_tol=1e-10) -> ProjectionResult:
    """Expansion coefficients of F on an orthonormal eigenbasis.

    The basis is Gram-checked first; a normalization deviation of F
    beyond 1e-6 only warns, since unnormalized inputs are legitimate
    diagnostics.
    """
    if not basis:
        raise BasisError("empty basis")
    g = gram_matrix(basis)
    if np.max(np.abs(g - np.eye(len(basis)))) > gram_tol:
        raise BasisError("basis fails the orthonormality Gram check")
    lo, hi, lam = _domain(basis)
    breaks = _quad_breaks(lo, hi, lam)
    f_norm = _integrate(lambda x: 0.5 * F(x) ** 2, lo, hi, breaks, quad_tol)
    if abs(f_norm - 1.0) > 1e-6:
        warnings.warn(f"initial function norm deviates from 1: {f_norm!r}",
                      stacklevel=2)
    coeffs = np.array([
        _integrate(lambda x, s=s: 0.5 * s.phi(x) * F(x), lo, hi, breaks, quad_tol)
        for s in basis])
    probs = coeffs ** 2

    def defect(x):
        acc = F(x)
        for c, s in zip(coeffs, basis):
            acc -= c * s.phi(x)
        return 0.5 * acc * acc

    err2 = _integrate(defect, lo, hi, breaks, quad_tol)
    return ProjectionResult(coefficients=coeffs, probabilities=probs,
                            probability_sum=float(np.sum(probs)),
                            reconstruction_error=math.sqrt(max(0.0, err2)),
                            initial_function=tag)


def triangular_coefficients(basis) -> np.ndarray:
    """Closed-form triangular coefficients √3·B0·(1 - cos√β)/β per state."""
    out = np.empty(len(basis))
    for i, s in enumerate(basis):
        b = s.beta
        out[i] = math.sqrt(3.0) * s.b0 * (1.0 - math.cos(math.sqrt(b))) / b
    return out


def project_triangular(basis, **kw) -> ProjectionResult:
    return project(triangular, basis, tag=TRIANGULAR_TAG, **kw)


def evolve(proj: ProjectionResult, basis, tau: float, xis) -> TimeState:
    """Ψ(ξ, τ) samples and the quadrature norm (1/2)∫|Ψ|² dξ."""
    xis = np.asarray(xis, dtype=float)
    phases = np.array([np.exp(-1j * s.beta * tau) for s in basis])
    psi = np.zeros(xis.shape, dtype=complex)
    for c, ph, s in zip(proj.coefficients, phases, basis):
        psi += c * ph * s.phi(xis)
    lo, hi, lam = _domain(basis)
    breaks = _quad_breaks(lo, hi, lam)

    def density(x):
        val = 0.0 + 0.0j
        for c, ph, s in zip(proj.coefficients, phases, basis):
            val += c * ph * s.phi(x)
        return 0.5 * (val.real ** 2 + val.imag ** 2)

    nrm = _integrate(density, lo, hi, breaks, 1e-10)
    return TimeState(tau=tau, xis=xis, psi=psi, norm=nrm)
