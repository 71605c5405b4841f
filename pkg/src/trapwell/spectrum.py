"""Transcendental eigenvalue machinery for the trapezoidal well.

For 0 < β < v2 the junction algebra produces the factors

    f1' = f(η̄),  f2' = f(ζ̄)
    g_l = -√(-η̂)·Nl/Dl,   g_r = +√(-ζ̂)·Nr/Dr

with Nl = Bi(η̂) - f1'·Ai(η̂), Dl = Bi′(η̂) - f1'·Ai′(η̂) (and the ζ̂
analogues), and three equivalent eigenvalue equations

    D(β)  = (1 + g_l·g_r)·sin(2√β) + (g_l - g_r)·cos(2√β)
    D°(β) = (γ_l·γ_r + 1)·sin(2√β) + (γ_r - γ_l)·cos(2√β),  γ = 1/g
    D*(β) = D°/R = -sin(2√β + φ)

where cos φ = -C/R, sin φ = -S/R, C = γ_l·γ_r + 1, S = γ_r - γ_l and
R = √(C² + S²).  φ is unwrapped continuously from φ(β→0⁺) = 0, so
θ(β) = (2√β + φ)/π crosses the integers exactly at the eigenvalues.

Everything is computed from the homogeneous pairs (p, q) with
γ = p/q and g = q/p, which keeps D* and φ finite through poles of
either g or γ.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .airy import airy_arrays, airy_eval, f_factor
from .errors import DomainError, ValidationError
from .well import WellSpec

_TINY = 1e-250
_EDGE = 1e-12          # v2 endpoint evaluated at v2*(1 - _EDGE)
_ANCHOR = 1e-9         # φ-unwrap anchor at β = v2*_ANCHOR
_SYM_TOL = 1e-12       # relative v1/v2 difference treated as symmetric


@dataclass(frozen=True)
class ZoneGeometry:
    """Per-(well, β) shorthand: k_s = v_s - β and the Airy junction values."""

    k1: float
    k2: float
    eta_bar: float
    eta_hat: float
    zeta_hat: float
    zeta_bar: float


@dataclass(frozen=True)
class SpectralFactors:
    f1p: float
    f2p: float
    g_left: float
    g_right: float
    gamma_left: float
    gamma_right: float
    c_coef: float
    s_coef: float
    r_norm: float
    phi: float
    theta: float
    asymptote: bool = False


@dataclass(frozen=True)
class EigenvalueRecord:
    index_n: int
    beta: float
    residual: float
    parity: str              # 'even' | 'odd' | 'none'
    newton_iterations: int
    threshold: bool = False


@dataclass(frozen=True)
class NegativeBetaDiagnostic:
    min_abs_im_d: float
    beta_at_min: float
    grid: np.ndarray
    im_d: np.ndarray
    sinh_coeff: np.ndarray   # 1 + g_l·g_r (real on the β<0 branch)
    cosh_coeff: np.ndarray   # -i·(g_l - g_r)


@dataclass(frozen=True)
class ScanCurves:
    beta_over_v2: np.ndarray
    d_raw: np.ndarray        # NaN where the raw form hits an asymptote
    d_circ: np.ndarray
    d_star: np.ndarray
    theta: np.ndarray


def zone_geometry(w: WellSpec, beta: float) -> ZoneGeometry:
    """Junction values of the Airy variables for an admissible β."""
    if not w.lam > 0:
        raise DomainError("zone_geometry requires lam > 0; use swlimit for the square well")
    if not (0.0 < beta <= w.v2):
        raise DomainError(f"beta must lie in (0, v2]; got {beta!r} with v2={w.v2!r}")
    c1 = (w.lam / w.v1) ** (2.0 / 3.0)
    c2 = (w.lam / w.v2) ** (2.0 / 3.0)
    return ZoneGeometry(k1=w.v1 - beta, k2=w.v2 - beta,
                        eta_bar=c1 * (w.v1 - beta), eta_hat=-c1 * beta,
                        zeta_hat=-c2 * beta, zeta_bar=c2 * (w.v2 - beta))


class _Parts:
    """Homogeneous factor pieces at one β: γ_l = pl/ql, γ_r = pr/qr."""

    __slots__ = ("geom", "f1p", "f2p", "pl", "ql", "pr", "qr",
                 "dl", "dr", "nl", "nr")

    def __init__(self, w: WellSpec, beta: float):
        geom = zone_geometry(w, beta)
        f1p = f_factor(geom.eta_bar)
        f2p = f_factor(geom.zeta_bar)
        qh = airy_eval(geom.eta_hat)
        nl = qh.bi - f1p * qh.ai
        dl = qh.bip - f1p * qh.aip
        qh = airy_eval(geom.zeta_hat)
        nr = qh.bi - f2p * qh.ai
        dr = qh.bip - f2p * qh.aip
        self.geom = geom
        self.f1p, self.f2p = f1p, f2p
        self.nl, self.dl, self.nr, self.dr = nl, dl, nr, dr
        self.pl = -dl
        self.ql = math.sqrt(-geom.eta_hat) * nl
        self.pr = dr
        self.qr = math.sqrt(-geom.zeta_hat) * nr

    def angle_parts(self):
        """(cos-like, sin-like) numerators of (cos φ, sin φ); common positive scale."""
        sig = 1.0 if self.ql * self.qr >= 0.0 else -1.0
        e = self.pl * self.pr + self.ql * self.qr
        f = self.pr * self.ql - self.pl * self.qr
        return -sig * e, -sig * f

    def principal(self):
        ce, se = self.angle_parts()
        return math.atan2(se, ce)


def _principal(w: WellSpec, beta: float) -> float:
    return _Parts(w, beta).principal()


def _wrap(d: float) -> float:
    return (d + math.pi) % (2.0 * math.pi) - math.pi


def _step_increment(fn, x0, p0, x1, p1, depth=0):
    """Unwrapped angle increment of fn over [x0, x1].

    Nearest-branch continuation with a midpoint consistency check: a
    step whose two half-increments disagree with the single-step wrap
    (a 2π slip) or exceed π/4 is subdivided, so fast sweeps through
    factor poles cannot alias away full turns.
    """
    d = _wrap(p1 - p0)
    if depth >= 48 or (x1 - x0) <= 1e-14 * max(abs(x0), abs(x1)):
        return d
    xm = 0.5 * (x0 + x1)
    pm = fn(xm)
    d1 = _wrap(pm - p0)
    d2 = _wrap(p1 - pm)
    if abs(d1) > math.pi / 4 or abs(d2) > math.pi / 4 or abs(d1 + d2 - d) > 1e-9:
        return (_step_increment(fn, x0, p0, xm, pm, depth + 1)
                + _step_increment(fn, xm, pm, x1, p1, depth + 1))
    return d


def _unwrap_march(fn, xs):
    """Continuously unwrapped angles of fn along ascending xs."""
    ps = [fn(x) for x in xs]
    out = [ps[0]]
    for i in range(1, len(xs)):
        out.append(out[-1] + _step_increment(fn, xs[i - 1], ps[i - 1], xs[i], ps[i]))
    return np.array(out)


def _march_density(w: WellSpec) -> int:
    # φ varies by at most ~π + 1.4·λ√v1 over (0, v2); keep the mean step
    # well under π/4 so the midpoint slip check has margin
    return int(max(48, math.ceil(16.0 + 8.0 * w.lam * math.sqrt(w.v1))))


def _anchor_path(w: WellSpec, beta: float):
    """Ascending β path from the unwrap anchor to beta."""
    lo = w.v2 * _ANCHOR
    if beta <= lo:
        return [beta]
    path = list(np.geomspace(lo, beta, _march_density(w)))
    path[-1] = beta
    return path


def phase_angle(w: WellSpec, beta: float) -> float:
    """Branch-continuous φ(β), unwrapped from the anchor φ(β→0⁺) = 0."""
    path = _anchor_path(w, beta)
    return float(_unwrap_march(lambda b: _principal(w, b), path)[-1])


def spectral_factors(w: WellSpec, beta: float) -> SpectralFactors:
    """All factor-pipeline quantities at one β (strictly inside (0, v2))."""
    if not (0.0 < beta < w.v2):
        raise DomainError(f"spectral_factors requires 0 < beta < v2; got {beta!r}")
    parts = _Parts(w, beta)
    asymptote = abs(parts.dl) < _TINY or abs(parts.dr) < _TINY
    with np.errstate(divide="ignore", invalid="ignore"):
        g_l = parts.ql / parts.pl
        g_r = parts.qr / parts.pr
        gam_l = parts.pl / parts.ql
        gam_r = parts.pr / parts.qr
        c = gam_l * gam_r + 1.0
        s = gam_r - gam_l
    r = math.sqrt((1.0 + gam_l * gam_l) * (1.0 + gam_r * gam_r))
    phi = phase_angle(w, beta)
    theta_val = (2.0 * math.sqrt(beta) + phi) / math.pi
    return SpectralFactors(f1p=parts.f1p, f2p=parts.f2p,
                           g_left=float(g_l), g_right=float(g_r),
                           gamma_left=float(gam_l), gamma_right=float(gam_r),
                           c_coef=float(c), s_coef=float(s), r_norm=float(r),
                           phi=phi, theta=theta_val, asymptote=asymptote)


def _forms(parts: _Parts, beta: float):
    s2 = math.sin(2.0 * math.sqrt(beta))
    c2 = math.cos(2.0 * math.sqrt(beta))
    e = parts.pl * parts.pr + parts.ql * parts.qr
    f = parts.pr * parts.ql - parts.pl * parts.qr
    core = e * s2 + f * c2
    return e, f, core


def d_raw(w: WellSpec, beta: float) -> float:
    """Raw transcendental form; may blow up at g-factor poles."""
    parts = _Parts(w, beta)
    _, _, core = _forms(parts, beta)
    den = parts.pl * parts.pr
    with np.errstate(divide="ignore", invalid="ignore"):
        return float(np.divide(core, den))


def d_circ(w: WellSpec, beta: float) -> float:
    """Reciprocal-factor form; finite except at the frozen β→0 asymptote."""
    parts = _Parts(w, beta)
    _, _, core = _forms(parts, beta)
    den = parts.ql * parts.qr
    with np.errstate(divide="ignore", invalid="ignore"):
        return float(np.divide(core, den))


def d_star(w: WellSpec, beta: float) -> float:
    """Pole-free normalized form, identically -sin(2√β + φ)."""
    parts = _Parts(w, beta)
    _, _, core = _forms(parts, beta)
    m = math.sqrt((parts.pl ** 2 + parts.ql ** 2) * (parts.pr ** 2 + parts.qr ** 2))
    sig = 1.0 if parts.ql * parts.qr >= 0.0 else -1.0
    return -sig * core / m


def theta(w: WellSpec, beta: float) -> float:
    """Counting function θ(β) = (2√β + φ(β))/π; integers mark eigenvalues."""
    return (2.0 * math.sqrt(beta) + phase_angle(w, beta)) / math.pi


class _Scan:
    """Shared φ/θ scan over (0, v2) with alias-proof unwrapping."""

    def __init__(self, w: WellSpec, grid_points: int = 512):
        self.w = w
        hi = w.v2 * (1.0 - _EDGE)
        n = max(grid_points, _march_density(w))
        base = list(w.v2 * np.linspace(_ANCHOR, 1.0, n + 1)[:-1]) + [hi]
        self.betas = np.array(base)
        self.phis = _unwrap_march(lambda b: _principal(w, b), base)
        self.thetas = (2.0 * np.sqrt(self.betas) + self.phis) / math.pi

    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.thetas) > 0))


def _refine_root(w: WellSpec, n: int, lo: float, hi: float, phi_lo: float,
                 residual_tol: float, max_iterations: int):
    """Safeguarded Newton on t(β) = 2√β + φ(β) - nπ inside [lo, hi].

    φ inside the bracket continues from the left-anchor value; the
    derivative is a central finite difference with step
    h = max(1e-7·v2, 1e-9); a bisection step replaces any Newton step
    leaving the bracket.
    """
    p_lo = _principal(w, lo)
    cap = w.v2 * (1.0 - _EDGE)

    def t(x):
        return (2.0 * math.sqrt(x) + phi_lo + _wrap(_principal(w, x) - p_lo)
                - n * math.pi)

    a, b = lo, hi
    x = 0.5 * (lo + hi)
    h = max(1e-7 * w.v2, 1e-9)
    iters = 0
    residual = abs(math.sin(t(x)))
    for iters in range(1, max_iterations + 1):
        tx = t(x)
        residual = abs(math.sin(tx))
        if residual <= residual_tol:
            break
        if tx < 0:
            a = x
        else:
            b = x
        xp = min(x + h, cap)
        xm = max(x - h, w.v2 * _ANCHOR)
        d = (t(xp) - t(xm)) / (xp - xm)
        xn = x - tx / d if d != 0.0 else 0.5 * (a + b)
        if not (a < xn < b):
            xn = 0.5 * (a + b)
        if abs(xn - x) <= 1e-14 * w.v2:
            x = xn
            residual = abs(math.sin(t(x)))
            break
        x = xn
    return x, residual, iters


def _parity_tag(w: WellSpec, beta: float) -> str:
    """Even/odd tag for symmetric wells from the factorized determinant."""
    if abs(w.v1 - w.v2) > _SYM_TOL * w.v1:
        return "none"
    parts = _Parts(w, beta)
    s = math.sin(math.sqrt(beta))
    c = math.cos(math.sqrt(beta))
    even_factor = abs(parts.ql * s - parts.pl * c)   # g·sin√β - cos√β, scaled by pl
    odd_factor = abs(parts.pl * s + parts.ql * c)    # sin√β + g·cos√β, scaled by pl
    return "even" if even_factor <= odd_factor else "odd"


def find_eigenvalues(w: WellSpec, grid_points: int = 512,
                     residual_tol: float = 1e-10,
                     max_iterations: int = 60):
    """All bound-state eigenvalues of the trapezoidal well, ascending.

    Roots are bracketed as crossings of θ(β) through the integers
    1..floor(θ(v2⁻)) and refined by safeguarded Newton.  Raises
    ValidationError if the per-instance θ-monotonicity check fails.
    """
    if not w.lam > 0:
        raise DomainError("find_eigenvalues requires lam > 0; use swlimit.swp_eigenvalues")
    scan = _Scan(w, grid_points)
    if not scan.monotone():
        raise ValidationError(
            "theta(beta) is not monotone on the scan grid for this well; "
            "eigenvalue bracketing by integer crossings is unreliable here")
    count = int(math.floor(scan.thetas[-1]))
    records = []
    for n in range(1, count + 1):
        i = int(np.searchsorted(scan.thetas, n))
        lo, hi = scan.betas[i - 1], scan.betas[i]
        beta, residual, iters = _refine_root(w, n, float(lo), float(hi),
                                             float(scan.phis[i - 1]),
                                             residual_tol, max_iterations)
        beta = float(beta)
        records.append(EigenvalueRecord(index_n=n, beta=beta,
                                        residual=float(residual),
                                        parity=_parity_tag(w, beta),
                                        newton_iterations=iters,
                                        threshold=bool((w.v2 - beta) <= 1e-10 * w.v2)))
    return records


def absence_condition(w: WellSpec) -> bool:
    """True when [2√v2 + φ(v2⁻)]/π < 1, i.e. the well has no bound state."""
    if not w.lam > 0:
        raise DomainError("absence_condition requires lam > 0")
    return theta(w, w.v2 * (1.0 - _EDGE)) < 1.0


def negative_beta_diagnostic(w: WellSpec, grid) -> NegativeBetaDiagnostic:
    """Imaginary part of the raw form on a β < 0 grid.

    On the negative branch both g factors are pure imaginary and

        Im D = (1 + g_l·g_r)·sinh(2√-β) + [-i(g_l - g_r)]·cosh(2√-β)

    with both bracketed coefficients real.  A strictly positive minimum
    of |Im D| over the grid certifies that no eigenvalue hides there.
    """
    if not w.lam > 0:
        raise DomainError("negative_beta_diagnostic requires lam > 0")
    b = np.asarray(grid, dtype=float)
    if b.size == 0 or np.any(b >= 0):
        raise DomainError("grid must be non-empty and strictly negative")
    c1 = (w.lam / w.v1) ** (2.0 / 3.0)
    c2 = (w.lam / w.v2) ** (2.0 / 3.0)
    eta_hat = -c1 * b        # positive for β < 0
    zeta_hat = -c2 * b
    f1 = np.array([f_factor(z) for z in c1 * (w.v1 - b)])
    f2 = np.array([f_factor(z) for z in c2 * (w.v2 - b)])
    ai, aip, bi, bip = airy_arrays(eta_hat)
    gl_im = -np.sqrt(eta_hat) * (bi - f1 * ai) / (bip - f1 * aip)
    ai, aip, bi, bip = airy_arrays(zeta_hat)
    gr_im = np.sqrt(zeta_hat) * (bi - f2 * ai) / (bip - f2 * aip)
    sinh_coeff = 1.0 - gl_im * gr_im
    cosh_coeff = gl_im - gr_im
    root = 2.0 * np.sqrt(-b)
    im_d = sinh_coeff * np.sinh(root) + cosh_coeff * np.cosh(root)
    k = int(np.argmin(np.abs(im_d)))
    return NegativeBetaDiagnostic(min_abs_im_d=float(abs(im_d[k])),
                                  beta_at_min=float(b[k]), grid=b, im_d=im_d,
                                  sinh_coeff=sinh_coeff, cosh_coeff=cosh_coeff)


def h_universal(u: float) -> float:
    """Universal symmetric-well existence function H(u) = (φ|_{β=v} - π)/u^{3/2}.

    At β = v both overlined Airy values vanish, the circumflexed ones
    coincide at -u, and φ|_{β=v} depends on u = (λ√v)^{2/3} alone.  φ is
    unwrapped along u from the u→0⁺ limit φ = π.
    """
    if not (isinstance(u, (int, float)) and u > 0):
        raise DomainError(f"h_universal requires u > 0, got {u!r}")
    f0 = f_factor(0.0)

    def principal_at(uu):
        q = airy_eval(-uu)
        n = q.bi - f0 * q.ai
        d = q.bip - f0 * q.aip
        pl = -d
        ql = math.sqrt(uu) * n
        # symmetric chain: pr = -pl, qr = ql, so sign(ql*qr) = +1
        e = -pl * pl + ql * ql
        f = -2.0 * pl * ql
        return math.atan2(-f, -e)

    # φ winds at rate ≈ 2√u in u (Airy oscillation), so cap each step at
    # π/8 of the worst-case sweep; the slip check below is a backstop.
    u0 = min(1e-4, u)
    path = [u0]
    while path[-1] < u:
        step = min(0.25, math.pi / (16.0 * (1.0 + math.sqrt(path[-1]))))
        path.append(min(u, path[-1] + step))
    raw = _unwrap_march(principal_at, path)
    # anchor the branch: φ(u0) ≈ π + u0^{3/2}
    target0 = math.pi + u0 ** 1.5
    k = round((target0 - raw[0]) / (2.0 * math.pi))
    phi_u = raw[-1] + 2.0 * math.pi * k
    return (phi_u - math.pi) / u ** 1.5


def scan_curves(w: WellSpec, grid_points: int = 512) -> ScanCurves:
    """D, D°, D*, θ sampled on the scan grid (for CSV export and plots)."""
    scan = _Scan(w, grid_points)
    n = scan.betas.size
    draw = np.empty(n)
    dcirc = np.empty(n)
    dstar = np.empty(n)
    for i, b in enumerate(scan.betas):
        parts = _Parts(w, b)
        _, _, core = _forms(parts, b)
        m = math.sqrt((parts.pl ** 2 + parts.ql ** 2) * (parts.pr ** 2 + parts.qr ** 2))
        sig = 1.0 if parts.ql * parts.qr >= 0.0 else -1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            draw[i] = np.divide(core, parts.pl * parts.pr)
            dcirc[i] = np.divide(core, parts.ql * parts.qr)
        dstar[i] = -sig * core / m
    draw[~np.isfinite(draw)] = np.nan
    return ScanCurves(beta_over_v2=scan.betas / w.v2, d_raw=draw, d_circ=dcirc,
                      d_star=dstar, theta=scan.thetas)
