"""Well descriptions and the piecewise trapezoidal potential.

A dimensional well (depths in joules, lengths in meters) reduces to the
nondimensional triplet (v1, v2, lam) through

    v_s = 2 m L² V_s / ħ²,   lam = l / L,

and every solver in this package operates on that triplet alone.  The
nondimensional coordinate is ξ = x/L; the potential has five zones:
left shoulder (1), left ramp (1'), flat bottom (0), right ramp (2'),
right shoulder (2).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HBAR_JS = 1.054571817e-34
EV_PER_JOULE = 6.24150907446076e18
ANGSTROM_M = 1e-10
ELECTRON_MASS_KG = 9.1093837015e-31

ZONE_LABELS = ("1", "1'", "0", "2'", "2")


@dataclass(frozen=True)
class DimensionalWell:
    """Physical well parameters in SI units."""

    v1_joule: float
    v2_joule: float
    half_width_m: float
    ramp_m: float
    mass_kg: float
    hbar: float = HBAR_JS

    def __post_init__(self):
        bad = []
        if not self.half_width_m > 0:
            bad.append("half_width_m")
        if not self.ramp_m >= 0:
            bad.append("ramp_m")
        if not (0 < self.v2_joule <= self.v1_joule):
            bad.append("v1_joule/v2_joule")
        if not self.mass_kg > 0:
            bad.append("mass_kg")
        if not self.hbar > 0:
            bad.append("hbar")
        if bad:
            raise ValidationError(f"invalid DimensionalWell fields: {', '.join(bad)}")


@dataclass(frozen=True)
class WellSpec:
    """The solution-controlling nondimensional triplet (v1, v2, lam).

    lam == 0 flags the exact square-well mode, handled by the swlimit
    module; the trapezoid pipeline requires lam > 0.
    """

    v1: float
    v2: float
    lam: float

    def __post_init__(self):
        bad = []
        if not (0 < self.v2 <= self.v1):
            bad.append("v1/v2 (need 0 < v2 <= v1)")
        if not self.lam >= 0:
            bad.append("lam")
        if bad:
            raise ValidationError(f"invalid WellSpec fields: {', '.join(bad)}")

    def to_dict(self):
        return {"v1": self.v1, "v2": self.v2, "lambda": self.lam}

    @classmethod
    def from_dict(cls, d):
        return cls(v1=float(d["v1"]), v2=float(d["v2"]), lam=float(d["lambda"]))


def well_from_ev(v1_ev, v2_ev, half_width_angstrom, ramp_angstrom,
                 mass_kg=ELECTRON_MASS_KG) -> DimensionalWell:
    """Convenience constructor with depths in eV and lengths in Å."""
    return DimensionalWell(
        v1_joule=v1_ev / EV_PER_JOULE,
        v2_joule=v2_ev / EV_PER_JOULE,
        half_width_m=half_width_angstrom * ANGSTROM_M,
        ramp_m=ramp_angstrom * ANGSTROM_M,
        mass_kg=mass_kg,
    )


def nondimensionalize(dw: DimensionalWell) -> WellSpec:
    """Map a dimensional well to its characteristic numbers."""
    scale = 2.0 * dw.mass_kg * dw.half_width_m ** 2 / dw.hbar ** 2
    return WellSpec(v1=scale * dw.v1_joule, v2=scale * dw.v2_joule,
                    lam=dw.ramp_m / dw.half_width_m)


def dimensionalize(w: WellSpec, half_width_m, mass_kg, hbar=HBAR_JS) -> DimensionalWell:
    """Inverse of nondimensionalize for a chosen length, mass and ħ."""
    scale = 2.0 * mass_kg * half_width_m ** 2 / hbar ** 2
    return DimensionalWell(v1_joule=w.v1 / scale, v2_joule=w.v2 / scale,
                           half_width_m=half_width_m, ramp_m=w.lam * half_width_m,
                           mass_kg=mass_kg, hbar=hbar)


def beta_to_energy_joule(w: WellSpec, beta, half_width_m, mass_kg, hbar=HBAR_JS):
    """Dimensional eigenvalue ε = β ħ²/(2 m L²)."""
    return beta * hbar ** 2 / (2.0 * mass_kg * half_width_m ** 2)


def potential_value(w: WellSpec, xi):
    """Five-branch trapezoidal potential; continuous, linear on the ramps.

    Accepts scalars or arrays.  Requires lam > 0.
    """
    if not w.lam > 0:
        raise ValidationError("potential_value requires lam > 0 (square well is handled by swlimit)")
    x = np.asarray(xi, dtype=float)
    out = np.zeros_like(x)
    out = np.where(x <= -(1.0 + w.lam), w.v1, out)
    m = (x > -(1.0 + w.lam)) & (x < -1.0)
    out = np.where(m, -w.v1 * (x + 1.0) / w.lam, out)
    m = (x > 1.0) & (x < 1.0 + w.lam)
    out = np.where(m, w.v2 * (x - 1.0) / w.lam, out)
    out = np.where(x >= 1.0 + w.lam, w.v2, out)
    if np.isscalar(xi):
        return float(out)
    return out


def zone_of(w: WellSpec, xi: float) -> str:
    """Zone label for a coordinate; junction points go to the left-adjacent zone."""
    if not w.lam > 0:
        raise ValidationError("zone_of requires lam > 0")
    if xi <= -(1.0 + w.lam):
        return "1"
    if xi <= -1.0:
        return "1'"
    if xi <= 1.0:
        return "0"
    if xi <= 1.0 + w.lam:
        return "2'"
    return "2"
