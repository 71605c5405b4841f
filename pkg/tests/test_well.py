import json
import math

import numpy as np
import pytest

from trapwell import (DimensionalWell, ValidationError, WellSpec,
                      dimensionalize, nondimensionalize, potential_value,
                      well_from_ev, zone_of)
from trapwell.well import (ANGSTROM_M, ELECTRON_MASS_KG, EV_PER_JOULE,
                           HBAR_JS)


def test_reed_conversion():
    # electron in a 100 eV well of half width 1 Angstrom, near-square ramp
    dw = well_from_ev(100.0, 100.0, 1.0, 1e-9)
    w = nondimensionalize(dw)
    assert w.v1 == pytest.approx(26.2468, abs=1e-4)
    assert w.v2 == w.v1
    assert w.lam == pytest.approx(1e-9, rel=1e-12)


def test_conversion_oracle_50ev_2angstrom():
    # direct arithmetic oracle for v = 2 m L^2 V / hbar^2
    dw = well_from_ev(50.0, 50.0, 2.0, 0.1)
    w = nondimensionalize(dw)
    expected = (2.0 * ELECTRON_MASS_KG * (2.0 * ANGSTROM_M) ** 2
                * (50.0 / EV_PER_JOULE) / HBAR_JS ** 2)
    assert w.v1 == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(52.4937, abs=1e-4)


def test_depth_linearity():
    w1 = nondimensionalize(well_from_ev(10.0, 10.0, 1.0, 0.5))
    w2 = nondimensionalize(well_from_ev(1e-6, 1e-6, 1.0, 0.5))
    assert w2.v1 == pytest.approx(w1.v1 * 1e-7, rel=1e-12)


def test_round_trip():
    w = WellSpec(3.7, 1.2, 0.25)
    dw = dimensionalize(w, 2.5e-10, ELECTRON_MASS_KG)
    back = nondimensionalize(dw)
    assert back.v1 == pytest.approx(w.v1, rel=1e-12)
    assert back.v2 == pytest.approx(w.v2, rel=1e-12)
    assert back.lam == pytest.approx(w.lam, rel=1e-12)


def test_validation_errors_name_fields():
    with pytest.raises(ValidationError, match="half_width_m"):
        DimensionalWell(1.0, 0.5, -1.0, 0.1, 1.0)
    with pytest.raises(ValidationError, match="v1_joule/v2_joule"):
        DimensionalWell(0.5, 1.0, 1.0, 0.1, 1.0)
    with pytest.raises(ValidationError):
        WellSpec(1.0, 2.0, 0.5)
    with pytest.raises(ValidationError, match="lam"):
        WellSpec(1.0, 0.5, -0.5)


def test_wellspec_json_round_trip():
    w = WellSpec(1.0, 0.5, 1.0)
    d = json.loads(json.dumps(w.to_dict()))
    assert WellSpec.from_dict(d) == w
    assert set(d) == {"v1", "v2", "lambda"}


def test_potential_examples():
    w = WellSpec(1.0, 0.5, 1.0)
    assert potential_value(w, 0.0) == 0.0
    assert potential_value(w, -2.0) == 1.0
    assert potential_value(w, 1.5) == pytest.approx(0.25, abs=1e-15)


def test_potential_junction_values_exact():
    w = WellSpec(2.0, 0.75, 0.3)
    assert potential_value(w, -(1.0 + w.lam)) == w.v1
    assert potential_value(w, -1.0) == 0.0
    assert potential_value(w, 1.0) == 0.0
    assert potential_value(w, 1.0 + w.lam) == w.v2


def test_potential_continuity_bound():
    w = WellSpec(2.0, 0.75, 0.3)
    h = 1e-6
    xs = np.linspace(-3.0, 3.0, 2401)
    lip = max(w.v1, w.v2) / w.lam
    gaps = np.abs(potential_value(w, xs + h) - potential_value(w, xs))
    assert np.all(gaps <= lip * h + 1e-14)


def test_potential_requires_positive_lambda():
    with pytest.raises(ValidationError):
        potential_value(WellSpec(1.0, 0.5, 0.0), 0.0)


def test_zone_labels_and_tie_break():
    w = WellSpec(1.0, 0.5, 1.0)
    assert zone_of(w, -5.0) == "1"
    assert zone_of(w, -2.0) == "1"            # junction goes left
    assert zone_of(w, -1.0) == "1'"
    assert zone_of(w, 0.0) == "0"
    assert zone_of(w, 1.0) == "0"
    assert zone_of(w, 1.0001) == "2'"
    assert zone_of(w, 2.0) == "2'"
    assert zone_of(w, 2.5) == "2"


def test_beta_energy_conversion_inverse():
    from trapwell.well import beta_to_energy_joule
    w = WellSpec(26.2468, 26.2468, 1e-9)
    e = beta_to_energy_joule(w, w.v1, 1e-10, ELECTRON_MASS_KG)
    assert e * EV_PER_JOULE == pytest.approx(100.0, abs=2e-4)
