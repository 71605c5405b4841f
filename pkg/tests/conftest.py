import pytest

from trapwell import WellSpec, eigenbasis, find_eigenvalues, swp_eigenvalues

REED_V = 26.2468          # electron, 100 eV, 1 Angstrom half width
DABG_V = 225.0            # sqrt(v) = 15


@pytest.fixture(scope="session")
def well_single():
    return WellSpec(1.0, 0.5, 1.0)


@pytest.fixture(scope="session")
def records_single(well_single):
    return find_eigenvalues(well_single)


@pytest.fixture(scope="session")
def well_sym():
    return WellSpec(10.0, 10.0, 0.5)


@pytest.fixture(scope="session")
def records_sym(well_sym):
    return find_eigenvalues(well_sym)


@pytest.fixture(scope="session")
def basis_sym(well_sym, records_sym):
    return eigenbasis(well_sym, records_sym)


@pytest.fixture(scope="session")
def basis_single(well_single, records_single):
    return eigenbasis(well_single, records_single)


@pytest.fixture(scope="session")
def reed_swp_records():
    return swp_eigenvalues(REED_V, REED_V)


@pytest.fixture(scope="session")
def dabg_swp_records():
    return swp_eigenvalues(DABG_V, DABG_V)
