import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from windrift import MaterialParams, ThermalEnv, TorusGeometry, derive_scales


@pytest.fixture(scope="session")
def kappa100_scales():
    """Extreme type-II material with delta = 1, xi = 0.01, g = 1."""
    params = MaterialParams(zeta=1.0, a_coeff=5000.0, b_coeff=5000.0,
                            g_coupling=1.0, sigma=1.0, d_thickness=1.0)
    return derive_scales(params)


@pytest.fixture(scope="session")
def kappa100_params():
    return MaterialParams(zeta=1.0, a_coeff=5000.0, b_coeff=5000.0,
                          g_coupling=1.0, sigma=1.0, d_thickness=1.0)


@pytest.fixture
def square_torus():
    return TorusGeometry(l_x=10.0, l_y=10.0)


@pytest.fixture
def basic_env():
    return ThermalEnv(mass=1.0, eta=2.0, temperature=1.0)
