import pytest

from semigfpy.model.params import SystemParams
from semigfpy.setup_utils import setup_matplotlib


@pytest.fixture(scope='session', autouse=True)
def headless_matplotlib():
    setup_matplotlib()


@pytest.fixture
def wide_disc() -> SystemParams:
    # both users near 0 dB received SNR at mid-radius, GF 10 dB weaker than GB
    return SystemParams(radius_m=600,
                        pathloss_exp=2.8,
                        p_gb_dbm=-20,
                        p_gf_dbm=-30,
                        noise_dbm=-90,
                        sic_threshold=1)


@pytest.fixture
def small_disc() -> SystemParams:
    return SystemParams(radius_m=10,
                        pathloss_exp=2.8,
                        p_gb_dbm=-30,
                        p_gf_dbm=-30,
                        noise_dbm=-90,
                        sic_threshold=1)


@pytest.fixture
def unit_disc() -> SystemParams:
    # distances in units of the disc radius: rho is the mean received SNR at the cell edge
    return SystemParams(radius_m=1,
                        pathloss_exp=2.8,
                        p_gb_dbm=-50,
                        p_gf_dbm=-70,
                        noise_dbm=-90,
                        sic_threshold=1)
