import pytest

from nhmf_dimer import ModelParams
from nhmf_dimer.stationary_search import SearchConfig, find_hmf_stationary, find_nhmf_stationary


@pytest.fixture(scope="session")
def params():
    return ModelParams(u=0.5)


@pytest.fixture(scope="session")
def search_cfg():
    return SearchConfig()


@pytest.fixture(scope="session")
def census05(params, search_cfg):
    return find_nhmf_stationary(params, search_cfg)


@pytest.fixture(scope="session")
def census4(params, search_cfg):
    return find_nhmf_stationary(params.with_u(4.0), search_cfg)


@pytest.fixture(scope="session")
def hmf05(params, search_cfg):
    return find_hmf_stationary(params, search_cfg)


@pytest.fixture(scope="session")
def hmf4(params, search_cfg):
    return find_hmf_stationary(params.with_u(4.0), search_cfg)


@pytest.fixture(scope="session")
def first_excited05(params, census05):
    from nhmf_dimer.stationary_search import first_excited_point

    return first_excited_point(params, census05)
