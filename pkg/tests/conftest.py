import pytest

from elo_horizon.dataset import load_dataset


@pytest.fixture(scope="session")
def ds2022():
    return load_dataset("synthetic-2022")


@pytest.fixture(scope="session")
def ds2019():
    return load_dataset("synthetic-2019")
