import pytest

from quasitop.schemefile import fixture_path, load_scheme


@pytest.fixture(scope="session")
def ak():
    return load_scheme(fixture_path("ammann_kramer.toml"))


@pytest.fixture(scope="session")
def ak_tables(ak):
    return ak.tables()


@pytest.fixture(scope="session")
def tau_field():
    from quasitop.exact import NumberField

    return NumberField([-1, 1, 1], ("1/2", "1"))


def load(name):
    return load_scheme(fixture_path(name))
