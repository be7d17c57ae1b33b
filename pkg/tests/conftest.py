import pytest

from dialogkit.dialog import DialogueEngine
from dialogkit.flights import dataset_store, generate_dataset
from dialogkit.query import LocalQuerier
from dialogkit.schema import load_domain_pack
from dialogkit.service import DialogService, packaged_pack_root


@pytest.fixture(scope="session")
def flights_pack():
    return load_domain_pack(packaged_pack_root("flights"))


@pytest.fixture(scope="session")
def library_pack():
    return load_domain_pack(packaged_pack_root("library"))


@pytest.fixture(scope="session")
def flights_rows():
    return generate_dataset(7, 200)


@pytest.fixture(scope="session")
def flights_store(flights_rows):
    return dataset_store(flights_rows)


@pytest.fixture
def engine(flights_pack, flights_store):
    return DialogueEngine(flights_pack, LocalQuerier(flights_store))


@pytest.fixture
def service():
    return DialogService()
