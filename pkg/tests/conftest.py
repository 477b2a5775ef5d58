import pathlib

import pytest

from dpcst.instance import parse_instance

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def example11_text() -> str:
    return (DATA / "example11.pcst").read_text()


@pytest.fixture(scope="session")
def example11(example11_text):
    return parse_instance(example11_text)
