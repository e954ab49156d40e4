import pytest

from risfso.validation import load_meijer_oracle


@pytest.fixture(scope="session")
def meijer_oracle():
    return load_meijer_oracle()
