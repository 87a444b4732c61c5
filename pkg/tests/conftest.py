import os

import pytest
from mpmath import mp


def pytest_configure(config):
    # RESUM_SLOW=1 runs the high-order tier without fiddling with -m.
    if os.environ.get("RESUM_SLOW") == "1":
        config.option.markexpr = ""


@pytest.fixture
def prec256():
    with mp.workprec(256):
        yield
