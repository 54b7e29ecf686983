import gc

import pytest

from chaincalc.theory import clear_caches


@pytest.fixture(autouse=True, scope="module")
def _fresh_caches():
    # theories are interned weakly but memo tables hold strong references
    yield
    clear_caches()
    gc.collect()
