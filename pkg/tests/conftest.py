import pytest

from ppk.analysis import scan_convergent_words


@pytest.fixture(scope="session")
def base2_scan():
    """Classification of all base-2 words up to length 10, shared across
    modules because the scan costs a few seconds."""
    return scan_convergent_words(2, 10)
