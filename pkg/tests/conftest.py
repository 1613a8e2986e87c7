import pytest

from core.config import loader


@pytest.fixture(autouse=True)
def restore_config():
    """
    Command-line runs replace the global configuration; put it back after each test.
    """
    saved = loader.config
    yield
    loader.config = saved
