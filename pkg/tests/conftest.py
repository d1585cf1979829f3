import numpy as np
import pytest

from multspec.config import settings


@pytest.fixture(autouse=True)
def restore_settings():
    """CLI runs write resolution and tolerance overrides into the shared settings."""
    original = {name: getattr(settings, name) for name in type(settings).model_fields}
    yield
    for name, value in original.items():
        setattr(settings, name, value)


@pytest.fixture
def rng():
    return np.random.default_rng(settings.seed)
