import os

import pytest
from hypothesis import HealthCheck, settings

from shintani_padic.gamma import GammaCache
from shintani_padic.lattice import default_config

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", max_examples=20, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def cone(config):
    return config.cone


@pytest.fixture(scope="session")
def gamma_cache(tmp_path_factory):
    """One Gamma cache for the whole run, so expensive values are computed once."""
    return GammaCache(tmp_path_factory.mktemp("gamma") / "cache.jsonl")


@pytest.fixture(autouse=True)
def _isolated_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SHINTANI_CACHE", str(tmp_path / "cli-cache.jsonl"))
