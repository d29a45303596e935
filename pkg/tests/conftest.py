import os
import random
from collections.abc import AsyncGenerator

import pytest
from httpx import ASGITransport, AsyncClient

# Small, fast settings for every test; must happen before any core imports
os.environ.setdefault("QSPHERE_SAMPLES", "5")
os.environ.setdefault("QSPHERE_OPERATOR_CUTOFF", "6")
os.environ.setdefault("QSPHERE_TRACE_CUTOFF", "20")
os.environ.setdefault("LOG_LEVEL", "WARNING")

from core.config import RunConfig  # noqa: E402
from qsphere.qscalar import EXACT, ExactField  # noqa: E402


@pytest.fixture
def exact() -> ExactField:
    return EXACT


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)


@pytest.fixture
def small_config() -> RunConfig:
    return RunConfig(samples=3, cutoff=6, trace_cutoff=20)


@pytest.fixture
async def client() -> AsyncGenerator[AsyncClient, None]:
    from gateway import api_rate, app

    api_rate.clear()
    transport = ASGITransport(app=app)
    async with AsyncClient(transport=transport, base_url="http://test") as ac:
        yield ac
