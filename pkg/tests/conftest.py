import numpy as np
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient
from hypothesis import settings

from app.fock import FockVector
from app.models import KncsSpec
from app.states import build_kncs

settings.register_profile("fansqueeze", deadline=None, max_examples=25)
settings.load_profile("fansqueeze")


def coherent(alpha: complex) -> FockVector:
    return build_kncs(KncsSpec(xi=alpha, K=1))


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(scope="session")
def client():
    from app.main import app

    with TestClient(app) as c:
        yield c


@pytest.fixture
def phis16():
    return 2.0 * np.pi * np.arange(16) / 16
