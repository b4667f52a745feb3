import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from inference_sidecar import FixtureStore, StubEngine, create_app

FIXTURES_PATH = Path(__file__).resolve().parents[2] / "contracts" / "service_fixtures.json"


@pytest.fixture(scope="session")
def fixtures():
    return json.loads(FIXTURES_PATH.read_text(encoding="utf-8"))["fixtures"]


@pytest.fixture(scope="session")
def client():
    app = create_app(engine=StubEngine(FixtureStore(FIXTURES_PATH)))
    return TestClient(app)
