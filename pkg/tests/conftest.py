from pathlib import Path

import pytest

import medthreat
from medthreat.document import parse_document

FIXTURES = Path(medthreat.__file__).parent / "fixtures"
DEVICE_FIXTURES = ("d1", "d2", "d3", "d4")


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.tmdoc.json"


def load_fixture(name: str):
    return parse_document(fixture_path(name).read_text(encoding="utf-8"))


@pytest.fixture
def case_studies():
    return load_fixture("case-studies")


@pytest.fixture(params=DEVICE_FIXTURES)
def device_fixture(request):
    return request.param
