import sys
from pathlib import Path

import pytest

# Resolve the project root directory (folder that contains `taufact/`)
PROJECT_ROOT = Path(__file__).resolve().parents[1]

if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from taufact.structures.ring import ring_from_text  # noqa: E402
from taufact.structures.taurel import parse_tau  # noqa: E402


@pytest.fixture(autouse=True)
def _bug_reports_in_tmp(tmp_path, monkeypatch):
    """Keep bug-report artifacts out of the working tree."""
    monkeypatch.setattr("utils.BUG_REPORT_DIR", str(tmp_path / "bug_reports"))


@pytest.fixture
def ring():
    return ring_from_text


@pytest.fixture
def tau():
    def make(spec: str, name: str):
        R = ring_from_text(spec)
        return R, parse_tau(R, name)
    return make


@pytest.fixture
def el():
    """el("Z/12", "6") → element index."""
    def parse(spec: str, text: str) -> int:
        return ring_from_text(spec).parse_element(text)
    return parse
