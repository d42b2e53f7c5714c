import time
from pathlib import Path

import pytest

from polybisim import build_quotient, load_problem

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def paper_path():
    return FIXTURES / "paper_system.json"


@pytest.fixture(scope="session")
def toy_path():
    return FIXTURES / "toy_1d.json"


@pytest.fixture(scope="session")
def paper_spec(paper_path):
    return load_problem(paper_path)


@pytest.fixture(scope="session")
def paper_build(paper_spec):
    """Quotient of the 2-D fixture, built once per session.

    Returns (quotient, partition, build_seconds); the build takes tens of
    seconds, so every test that needs it shares this fixture.
    """
    t0 = time.monotonic()
    quotient, partition = build_quotient(
        paper_spec.system,
        paper_spec.lf,
        paper_spec.gamma_d,
        paper_spec.gamma_x,
        paper_spec.regions,
    )
    return quotient, partition, time.monotonic() - t0
