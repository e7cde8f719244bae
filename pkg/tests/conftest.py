import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from radarlte.config import LteConfig, Scenario, SimControl, resolve  # noqa: E402

DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture
def macro_scenario():
    return resolve(Scenario(sim=SimControl(duration_s=0.05)))


@pytest.fixture
def small_scenario():
    return resolve(Scenario(lte=LteConfig(deployment="small_cell"), sim=SimControl(duration_s=0.05)))
