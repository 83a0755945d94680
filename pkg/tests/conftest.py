from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from proactive import select
from proactive.scenario import Scenario, default_scenario


@pytest.fixture(scope="session")
def scenario() -> Scenario:
    return default_scenario()


@pytest.fixture(scope="session")
def order() -> select.ChooseOrder:
    return select.ChooseOrder()


@pytest.fixture()
def states(scenario):
    def get(label: str):
        state = scenario.system.by_label(label)
        assert state is not None, label
        return state

    return get


FIXTURES = Path(__file__).parent / "fixtures"
