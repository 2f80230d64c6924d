from __future__ import annotations

import pytest

from vsheet.checks import case_states, coincidence_state


@pytest.fixture(scope="session")
def states():
    """One elastic background per stability case (F = (1, 0), c = 1)."""
    return case_states()


@pytest.fixture(scope="session")
def case1(states):
    return states["Case1"]


@pytest.fixture(scope="session")
def coincidence():
    return coincidence_state()
