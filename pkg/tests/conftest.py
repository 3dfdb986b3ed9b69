import sys

import hypothesis
import pytest

from torsionhelp.group_data import SHIPPED_GROUPS, load_shipped
from torsionhelp.group_ring import GroupTable

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def tables():
    return {name: load_shipped(name) for name in SHIPPED_GROUPS}


@pytest.fixture(scope="session")
def group_tables(tables):
    return {name: GroupTable.from_character_table(t) for name, t in tables.items()}


def pytest_terminal_summary(terminalreporter):
    mod = next((m for k, m in list(sys.modules.items()) if k.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
