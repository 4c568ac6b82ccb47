import os

import pytest

from derivedeq.derivedcat import derived_cat
from derivedeq.exactlin import load_quiver

HERE = os.path.dirname(__file__)
QUIVERS = os.path.join(HERE, "..", "quivers")


def quiver_path(name: str) -> str:
    return os.path.join(QUIVERS, f"{name}.quiver")


def load(name: str):
    return load_quiver(quiver_path(name))


@pytest.fixture(scope="session")
def A2():
    return derived_cat(load("A2"))


@pytest.fixture(scope="session")
def A3():
    return derived_cat(load("A3"))


@pytest.fixture(scope="session")
def D4():
    return derived_cat(load("D4"))


@pytest.fixture(scope="session")
def noyy():
    return load("NoYY")


# acceptance results, filled by test_acceptance.py and printed at the end
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip('ab')), k)):
        name, ok, secs, limit = ACCEPTANCE[n]
        status = "PASS" if ok else "FAIL"
        bound = f" (limit {limit:g}s)" if limit else ""
        terminalreporter.write_line(f"criterion {n:>3} {status}  {name}  {secs:.2f}s{bound}")
