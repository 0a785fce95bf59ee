import json
from importlib import resources

import pytest

from blockscope.perm import Permutation, group_from_generators
from blockscope.weil import sl2_group

DATA = resources.files("blockscope") / "data"


def load_corpus(name):
    return json.loads((DATA / name).read_text())["groups"]


def build(entry):
    return group_from_generators(entry["degree"], entry["generators"])


def symmetric(n):
    cycle = list(range(1, n)) + [0]
    swap = [1, 0] + list(range(2, n))
    return group_from_generators(n, [cycle, swap])


def cyclic(n):
    return group_from_generators(n, [list(range(1, n)) + [0]])


@pytest.fixture(scope="session")
def S3():
    return symmetric(3)


@pytest.fixture(scope="session")
def S4():
    return symmetric(4)


@pytest.fixture(scope="session")
def SL28():
    return sl2_group(8)[0]


@pytest.fixture(scope="session")
def small_groups():
    return load_corpus("small_groups.json")


@pytest.fixture(scope="session")
def named_groups():
    return {e["name"]: e for e in load_corpus("named_groups.json")}


@pytest.fixture(scope="session")
def trio():
    return {e["name"]: e for e in load_corpus("paper_7_3.json")}


def cycles(n, *cyc):
    return Permutation.from_cycles(n, cyc)


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    if acceptance and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(acceptance.RESULTS):
            terminalreporter.write_line(acceptance.RESULTS[n])
