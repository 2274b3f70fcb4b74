import contextlib
from pathlib import Path

import pytest

from restpark.ntriples import read_file
from restpark.service import serve_in_background
from restpark.store import TripleStore

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
PLANS = ROOT / "plans"


def load_fixture(name: str):
    return read_file(FIXTURES / f"{name}.nt", strict=True).triples


@pytest.fixture(scope="session")
def fixture_triples():
    return {name: load_fixture(name) for name in ("linkedmdb", "dbpedia", "dblp")}


@pytest.fixture(scope="session")
def fixture_stores(fixture_triples):
    return {name: TripleStore(ts) for name, ts in fixture_triples.items()}


@pytest.fixture(scope="session")
def fixture_servers(fixture_stores):
    """All three datasets served on ephemeral ports; DBLP under /dblp like its public counterpart."""
    mounts = {"linkedmdb": "", "dbpedia": "", "dblp": "/dblp"}
    with contextlib.ExitStack() as stack:
        yield {
            name: stack.enter_context(serve_in_background(store, mount_prefix=mounts[name]))
            for name, store in fixture_stores.items()
        }


@pytest.fixture(scope="session")
def endpoint_urls(fixture_servers):
    return {name: server.base_url for name, server in fixture_servers.items()}


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        if report.outcome != "passed" or name not in _criteria:
            _criteria[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_criteria.items()):
        terminalreporter.write_line(f"{outcome}  {name}")
