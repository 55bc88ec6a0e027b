import csv
import sys
from collections import OrderedDict
from pathlib import Path

import pytest

from bibrank import data_path
from bibrank.ingest import dedupe, load_schema, parse_corpus

sys.path.insert(0, str(Path(__file__).parent))

_criteria: "OrderedDict[int, dict]" = OrderedDict()
_node_criterion: dict[str, int] = {}


def pytest_collection_finish(session):
    for item in session.items:
        mark = item.get_closest_marker("acceptance")
        if mark is None:
            continue
        number, title = mark.args
        _node_criterion[item.nodeid] = number
        entry = _criteria.setdefault(number, {"title": title, "passed": 0, "failed": []})
        entry["title"] = title


def pytest_runtest_logreport(report):
    number = _node_criterion.get(report.nodeid)
    if number is None:
        return
    entry = _criteria[number]
    if report.failed:
        entry["failed"].append(report.nodeid.split("::")[-1])
    elif report.when == "call" and report.passed:
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "PASS" if e["passed"] and not e["failed"] else "FAIL"
        line = f"[{status}] {number:>2}. {e['title']}"
        if e["failed"]:
            line += f"  (failed: {', '.join(e['failed'])})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table2_rows():
    with data_path("table2.csv").open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def fixture_corpus():
    return parse_corpus(data_path("corpus_fixture.csv"), load_schema(data_path("scopus.map")))


@pytest.fixture(scope="session")
def raw_corpus():
    return parse_corpus(data_path("corpus_raw.csv"), load_schema(data_path("scopus.map")))


@pytest.fixture(scope="session")
def deduped_raw(raw_corpus):
    return dedupe(raw_corpus)
