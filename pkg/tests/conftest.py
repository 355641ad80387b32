import pytest

from helpers import worked_example_instance

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")


@pytest.fixture
def worked_example():
    src, tgt, names = worked_example_instance()
    return src.taxonomy("source"), tgt.taxonomy("target"), names


@pytest.fixture
def chain3():
    """Source a<-b<-c and target a'<-b'<-c' with only the identity candidates."""
    from taxorelax.taxonomy import Taxonomy

    src = Taxonomy.from_edges({"a": {"x"}, "b": {"y"}, "c": {"z"}},
                              {"b": {"a"}, "c": {"b"}}, role="source")
    tgt = Taxonomy.from_edges({"a'": {"x"}, "b'": {"y"}, "c'": {"z"}},
                              {"b'": {"a'"}, "c'": {"b'"}}, role="target")
    return src, tgt
