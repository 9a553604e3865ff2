import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FIGURE1 = HERE / "fixtures" / "figure1"
FIGURE1_ENTRY = FIGURE1 / "main" / "container.xsd"
XS = "http://www.w3.org/2001/XMLSchema"

_acceptance_key = pytest.StashKey[list]()


def xsd(body: str, tns: str = "urn:t", header: str = "") -> str:
    """A schema document with ``t:`` bound to the target namespace."""
    ns = f' xmlns:t="{tns}" targetNamespace="{tns}"' if tns else ""
    return (
        f'<?xml version="1.0"?>\n<xs:schema xmlns:xs="{XS}"{ns}{header}>\n'
        f"{body}\n</xs:schema>\n"
    )


@pytest.fixture
def write(tmp_path):
    def _write(name: str, body: str, **kw) -> Path:
        p = tmp_path / name
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(xsd(body, **kw))
        return p

    return _write


@pytest.fixture(scope="session")
def figure1():
    from xsdmetrics.loader import load_schema_set

    return load_schema_set([FIGURE1_ENTRY])


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, passed, detail)`` lines for the terminal summary.

    ``passed=None`` marks a criterion that could not run here.
    """
    lines = request.config.stash.setdefault(_acceptance_key, [])

    def record(criterion: str, passed, detail: str = ""):
        lines.append((criterion, passed, detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_acceptance_key, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in lines:
        status = "SKIP" if passed is None else "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {criterion}" + (f": {detail}" if detail else ""))
