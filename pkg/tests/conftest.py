import pytest

from dgla import build_named_model, compute_symmetric_data


@pytest.fixture(scope="session")
def circle():
    return build_named_model("circle2", 6)


@pytest.fixture(scope="session")
def disc():
    return build_named_model("disc1", 6)


@pytest.fixture(scope="session")
def bigon_a():
    return build_named_model("bigon-a", 6)


@pytest.fixture(scope="session")
def bigon_b():
    return build_named_model("bigon-b", 6)


@pytest.fixture(scope="session")
def bigon_sym():
    return build_named_model("bigon-sym", 6)


@pytest.fixture(scope="session")
def symdata():
    return compute_symmetric_data(6)


def _criterion_sort_key(name: str) -> int:
    try:
        return int(name.split("_")[2])
    except (IndexError, ValueError):
        return 999


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    outcomes: dict[str, str] = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if not (name.startswith("test_criterion_") or name.startswith("test_smoke_")):
                continue
            if status == "passed" and getattr(report, "when", "call") != "call":
                continue
            outcome = "PASS" if status == "passed" else "FAIL"
            if outcomes.get(name) != "FAIL":
                outcomes[name] = outcome
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(outcomes, key=_criterion_sort_key):
        parts = name.split("_")
        if name.startswith("test_criterion_"):
            label = f"criterion {parts[2]} ({'_'.join(parts[3:])})"
        else:
            label = "_".join(parts[1:])
        terminalreporter.write_line(f"{label}: {outcomes[name]}")
