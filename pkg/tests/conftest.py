import pytest

from boyd_maxwell.classify import families as fam

_CACHE: dict = {}


def build_family(name: str) -> fam.GraphFamily:
    """Each family is enumerated once per test session."""
    if name not in _CACHE:
        _CACHE[name] = fam.FAMILY_BUILDERS[name]()
    return _CACHE[name]


@pytest.fixture(scope="session")
def family():
    return build_family


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record and print the one-line verdict of an acceptance criterion."""

    def report(number: int, ok: bool, detail: str):
        line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        _ACCEPTANCE[number] = line
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
