import pytest

from lzeros.characters import CharacterLabel, character_from_label


def chi_of(text):
    return character_from_label(CharacterLabel.parse(text))


@pytest.fixture
def chi():
    return chi_of


@pytest.fixture
def cache_path(tmp_path, monkeypatch):
    monkeypatch.delenv("LZEROS_CACHE", raising=False)
    return tmp_path / "zeros.jsonl"


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
