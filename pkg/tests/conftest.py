import sys
from pathlib import Path

import pytest
from hypothesis import settings

from cylcert.certio import load_certificate

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
MUTATIONS = CORPUS / "mutations"
LINT = CORPUS / "lint"

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def corpus_paths():
    return sorted(CORPUS.glob("*.cert.json"))


def load(cid):
    return load_certificate(CORPUS / f"{cid}.cert.json")


@pytest.fixture(scope="session")
def corpus():
    return {p.name[: -len(".cert.json")]: load_certificate(p) for p in corpus_paths()}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(lines):
        terminalreporter.write_line(lines[key])
