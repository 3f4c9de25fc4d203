from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import pytest

from mfmod.frontend import SourceUnit, parse, parse_text

FIXTURES = Path(__file__).parent / "fixtures"


def corpus_paths() -> list[Path]:
    root = resources.files("mfmod").joinpath("corpus")
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".cbl"))


def load_corpus(path: Path):
    return parse(SourceUnit.from_path(path))


def program(body: str, data: str = "", pid: str = "T"):
    """Wrap a PROCEDURE DIVISION body (and optional data entries) in a full program."""
    src = f"IDENTIFICATION DIVISION.\nPROGRAM-ID. {pid}.\n"
    if data:
        src += f"DATA DIVISION.\nWORKING-STORAGE SECTION.\n{data}\n"
    src += f"PROCEDURE DIVISION.\n{body}\n"
    return parse_text(src)


@pytest.fixture(scope="session")
def corpus():
    return [(p.name, load_corpus(p)) for p in corpus_paths()]


@pytest.fixture(scope="session")
def corpus_graphs():
    return json.loads((FIXTURES / "corpus_graphs.json").read_text())
