from pathlib import Path

import pytest

from genli.zeros import ingest

ROOT = Path(__file__).resolve().parents[1]
ZERO_TABLE = ROOT / "data" / "zeros_100k.txt"
LITTLEWOOD_SUITE = ROOT / "data" / "littlewood_suite.json"


@pytest.fixture(scope="session")
def catalog():
    return ingest(ZERO_TABLE)


@pytest.fixture(scope="session")
def catalog_1e4(catalog):
    return catalog.truncated(1e4)


@pytest.fixture
def write_table(tmp_path):
    def _write(lines, name="table.txt"):
        p = tmp_path / name
        p.write_text("".join(f"{ln}\n" for ln in lines))
        return p

    return _write
