from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from geolit.geotag import Gazetteer
from geolit.store import Store


@pytest.fixture(scope="session")
def gazetteer() -> Gazetteer:
    return Gazetteer.load()


@pytest.fixture()
def store(tmp_path) -> Store:
    s = Store.open(tmp_path / "data")
    yield s
    s.close()


def record_line(doc_id: str, abstract: str, title: str = "t", year: int | None = 2020) -> str:
    import json

    raw = {"id": doc_id, "title": title, "abstract": abstract}
    if year is not None:
        raw["year"] = year
    return json.dumps(raw)
