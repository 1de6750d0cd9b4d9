from __future__ import annotations

import json
import logging
from pathlib import Path

import pytest

from posetlab.cache import CacheEntry, ResultCache, resolve_cache_dir
from posetlab.constants import CACHE_DIR_ENV, CACHE_FILENAME, VERSION

################################
#     Tests for CacheEntry     #
################################


def test_cache_entry_key() -> None:
    assert CacheEntry("fan(3,2)", "la", (4,), {"value": 8}).key == ("fan(3,2)", "la", (4,))


def test_cache_entry_to_dict() -> None:
    assert CacheEntry("butterfly", "e", (), {"value": 2}, status="exact").to_dict() == {
        "expr": "butterfly",
        "operation": "e",
        "args": [],
        "value": {"value": 2},
        "version": VERSION,
        "status": "exact",
    }


def test_cache_entry_from_dict_freezes_args() -> None:
    entry = CacheEntry.from_dict(
        {
            "expr": "chain(3)",
            "operation": "scan_lower",
            "args": [[1, 2], 3],
            "value": {},
            "version": VERSION,
        }
    )
    assert entry.args == ((1, 2), 3)
    assert entry.status is None


#######################################
#     Tests for resolve_cache_dir     #
#######################################


def test_resolve_cache_dir_argument(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(CACHE_DIR_ENV, "/elsewhere")
    assert resolve_cache_dir(tmp_path) == tmp_path


def test_resolve_cache_dir_environment(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path))
    assert resolve_cache_dir() == tmp_path


def test_resolve_cache_dir_none(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(CACHE_DIR_ENV, raising=False)
    assert resolve_cache_dir() is None


#################################
#     Tests for ResultCache     #
#################################


def test_result_cache_disabled() -> None:
    cache = ResultCache(None)
    assert not cache.enabled
    assert cache.path is None
    cache.put(CacheEntry("butterfly", "e", (), {"value": 2}))
    assert cache.get("butterfly", "e") is None
    assert cache.compact() == (0, 0)


def test_result_cache_put_get(tmp_path: Path) -> None:
    cache = ResultCache(tmp_path / "cache")
    assert cache.get("butterfly", "e") is None
    cache.put(CacheEntry("butterfly", "e", (), {"value": 2}))
    assert cache.get("butterfly", "e").value == {"value": 2}
    assert cache.path == tmp_path / "cache" / CACHE_FILENAME
    assert cache.path.is_file()


def test_result_cache_persists(tmp_path: Path) -> None:
    ResultCache(tmp_path).put(CacheEntry("chain(3)", "la", (4,), {"value": 10}))
    entry = ResultCache(tmp_path).get("chain(3)", "la", (4,))
    assert entry is not None
    assert entry.value == {"value": 10}


def test_result_cache_newest_entry_wins(tmp_path: Path) -> None:
    ResultCache(tmp_path).put(CacheEntry("point", "e", (), {"value": 0}))
    ResultCache(tmp_path).put(CacheEntry("point", "e", (), {"value": 1}))
    assert ResultCache(tmp_path).get("point", "e").value == {"value": 1}


def test_result_cache_malformed_line(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    cache = ResultCache(tmp_path)
    cache.put(CacheEntry("butterfly", "e", (), {"value": 2}))
    with cache.path.open("a", encoding="utf-8") as file:
        file.write("{not json\n")
    with caplog.at_level(logging.WARNING):
        entry = ResultCache(tmp_path).get("butterfly", "e")
    assert entry.value == {"value": 2}
    assert "Skipping the malformed cache line 2" in caplog.text


def test_result_cache_ignores_other_version(
    tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    stale = CacheEntry("butterfly", "e", (), {"value": 99}, version="0.0.0")
    (tmp_path / CACHE_FILENAME).write_text(json.dumps(stale.to_dict()) + "\n", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        assert ResultCache(tmp_path).get("butterfly", "e") is None
    assert "Ignoring 1 cache entries written by another version" in caplog.text


def test_result_cache_compact(tmp_path: Path) -> None:
    cache = ResultCache(tmp_path)
    cache.put(CacheEntry("point", "e", (), {"value": 0}))
    cache.put(CacheEntry("point", "e", (), {"value": 1}))
    cache.put(CacheEntry("chain(2)", "e", (), {"value": 1}))
    with cache.path.open("a", encoding="utf-8") as file:
        file.write(json.dumps(CacheEntry("vee(2)", "e", (), {}, version="0.0.0").to_dict()) + "\n")
    assert cache.compact() == (4, 2)
    assert len(cache.path.read_text(encoding="utf-8").splitlines()) == 2
    assert ResultCache(tmp_path).get("point", "e").value == {"value": 1}


def test_result_cache_repr(tmp_path: Path) -> None:
    assert repr(ResultCache(tmp_path)).startswith("ResultCache(path=")
