r"""Implement the result cache of the command-line interface.

The cache is a single JSON-lines file. Each line stores one result
under the key ``(expression, operation, arguments)`` together with the
version of the package that computed it. Lines written by another
version are ignored. The file is append-only and ``compact`` rewrites
it with the newest entry of each key.
"""

from __future__ import annotations

__all__ = ["CacheEntry", "ResultCache", "resolve_cache_dir"]

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from posetlab.constants import CACHE_DIR_ENV, CACHE_FILENAME, VERSION
from posetlab.errors import CacheError
from posetlab.utils.serialization import dump_json

logger = logging.getLogger(__name__)

CacheKey = tuple[str, str, tuple]


def _freeze(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(_freeze(item) for item in value)
    return value


@dataclass(frozen=True)
class CacheEntry:
    r"""Implement a cached result.

    Args:
        expr: Specifies the canonical text of the expression.
        operation: Specifies the operation name, for example ``"e"``.
        args: Specifies the numeric arguments of the operation.
        value: Specifies the serialized result.
        version: Specifies the package version that computed it.
        status: Specifies the certification status, if any.

    Example usage:

    ```pycon
    >>> from posetlab.cache import CacheEntry
    >>> entry = CacheEntry("butterfly", "e", (), {"value": 2})
    >>> entry.key
    ('butterfly', 'e', ())

    ```
    """

    expr: str
    operation: str
    args: tuple = ()
    value: dict[str, Any] = field(default_factory=dict)
    version: str = VERSION
    status: str | None = None

    @property
    def key(self) -> CacheKey:
        return self.expr, self.operation, tuple(self.args)

    def to_dict(self) -> dict[str, Any]:
        return {
            "expr": self.expr,
            "operation": self.operation,
            "args": list(self.args),
            "value": self.value,
            "version": self.version,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CacheEntry:
        return cls(
            expr=data["expr"],
            operation=data["operation"],
            args=_freeze(data.get("args", [])),
            value=data["value"],
            version=data["version"],
            status=data.get("status"),
        )


def resolve_cache_dir(cache_dir: Path | str | None = None) -> Path | None:
    r"""Return the cache directory given on the command line, else the
    one of the environment variable ``POSETLAB_CACHE_DIR``, else
    ``None``."""
    if cache_dir is not None:
        return Path(cache_dir)
    if value := os.environ.get(CACHE_DIR_ENV):
        return Path(value)
    return None


class ResultCache:
    r"""Implement the JSON-lines result cache.

    Args:
        directory: Specifies the cache directory. ``None`` turns the
            cache off: lookups miss and stores do nothing.

    Example usage:

    ```pycon
    >>> import tempfile
    >>> from posetlab.cache import CacheEntry, ResultCache
    >>> with tempfile.TemporaryDirectory() as tmp:
    ...     cache = ResultCache(tmp)
    ...     cache.put(CacheEntry("butterfly", "e", (), {"value": 2}))
    ...     cache.get("butterfly", "e", ()).value
    ...
    {'value': 2}

    ```
    """

    def __init__(self, directory: Path | str | None) -> None:
        self._directory = Path(directory) if directory is not None else None
        self._entries: dict[CacheKey, CacheEntry] | None = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"{self.__class__.__qualname__}(path={self.path})"

    @property
    def enabled(self) -> bool:
        return self._directory is not None

    @property
    def path(self) -> Path | None:
        if self._directory is None:
            return None
        return self._directory / CACHE_FILENAME

    def _read_lines(self) -> list[CacheEntry]:
        if self.path is None or not self.path.is_file():
            return []
        entries = []
        try:
            with self.path.open(encoding="utf-8") as file:
                for number, line in enumerate(file, start=1):
                    if not line.strip():
                        continue
                    try:
                        entries.append(CacheEntry.from_dict(json.loads(line)))
                    except (json.JSONDecodeError, KeyError, TypeError):
                        logger.warning(f"Skipping the malformed cache line {number} of {self.path}")
        except OSError as exc:
            msg = f"Cannot read the cache file {self.path}: {exc}"
            raise CacheError(msg) from exc
        return entries

    def _load(self) -> dict[CacheKey, CacheEntry]:
        if self._entries is None:
            self._entries = {}
            stale = 0
            for entry in self._read_lines():
                if entry.version != VERSION:
                    stale += 1
                    continue
                self._entries[entry.key] = entry
            if stale:
                logger.warning(
                    f"Ignoring {stale} cache entries written by another version of posetlab"
                )
        return self._entries

    def get(self, expr: str, operation: str, args: tuple = ()) -> CacheEntry | None:
        r"""Return the entry of a key, or ``None`` on a miss."""
        if not self.enabled:
            return None
        with self._lock:
            entry = self._load().get((expr, operation, tuple(args)))
        logger.debug(f"Cache {'hit' if entry else 'miss'} for {operation}{tuple(args)} of {expr}")
        return entry

    def put(self, entry: CacheEntry) -> None:
        r"""Append an entry to the cache file.

        Raises:
            CacheError: if the file cannot be written.
        """
        if not self.enabled:
            return
        with self._lock:
            try:
                self._directory.mkdir(parents=True, exist_ok=True)
                with self.path.open("a", encoding="utf-8") as file:
                    file.write(dump_json(entry.to_dict()) + "\n")
            except OSError as exc:
                msg = f"Cannot write the cache file {self.path}: {exc}"
                raise CacheError(msg) from exc
            self._load()[entry.key] = entry

    def compact(self) -> tuple[int, int]:
        r"""Rewrite the cache file with the newest entry of each key of
        the current version.

        Returns:
            The numbers of lines before and after.

        Raises:
            CacheError: if the file cannot be rewritten.
        """
        if not self.enabled:
            return 0, 0
        with self._lock:
            lines = self._read_lines()
            newest: dict[CacheKey, CacheEntry] = {}
            for entry in lines:
                if entry.version == VERSION:
                    newest[entry.key] = entry
            temporary = self.path.with_suffix(".tmp")
            try:
                self._directory.mkdir(parents=True, exist_ok=True)
                with temporary.open("w", encoding="utf-8") as file:
                    for entry in newest.values():
                        file.write(dump_json(entry.to_dict()) + "\n")
                temporary.replace(self.path)
            except OSError as exc:
                msg = f"Cannot rewrite the cache file {self.path}: {exc}"
                raise CacheError(msg) from exc
            self._entries = newest
        logger.info(f"Compacted {self.path}: {len(lines)} -> {len(newest)} entries")
        return len(lines), len(newest)
