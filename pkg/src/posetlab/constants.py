r"""Define some constants used in the package.

These constants can be used outside the package to be robust to
naming change.

Example usage:

```pycon
>>> from posetlab.constants import MAX_POSET_SIZE, MAX_CHAIN_ENUMERATION
>>> MAX_POSET_SIZE
64
>>> MAX_CHAIN_ENUMERATION
8

```
"""

from __future__ import annotations

__all__ = [
    "CACHE_DIR_ENV",
    "CACHE_FILENAME",
    "DEFAULT_MAX_NODES",
    "DEFAULT_MAX_SECONDS",
    "MAX_CHAIN_ENUMERATION",
    "MAX_FAMILY_GROUND_SET",
    "MAX_POSET_SIZE",
    "VERSION",
]

VERSION = "0.1.0a0"

# One machine word per relation row.
MAX_POSET_SIZE = 64

# n! full chains are enumerated explicitly up to this ground-set size.
MAX_CHAIN_ENUMERATION = 8
MAX_FAMILY_GROUND_SET = 60

DEFAULT_MAX_NODES = 10**8
DEFAULT_MAX_SECONDS = 300.0

CACHE_DIR_ENV = "POSETLAB_CACHE_DIR"
CACHE_FILENAME = "results.jsonl"
