r"""Contain some utility functions or helpers."""

from __future__ import annotations

__all__ = [
    "dump_json",
    "elements_from_mask",
    "format_mask",
    "format_rational",
    "full_mask",
    "full_object_name",
    "import_object",
    "iter_bits",
    "lowest_bits",
    "mask_from_elements",
    "parse_rational",
    "popcount",
    "resolve_name",
]

from posetlab.utils.bits import (
    elements_from_mask,
    format_mask,
    full_mask,
    iter_bits,
    lowest_bits,
    mask_from_elements,
    popcount,
)
from posetlab.utils.name_resolution import full_object_name, import_object, resolve_name
from posetlab.utils.serialization import dump_json, format_rational, parse_rational
