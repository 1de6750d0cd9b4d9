"""Implement the name resolution mechanism used by the registries.

A registered builder or verification suite can be referred to by its
registered name, by the last component of a dotted name when this is
unambiguous, or by the dotted import path of a function that is not
registered yet.
"""

from __future__ import annotations

__all__ = ["find_matches", "full_object_name", "import_object", "resolve_name"]

import inspect
from typing import Any

from tornado.util import import_object as tornado_import_object


def full_object_name(obj: Any) -> str:
    r"""Compute the full name (module path + qualified name) of a class
    or a function.

    Args:
        obj: Specifies the class or function.

    Returns:
        The full name of the object.

    Raises:
        TypeError: if the object is not a class or a function.

    Example usage:

    ```pycon
    >>> from posetlab.utils.name_resolution import full_object_name
    >>> from posetlab.utils.bits import popcount
    >>> full_object_name(popcount)
    'posetlab.utils.bits.popcount'

    ```
    """
    if not (inspect.isclass(obj) or inspect.isfunction(obj)):
        msg = f"Incorrect object type: {obj}"
        raise TypeError(msg)
    name = obj.__qualname__
    if (module := obj.__module__) is not None and module != "__builtin__":
        name = module + "." + name
    return name


def import_object(object_path: str) -> Any:
    r"""Import an object given its dotted path.

    Args:
        object_path: Specifies the path ``module_path.object_name``.

    Returns:
        The object if the import was successful, otherwise ``None``.

    Example usage:

    ```pycon
    >>> from posetlab.utils.name_resolution import import_object
    >>> fn = import_object("posetlab.utils.bits.popcount")
    >>> fn(7)
    3
    >>> import_object("posetlab.missing.function") is None
    True

    ```
    """
    if not isinstance(object_path, str):
        msg = f"`object_path` has to be a string (received: {object_path})"
        raise TypeError(msg)
    try:
        return tornado_import_object(object_path)
    except (ValueError, ImportError, AttributeError):
        return None


def resolve_name(name: str, object_names: set[str], allow_import: bool = True) -> str | None:
    r"""Find a match of the query name in the set of registered names.

    The resolution is successful only if exactly one registered name
    matches, or if the query is the dotted path of an importable
    function or class.

    Args:
        name: Specifies the query name.
        object_names: Specifies the set of registered names.
        allow_import: If ``True``, a dotted path that is not
            registered may be resolved by importing it.

    Returns:
        The resolved name if the resolution was successful,
            otherwise ``None``.

    Example usage:

    ```pycon
    >>> from posetlab.utils.name_resolution import resolve_name
    >>> resolve_name("fan", {"fan", "harp"})
    'fan'
    >>> resolve_name("oracles", {"suites.oracles", "suites.core_values"})
    'suites.oracles'
    >>> resolve_name("unknown", {"fan"}) is None
    True

    ```
    """
    if name in object_names:
        return name

    if len(matches := find_matches(name, object_names)) == 1:
        return next(iter(matches))

    if allow_import and "." in name and (obj := import_object(name)) is not None:
        if inspect.isclass(obj) or inspect.isfunction(obj):
            return full_object_name(obj)
    return None


def find_matches(query: str, object_names: set[str]) -> set[str]:
    r"""Find the registered names whose last dotted component is the
    query.

    Args:
        query: Specifies the query. It must be a valid identifier.
        object_names: Specifies the registered names.

    Returns:
        The set of names that match the query.

    Example usage:

    ```pycon
    >>> from posetlab.utils.name_resolution import find_matches
    >>> find_matches("oracles", {"suites.oracles", "suites.core_values"})
    {'suites.oracles'}
    >>> find_matches("core-values", {"suites.core_values"})
    set()

    ```
    """
    if not query.isidentifier():
        return set()
    return {name for name in object_names if name.rsplit(sep=".", maxsplit=1)[-1] == query}
