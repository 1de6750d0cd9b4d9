r"""Implement the registry of named callables.

The registry is used to publish the named poset builders used by the
construction language and the verification suites used by the
command line. A registered callable can be retrieved by its name, by
the last component of a dotted name, or by the dotted import path of
a function that is not registered yet.
"""

from __future__ import annotations

__all__ = ["Registry"]

import inspect
import logging
from typing import TYPE_CHECKING, Any, TypeVar

from posetlab.errors import IncorrectObjectRegistryError, UnregisteredNameError
from posetlab.utils.name_resolution import full_object_name, import_object, resolve_name

if TYPE_CHECKING:
    from collections.abc import Callable

logger = logging.getLogger(__name__)

T = TypeVar("T")


class Registry:
    r"""Implement a registry of named functions.

    Args:
        kind: Specifies a short description of what the registry holds.
            It is only used in the error messages.

    Example usage:

    ```pycon
    >>> from posetlab.registry import Registry
    >>> registry = Registry("builder")
    >>> @registry.register("double")
    ... def double(value: int) -> int:
    ...     return 2 * value
    ...
    >>> registry.factory("double", 21)
    42

    ```
    """

    def __init__(self, kind: str = "object") -> None:
        self._kind = kind
        self._state: dict[str, Callable] = {}

    def __contains__(self, name: str) -> bool:
        return self._resolve_name(name) is not None

    def __len__(self) -> int:
        r"""Return the number of registered functions.

        Returns:
            The number of registered functions.
        """
        return len(self._state)

    def __repr__(self) -> str:
        return f"{self.__class__.__qualname__}(kind={self._kind!r}, names={sorted(self._state)})"

    def clear(self) -> None:
        r"""Remove all the registered functions."""
        self._state.clear()

    def factory(self, name: str, *args: Any, **kwargs: Any) -> Any:
        r"""Call the function registered under a name.

        Args:
            name: Specifies the name of the function.
            *args: Variable length argument list.
            **kwargs: Arbitrary keyword arguments.

        Returns:
            The value returned by the function.

        Raises:
            UnregisteredNameError: if the name cannot be resolved.
        """
        return self.get(name)(*args, **kwargs)

    def get(self, name: str) -> Callable:
        r"""Get the function registered under a name.

        A dotted path of an importable function is registered on the
        fly.

        Args:
            name: Specifies the name of the function.

        Returns:
            The function.

        Raises:
            UnregisteredNameError: if the name cannot be resolved.

        Example usage:

        ```pycon
        >>> from posetlab.registry import Registry
        >>> registry = Registry("helper")
        >>> fn = registry.get("posetlab.utils.bits.popcount")
        >>> fn(6)
        2
        >>> registry.registered_names()
        {'posetlab.utils.bits.popcount'}

        ```
        """
        resolved_name = self._resolve_name(name)
        if resolved_name is None:
            msg = (
                f"Unknown {self._kind} `{name}`. "
                f"Registered {self._kind}s are {sorted(self._state)}."
            )
            raise UnregisteredNameError(msg)
        if resolved_name not in self._state:
            self.register_object(import_object(resolved_name))
        return self._state[resolved_name]

    def register(self, name: str | None = None) -> Callable[[T], T]:
        r"""Define a decorator to add a function to the registry.

        Args:
            name: Specifies the name to use to register the function.
                If ``None``, the full name of the function is used.

        Returns:
            The decorator.
        """

        def function_wrapper(obj: T) -> T:
            self.register_object(obj=obj, name=name)
            return obj

        return function_wrapper

    def register_object(self, obj: Callable, name: str | None = None) -> None:
        r"""Register a function.

        Args:
            obj: Specifies the function to register.
            name: Specifies the name to use to register the function.
                If ``None``, the full name of the function is used.

        Raises:
            IncorrectObjectRegistryError: if the object is not a
                regular function or class.
            TypeError: if the name is not a string.
        """
        if not (inspect.isfunction(obj) or inspect.isclass(obj)):
            msg = f"Only functions and classes can be registered (received: {obj})"
            raise IncorrectObjectRegistryError(msg)
        if obj.__name__ == "<lambda>":
            msg = (
                "It is not possible to register a lambda function. "
                "Please use a regular function instead"
            )
            raise IncorrectObjectRegistryError(msg)
        if name is None:
            name = full_object_name(obj)
        elif not isinstance(name, str):
            msg = f"The name has to be a string (received: {name})"
            raise TypeError(msg)
        if name in self._state and self._state[name] is not obj:
            logger.warning(
                f"The {self._kind} `{name}` already exists and will be replaced by {obj}"
            )
        self._state[name] = obj

    def registered_names(self) -> set[str]:
        r"""Get the names of all the registered functions.

        Returns:
            The set of registered names.
        """
        return set(self._state)

    def unregister(self, name: str) -> None:
        r"""Remove a registered function.

        Args:
            name: Specifies the name of the function to remove.

        Raises:
            UnregisteredNameError: if the name is not registered.
        """
        resolved_name = resolve_name(name, self.registered_names(), allow_import=False)
        if resolved_name is None:
            msg = f"It is not possible to remove a {self._kind} which is not registered: {name}"
            raise UnregisteredNameError(msg)
        self._state.pop(resolved_name)

    def _resolve_name(self, name: str) -> str | None:
        return resolve_name(name, self.registered_names())
