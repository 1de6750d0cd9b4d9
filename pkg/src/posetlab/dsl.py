r"""Implement the parser of the poset-construction language.

The grammar is

```
expr     := atom | op "(" operand ("," operand)* ")"
operand  := expr ["@" "[" int "," int "]"]        (osum_i only)
op       := "dual" | "osum" | "osum_i" | "wedge"
atom     := "butterfly" | "point" | name "(" int ("," int)* ")"
name     := "chain" | "antichain" | "v" | "fan" | "harp"
          | "harp_distinct" | "diamond" | "boolean"
```

Whitespace is ignored between tokens. ``format_expr`` prints the
canonical text, so ``parse(format_expr(expr)) == expr``.
"""

from __future__ import annotations

__all__ = ["Token", "parse", "tokenize"]

import re
from typing import NamedTuple

from posetlab.builders import validate_atom
from posetlab.errors import DSLSyntaxError, ExpressionArgumentError, InvalidPosetArgumentError
from posetlab.expr import (
    ATOM_NAMES,
    NULLARY_ATOMS,
    OPERATION_NAMES,
    Atom,
    Operation,
    PosetExpr,
)

_TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<punct>[(),@\[\]]))"
)
_NAMES = ATOM_NAMES | OPERATION_NAMES


class Token(NamedTuple):
    r"""Implement a lexical token.

    ``kind`` is ``"name"``, ``"int"``, a punctuation character or
    ``"end"``. ``offset`` is the byte offset of the token.
    """

    kind: str
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    r"""Split a text into tokens.

    Args:
        text: Specifies the text.

    Returns:
        The tokens, ending with an ``"end"`` token.

    Raises:
        DSLSyntaxError: if the text contains an unexpected character.

    Example usage:

    ```pycon
    >>> from posetlab.dsl import tokenize
    >>> [token.kind for token in tokenize("fan(3, 2)")]
    ['name', '(', 'int', ',', 'int', ')', 'end']

    ```
    """
    tokens = []
    index = 0
    while True:
        match = _TOKEN_PATTERN.match(text, index)
        if match is None:
            rest = text[index:]
            stripped = rest.lstrip()
            if not stripped:
                tokens.append(Token("end", "", _byte_offset(text, len(text))))
                return tokens
            position = index + len(rest) - len(stripped)
            msg = f"Unexpected character {stripped[0]!r}"
            raise DSLSyntaxError(msg, offset=_byte_offset(text, position))
        kind = match.lastgroup
        value = match.group(kind)
        tokens.append(
            Token(kind if kind != "punct" else value, value, _byte_offset(text, match.start(kind)))
        )
        index = match.end()


class _Parser:
    def __init__(self, text: str) -> None:
        self._tokens = tokenize(text)
        self._index = 0

    def _peek(self) -> Token:
        return self._tokens[self._index]

    def _expect(self, *kinds: str) -> Token:
        token = self._peek()
        if token.kind not in kinds:
            found = "end of input" if token.kind == "end" else repr(token.text)
            msg = f"Unexpected {found}"
            raise DSLSyntaxError(msg, offset=token.offset, expected=frozenset(kinds))
        self._index += 1
        return token

    def parse(self) -> PosetExpr:
        expr = self._expr()
        self._expect("end")
        return expr

    def _expr(self) -> PosetExpr:
        token = self._peek()
        if token.kind != "name" or token.text not in _NAMES:
            found = "end of input" if token.kind == "end" else repr(token.text)
            msg = f"Unexpected {found}"
            raise DSLSyntaxError(msg, offset=token.offset, expected=frozenset(_NAMES))
        self._index += 1
        if token.text in OPERATION_NAMES:
            return self._operation(token)
        return self._atom(token)

    def _atom(self, name: Token) -> Atom:
        args: list[int] = []
        if name.text not in NULLARY_ATOMS:
            self._expect("(")
            args.append(int(self._expect("int").text))
            while self._expect(",", ")").kind == ",":
                args.append(int(self._expect("int").text))
        try:
            validate_atom(name.text, args)
        except InvalidPosetArgumentError as exc:
            msg = f"{exc} at offset {name.offset}"
            raise ExpressionArgumentError(msg) from exc
        return Atom(name.text, tuple(args))

    def _operation(self, name: Token) -> Operation:
        self._expect("(")
        operands = []
        endpoints: list[tuple[int, int] | None] = []
        while True:
            operands.append(self._expr())
            endpoints.append(self._endpoints(name))
            if self._expect(",", ")").kind == ")":
                break
        if name.text == "dual" and len(operands) != 1:
            msg = (
                f"`dual` takes exactly one operand (received: {len(operands)}) "
                f"at offset {name.offset}"
            )
            raise ExpressionArgumentError(msg)
        if all(endpoint is None for endpoint in endpoints):
            endpoints = []
        return Operation(name.text, tuple(operands), tuple(endpoints))

    def _endpoints(self, name: Token) -> tuple[int, int] | None:
        if self._peek().kind != "@":
            return None
        token = self._expect("@")
        if name.text != "osum_i":
            msg = "Interval endpoints are only allowed on `osum_i` operands"
            raise DSLSyntaxError(msg, offset=token.offset, expected=frozenset({",", ")"}))
        self._expect("[")
        a = int(self._expect("int").text)
        self._expect(",")
        b = int(self._expect("int").text)
        self._expect("]")
        return a, b


def parse(text: str) -> PosetExpr:
    r"""Parse a poset-construction expression.

    Args:
        text: Specifies the expression text.

    Returns:
        The expression.

    Raises:
        DSLSyntaxError: if the text does not follow the grammar. The
            error carries the byte offset and the expected tokens.
        ExpressionArgumentError: if an atom argument is out of range
            or an operator has a wrong arity.

    Example usage:

    ```pycon
    >>> from posetlab.dsl import parse
    >>> parse("fan(3, 2)")
    Atom(name='fan', args=(3, 2))
    >>> parse("dual(v(2))")
    Operation(name='dual', operands=(Atom(name='v', args=(2,)),), endpoints=())

    ```
    """
    return _Parser(text).parse()
