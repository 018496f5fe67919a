"""A small s-expression reader with source positions.

``(`` ``)`` delimit lists, ``{`` ``}`` delimit braced lists (type arguments in
the term syntax), ``;`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re


class ParseError(Exception):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


class Atom(str):
    line: int | None = None
    col: int | None = None


class SList(list):
    line: int | None = None
    col: int | None = None


class Braced(SList):
    pass


_TOKEN = re.compile(r"(?P<ws>\s+)|(?P<comment>;[^\n]*)|(?P<open>[({])|(?P<close>[)}])|(?P<atom>[^\s(){};]+)")


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def located(node, message: str) -> ParseError:
    return ParseError(message, getattr(node, "line", None), getattr(node, "col", None))


def read_all(text: str) -> list:
    """Read every top-level form in ``text``."""
    stack: list[SList] = []
    top: list = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", *_position(text, pos))
        kind = m.lastgroup
        if kind == "open":
            node = Braced() if m.group() == "{" else SList()
            node.line, node.col = _position(text, pos)
            stack.append(node)
        elif kind == "close":
            if not stack:
                raise ParseError(f"unmatched {m.group()!r}", *_position(text, pos))
            node = stack.pop()
            if isinstance(node, Braced) != (m.group() == "}"):
                raise ParseError(f"mismatched {m.group()!r}", *_position(text, pos))
            (stack[-1] if stack else top).append(node)
        elif kind == "atom":
            atom = Atom(m.group())
            atom.line, atom.col = _position(text, pos)
            (stack[-1] if stack else top).append(atom)
        pos = m.end()
    if stack:
        raise located(stack[-1], "unclosed parenthesis")
    return top


def read_one(text: str):
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, found {len(forms)}")
    return forms[0]


def dump(node) -> str:
    if isinstance(node, Braced):
        return "{" + " ".join(dump(n) for n in node) + "}"
    if isinstance(node, list):
        return "(" + " ".join(dump(n) for n in node) + ")"
    return str(node)
