"""Parser for the s-expression surface syntax of types and terms.

Types::

    t | Sort | X | (-> A B ...) | (pi X T)

Terms::

    x | (const c) | (lam x A body) | (tlam X body)
    | (app f a ...) | (tapp f A) | (f a {A} b ...)

Names are resolved lexically: a type name is a bound type variable if an
enclosing ``pi``/``tlam`` binds it, otherwise a registered sort, otherwise a
free type variable (when allowed).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..sexpr import Atom, Braced, ParseError, SList, located, read_one
from .errors import UnboundVariable, UnknownConstant, UnknownSort
from .terms import Abs, App, Bound, Const, Term, TyAbs, TyApp, Var
from .types import PROP, Arrow, BaseSort, Forall, Type, TyBound, TypeVar
from .typing import Signature

TERM_KEYWORDS = {"const", "lam", "tlam", "app", "tapp"}


def _where(node) -> str:
    line = getattr(node, "line", None)
    return f"at {line}:{node.col}" if line is not None else ""


@dataclass
class _Binder:
    name: str
    annotation: object
    tdepth: int


def _free_type_atoms(node, bound=frozenset()) -> set[str]:
    if isinstance(node, list):
        if len(node) == 3 and node[0] == "pi" and isinstance(node[1], str):
            return _free_type_atoms(node[2], bound | {str(node[1])})
        out: set[str] = set()
        for child in node:
            out |= _free_type_atoms(child, bound)
        return out
    name = str(node)
    if name in ("->", "pi") or name in bound:
        return set()
    return {name}


class SurfaceParser:
    def __init__(self, signature: Signature | None = None, *, allow_free_type_vars: bool = True):
        self.signature = signature if signature is not None else Signature()
        self.allow_free = allow_free_type_vars

    # -- types --------------------------------------------------------------

    def type(self, node, tscope: tuple[str, ...] = ()) -> Type:
        if isinstance(node, Braced):
            raise located(node, "unexpected braces in a type")
        if isinstance(node, list):
            if not node:
                raise located(node, "empty type")
            head = node[0]
            if head == "->":
                if len(node) < 3:
                    raise located(node, "(-> ...) needs at least two types")
                parts = [self.type(n, tscope) for n in node[1:]]
                result = parts[-1]
                for p in reversed(parts[:-1]):
                    result = Arrow(p, result)
                return result
            if head == "pi":
                if len(node) != 3 or isinstance(node[1], list):
                    raise located(node, "expected (pi X T)")
                name = str(node[1])
                return Forall(name, self.type(node[2], tscope + (name,)))
            raise located(node, f"unknown type former {head!r}")
        name = str(node)
        for i, bound in enumerate(reversed(tscope)):
            if bound == name:
                return TyBound(i, name)
        if name == PROP or name in self.signature.base_sorts:
            return BaseSort(name)
        if self.allow_free:
            return TypeVar(name)
        raise UnknownSort(name, _where(node))

    # -- terms --------------------------------------------------------------

    def term(self, node, scope: tuple[_Binder, ...] = (), tscope: tuple[str, ...] = ()) -> Term:
        if isinstance(node, Braced):
            raise located(node, "type argument {...} outside an application")
        if not isinstance(node, list):
            return self._variable(node, scope, tscope)
        if not node:
            raise located(node, "empty application")
        head = node[0]
        kw = head if isinstance(head, str) and not isinstance(head, list) else None
        if kw == "const":
            if len(node) != 2 or isinstance(node[1], list):
                raise located(node, "expected (const name)")
            name = str(node[1])
            if name not in self.signature:
                raise UnknownConstant(name, _where(node[1]))
            return Const(name, self.signature[name])
        if kw == "lam":
            if len(node) != 4 or isinstance(node[1], list):
                raise located(node, "expected (lam x A body)")
            name = str(node[1])
            ty = self.type(node[2], tscope)
            body = self.term(node[3], scope + (_Binder(name, node[2], len(tscope)),), tscope)
            return Abs(name, ty, body)
        if kw == "tlam":
            if len(node) != 3 or isinstance(node[1], list):
                raise located(node, "expected (tlam X body)")
            name = str(node[1])
            return TyAbs(name, self.term(node[2], scope, tscope + (name,)))
        if kw == "tapp":
            if len(node) != 3:
                raise located(node, "expected (tapp f A)")
            return TyApp(self.term(node[1], scope, tscope), self.type(node[2], tscope))
        if kw == "app":
            if len(node) < 3:
                raise located(node, "expected (app f a ...)")
            items = node[1:]
        else:
            items = node
        if len(items) < 2:
            raise located(node, "application needs a function and an argument")
        result = self.term(items[0], scope, tscope)
        for item in items[1:]:
            if isinstance(item, Braced):
                if len(item) != 1:
                    raise located(item, "expected exactly one type inside {...}")
                result = TyApp(result, self.type(item[0], tscope))
            else:
                result = App(result, self.term(item, scope, tscope))
        return result

    def _variable(self, node, scope, tscope) -> Term:
        name = str(node)
        for i, binder in enumerate(reversed(scope)):
            if binder.name != name:
                continue
            # A type binder introduced between the variable's binder and this
            # occurrence captures the names in its annotation: under the named
            # reading this is a different (free) variable, which the type
            # checker then rejects as a generalisation violation.
            inner = set(tscope[binder.tdepth:])
            if inner & _free_type_atoms(binder.annotation):
                return Var(name, self.type(binder.annotation, tscope))
            return Bound(i, name)
        raise UnboundVariable(name, _where(node))


def parse_type(text_or_node, signature: Signature | None = None, *, allow_free: bool = True) -> Type:
    node = read_one(text_or_node) if isinstance(text_or_node, str) and not isinstance(text_or_node, Atom) else text_or_node
    return SurfaceParser(signature, allow_free_type_vars=allow_free).type(node)


def parse_term(text_or_node, signature: Signature | None = None, *, allow_free: bool = True) -> Term:
    node = read_one(text_or_node) if isinstance(text_or_node, str) and not isinstance(text_or_node, Atom) else text_or_node
    return SurfaceParser(signature, allow_free_type_vars=allow_free).term(node)


__all__ = ["SurfaceParser", "parse_type", "parse_term", "ParseError", "SList"]
