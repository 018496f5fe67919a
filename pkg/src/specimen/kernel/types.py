"""Types of the second-order lambda calculus.

Bound type variables are de Bruijn indices (``TyBound``); free type variables
are named (``TypeVar``). Binder names survive only as printing hints and are
excluded from comparison, so ``==`` on types is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

PROP = "t"


class Type:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class BaseSort(Type):
    name: str


@dataclass(frozen=True, slots=True)
class TypeVar(Type):
    name: str


@dataclass(frozen=True, slots=True)
class TyBound(Type):
    index: int
    name: str = field(default="X", compare=False)


@dataclass(frozen=True, slots=True)
class Arrow(Type):
    domain: Type
    codomain: Type


@dataclass(frozen=True, slots=True)
class Forall(Type):
    name: str = field(compare=False)
    body: Type


T = BaseSort(PROP)


def arrows(*types: Type) -> Type:
    """Right-nested arrow: ``arrows(A, B, C) == A -> (B -> C)``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def _map_bound(ty: Type, fn: Callable[[int, TyBound], Type], c: int) -> Type:
    match ty:
        case TyBound():
            return fn(c, ty)
        case Arrow(dom, cod):
            d2 = _map_bound(dom, fn, c)
            c2 = _map_bound(cod, fn, c)
            if d2 is dom and c2 is cod:
                return ty
            return Arrow(d2, c2)
        case Forall(name, body):
            b2 = _map_bound(body, fn, c + 1)
            return ty if b2 is body else Forall(name, b2)
        case _:
            return ty


def type_shift(ty: Type, d: int, cutoff: int = 0) -> Type:
    if d == 0:
        return ty

    def shift(c, b):
        if b.index >= c:
            return TyBound(b.index + d, b.name)
        return b

    return _map_bound(ty, shift, cutoff)


def type_subst(ty: Type, j: int, repl: Type) -> Type:
    """Replace index ``j`` (relative to the top of ``ty``) by ``repl``."""

    def sub(c, b):
        if b.index == j + c:
            return type_shift(repl, c)
        return b

    return _map_bound(ty, sub, 0)


def instantiate(body: Type, arg: Type) -> Type:
    """Open the body of a ``Forall`` at ``arg``: ``(ΠX.body)[X:=arg]``."""
    return type_shift(type_subst(body, 0, type_shift(arg, 1)), -1)


def replace_free(ty: Type, mapping: Mapping[str, Type], depth: int = 0) -> Type:
    """Substitute free named type variables; ``depth`` counts enclosing binders."""
    match ty:
        case TypeVar(name) if name in mapping:
            return type_shift(mapping[name], depth)
        case Arrow(dom, cod):
            d2 = replace_free(dom, mapping, depth)
            c2 = replace_free(cod, mapping, depth)
            if d2 is dom and c2 is cod:
                return ty
            return Arrow(d2, c2)
        case Forall(name, body):
            b2 = replace_free(body, mapping, depth + 1)
            return ty if b2 is body else Forall(name, b2)
        case _:
            return ty


def abstract_type(ty: Type, name: str, level: int = 0) -> Type:
    """Turn free ``TypeVar(name)`` into the index bound ``level`` binders up.

    Dangling indices at or above ``level`` are shifted first so that closing is
    correct on open types as well.
    """
    ty = type_shift(ty, 1, level)

    def go(t, c):
        match t:
            case TypeVar(n) if n == name:
                return TyBound(level + c, name)
            case Arrow(dom, cod):
                return Arrow(go(dom, c), go(cod, c))
            case Forall(n, body):
                return Forall(n, go(body, c + 1))
            case _:
                return t

    return go(ty, 0)


def forall(name: str, body: Type) -> Forall:
    """Build ``ΠX.body`` from a body mentioning the free type variable ``name``."""
    return Forall(name, abstract_type(body, name))


def free_type_vars(ty: Type) -> set[str]:
    match ty:
        case TypeVar(name):
            return {name}
        case Arrow(dom, cod):
            return free_type_vars(dom) | free_type_vars(cod)
        case Forall(_, body):
            return free_type_vars(body)
        case _:
            return set()


def base_sorts(ty: Type) -> set[str]:
    match ty:
        case BaseSort(name):
            return {name}
        case Arrow(dom, cod):
            return base_sorts(dom) | base_sorts(cod)
        case Forall(_, body):
            return base_sorts(body)
        case _:
            return set()


def mentions_index(ty: Type, k: int) -> bool:
    match ty:
        case TyBound(index):
            return index == k
        case Arrow(dom, cod):
            return mentions_index(dom, k) or mentions_index(cod, k)
        case Forall(_, body):
            return mentions_index(body, k + 1)
        case _:
            return False


def max_free_index(ty: Type, c: int = 0) -> int:
    """Largest dangling index (relative to the top of ``ty``), or -1."""
    match ty:
        case TyBound(index):
            return index - c if index >= c else -1
        case Arrow(dom, cod):
            return max(max_free_index(dom, c), max_free_index(cod, c))
        case Forall(_, body):
            return max_free_index(body, c + 1)
        case _:
            return -1


def is_prop(ty: Type) -> bool:
    return ty == T
