"""Printing of types and terms in the s-expression surface syntax.

Binder hints are reused when they cannot capture anything; otherwise primes
are appended (``x`` becomes ``x'``). The output parses back to an
alpha-equivalent term.
"""

from __future__ import annotations

from .terms import Abs, App, Bound, Const, Term, TyAbs, TyApp, Var, embedded_types, free_vars, spine
from .types import Arrow, BaseSort, Forall, Type, TyBound, TypeVar, base_sorts, free_type_vars

KEYWORDS = frozenset({"const", "lam", "tlam", "app", "tapp", "->", "pi", "node"})


def _fresh(hint: str, taken) -> str:
    name = hint or "x"
    while name in taken or name in KEYWORDS:
        name += "'"
    return name


def _type_names(ty: Type) -> set[str]:
    return free_type_vars(ty) | base_sorts(ty)


def format_type(ty: Type, scope: tuple[str, ...] = (), avoid: frozenset[str] | None = None) -> str:
    """``scope`` lists names of enclosing type binders, innermost last."""
    if avoid is None:
        avoid = frozenset(_type_names(ty))
    match ty:
        case BaseSort(name) | TypeVar(name):
            return name
        case TyBound(index, name):
            if index < len(scope):
                return scope[-1 - index]
            return f"?{name}@{index}"
        case Arrow(dom, cod):
            return f"(-> {format_type(dom, scope, avoid)} {format_type(cod, scope, avoid)})"
        case Forall(name, body):
            fresh = _fresh(name, avoid | set(scope))
            return f"(pi {fresh} {format_type(body, scope + (fresh,), avoid)})"
    return repr(ty)


class _TermPrinter:
    def __init__(self, term: Term):
        self.var_avoid = {v.name for v in free_vars(term)}
        names: set[str] = set()
        for ty in embedded_types(term):
            names |= _type_names(ty)
        self.type_avoid = frozenset(names)

    def ty(self, ty: Type, tscope) -> str:
        return format_type(ty, tscope, self.type_avoid)

    def term(self, t: Term, scope: tuple[str, ...], tscope: tuple[str, ...]) -> str:
        match t:
            case Var(name, _):
                return name
            case Bound(index, name):
                if index < len(scope):
                    return scope[-1 - index]
                return f"?{name}@{index}"
            case Const(name, _):
                return f"(const {name})"
            case Abs(name, ty, body):
                fresh = _fresh(name, self.var_avoid | set(scope))
                return f"(lam {fresh} {self.ty(ty, tscope)} {self.term(body, scope + (fresh,), tscope)})"
            case TyAbs(name, body):
                fresh = _fresh(name, self.type_avoid | set(tscope))
                return f"(tlam {fresh} {self.term(body, scope, tscope + (fresh,))})"
            case App() | TyApp():
                head, args = spine(t)
                parts = [self.term(head, scope, tscope)]
                for a in args:
                    if isinstance(a, Type):
                        parts.append("{" + self.ty(a, tscope) + "}")
                    else:
                        parts.append(self.term(a, scope, tscope))
                return "(" + " ".join(parts) + ")"
        return repr(t)


def format_term(term: Term) -> str:
    return _TermPrinter(term).term(term, (), ())
