"""Terms of the second-order lambda calculus, in locally nameless form.

Free term variables are named and carry their type (``Var``); variables bound
by ``Abs`` are de Bruijn indices (``Bound``). Types embedded in a term may
refer to enclosing ``TyAbs`` binders through ``TyBound`` indices. Binder names
are hints only, so ``==`` is alpha-equivalence over both kinds of binder.

Two free variables with the same name but different types are different
variables, as in a Church-style presentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from .types import (
    Type,
    abstract_type,
    replace_free,
    type_shift,
    type_subst,
)


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    type: Type


@dataclass(frozen=True, slots=True)
class Bound(Term):
    index: int
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class Const(Term):
    name: str
    type: Type


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Abs(Term):
    name: str = field(compare=False)
    type: Type
    body: Term


@dataclass(frozen=True, slots=True)
class TyApp(Term):
    term: Term
    type_arg: Type


@dataclass(frozen=True, slots=True)
class TyAbs(Term):
    name: str = field(compare=False)
    body: Term


def apply(fun: Term, *args: Term | Type) -> Term:
    """Left-nested application; ``Type`` arguments become specialisations."""
    for a in args:
        fun = TyApp(fun, a) if isinstance(a, Type) else App(fun, a)
    return fun


def spine(term: Term) -> tuple[Term, list[Term | Type]]:
    """Split ``h a1 {A2} a3`` into its head and argument list."""
    args: list[Term | Type] = []
    while True:
        match term:
            case App(f, a):
                args.append(a)
                term = f
            case TyApp(f, ty):
                args.append(ty)
                term = f
            case _:
                args.reverse()
                return term, args


# -- generic traversal ------------------------------------------------------

def _map(
    t: Term,
    on_bound: Callable[[int, int, Bound], Term],
    on_type: Callable[[int, Type], Type] | None,
    c: int,
    tc: int,
    on_var: Callable[[int, int, Var], Term] | None = None,
) -> Term:
    """Rebuild ``t``; ``c``/``tc`` count enclosing term/type binders."""
    match t:
        case Bound():
            return on_bound(c, tc, t)
        case Var(name, ty):
            if on_var is not None:
                return on_var(c, tc, t)
            if on_type is None:
                return t
            ty2 = on_type(tc, ty)
            return t if ty2 is ty else Var(name, ty2)
        case App(f, a):
            f2 = _map(f, on_bound, on_type, c, tc, on_var)
            a2 = _map(a, on_bound, on_type, c, tc, on_var)
            if f2 is f and a2 is a:
                return t
            return App(f2, a2)
        case Abs(name, ty, body):
            ty2 = ty if on_type is None else on_type(tc, ty)
            b2 = _map(body, on_bound, on_type, c + 1, tc, on_var)
            if ty2 is ty and b2 is body:
                return t
            return Abs(name, ty2, b2)
        case TyApp(u, ty):
            u2 = _map(u, on_bound, on_type, c, tc, on_var)
            ty2 = ty if on_type is None else on_type(tc, ty)
            if u2 is u and ty2 is ty:
                return t
            return TyApp(u2, ty2)
        case TyAbs(name, body):
            b2 = _map(body, on_bound, on_type, c, tc + 1, on_var)
            return t if b2 is body else TyAbs(name, b2)
        case _:
            # constants have closed types
            return t


def _keep(c, tc, b):
    return b


def term_shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Shift dangling term indices by ``d``."""
    if d == 0:
        return t

    def shift(c, tc, b):
        if b.index >= c:
            return Bound(b.index + d, b.name)
        return b

    return _map(t, shift, None, cutoff, 0)


def term_type_shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Shift dangling type indices in every type embedded in ``t``."""
    if d == 0:
        return t
    return _map(t, _keep, lambda tc, ty: type_shift(ty, d, cutoff + tc), 0, 0)


def term_subst(t: Term, j: int, repl: Term) -> Term:
    """Replace term index ``j`` by ``repl``, shifting ``repl`` under binders."""

    def sub(c, tc, b):
        if b.index == j + c:
            return term_shift(term_type_shift(repl, tc), c)
        return b

    return _map(t, sub, None, 0, 0)


def term_type_subst(t: Term, j: int, repl: Type) -> Term:
    """Replace type index ``j`` by ``repl`` in every embedded type."""
    return _map(t, _keep, lambda tc, ty: type_subst(ty, j + tc, type_shift(repl, tc)), 0, 0)


def beta(abs_body: Term, arg: Term) -> Term:
    """Body of an abstraction with its bound variable replaced by ``arg``."""
    return term_shift(term_subst(abs_body, 0, term_shift(arg, 1)), -1)


def type_beta(tabs_body: Term, arg: Type) -> Term:
    """Body of a type abstraction with its type variable replaced by ``arg``."""
    return term_type_shift(term_type_subst(tabs_body, 0, type_shift(arg, 1)), -1)


# -- named construction -----------------------------------------------------

def lam(name: str, ty: Type, body: Term) -> Abs:
    """``λname:ty. body`` binding the free variable ``Var(name, ty)``."""
    body = term_shift(body, 1)

    def close(c, tc, v):
        if v.name == name and v.type == type_shift(ty, tc):
            return Bound(c, name)
        return v

    return Abs(name, ty, _map(body, _keep, None, 0, 0, on_var=close))


def tlam(name: str, body: Term) -> TyAbs:
    """``ΛX. body`` binding the free type variable ``TypeVar(name)``.

    The result is not checked here: if a free term variable of ``body`` has a
    type mentioning ``name``, ``type_of`` rejects the abstraction.
    """
    return TyAbs(name, _map(body, _keep, lambda tc, ty: abstract_type(ty, name, tc), 0, 0))


# -- substitution on named variables ----------------------------------------

def subst_term(body: Term, var: str | Var, replacement: Term, signature=None) -> Term:
    """Capture-avoiding ``body[var := replacement]`` for a free variable.

    ``var`` is either a ``Var`` (name and type) or a bare name, in which case
    every free variable of that name is replaced. Each replaced occurrence must
    have the type of ``replacement``; otherwise ``TypeMismatch`` is raised.
    """
    from .errors import TypeMismatch
    from .typing import type_of

    env = {v.name: v.type for v in free_vars(replacement)}
    rty = type_of(replacement, signature, env)
    if isinstance(var, Var):
        if var.type != rty:
            raise TypeMismatch(var.type, rty, what=f"replacement for {var.name}")
        name, want = var.name, var.type
    else:
        name, want = var, None

    def repl(c, tc, v):
        if v.name != name:
            return v
        if want is not None and v.type != type_shift(want, tc):
            return v
        if v.type != type_shift(rty, tc):
            raise TypeMismatch(v.type, rty, what=f"replacement for {name}")
        return term_shift(term_type_shift(replacement, tc), c)

    return _map(body, _keep, None, 0, 0, on_var=repl)


def subst_type(target, tyvar: str, replacement: Type):
    """``target[tyvar := replacement]`` on a type or on the types inside a term."""
    return subst_types(target, {tyvar: replacement})


def subst_types(target, mapping: Mapping[str, Type]):
    if not mapping:
        return target
    if isinstance(target, Type):
        return replace_free(target, mapping)
    return _map(target, _keep, lambda tc, ty: replace_free(ty, mapping, tc), 0, 0)


def alpha_eq(a, b) -> bool:
    """Equality up to renaming of bound term and type variables."""
    return a == b


# -- inspection -------------------------------------------------------------

def subterms(t: Term) -> Iterator[Term]:
    yield t
    match t:
        case App(f, a):
            yield from subterms(f)
            yield from subterms(a)
        case Abs(_, _, body) | TyAbs(_, body):
            yield from subterms(body)
        case TyApp(u, _):
            yield from subterms(u)


def embedded_types(t: Term) -> Iterator[Type]:
    for s in subterms(t):
        match s:
            case Var(_, ty) | Const(_, ty) | Abs(_, ty, _) | TyApp(_, ty):
                yield ty


def free_vars(t: Term) -> set[Var]:
    return {s for s in subterms(t) if isinstance(s, Var)}


def dangling(t: Term, c: int = 0) -> bool:
    """True when ``t`` has a term index pointing outside itself."""
    match t:
        case Bound(index):
            return index >= c
        case App(f, a):
            return dangling(f, c) or dangling(a, c)
        case Abs(_, _, body):
            return dangling(body, c + 1)
        case TyAbs(_, body):
            return dangling(body, c)
        case TyApp(u, _):
            return dangling(u, c)
        case _:
            return False


def is_closed(t: Term) -> bool:
    return not dangling(t) and not free_vars(t)


def free_type_vars_term(t: Term) -> set[str]:
    from .types import free_type_vars

    out: set[str] = set()
    for ty in embedded_types(t):
        out |= free_type_vars(ty)
    return out


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def depth(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + max(depth(f), depth(a))
        case Abs(_, _, body) | TyAbs(_, body):
            return 1 + depth(body)
        case TyApp(u, _):
            return 1 + depth(u)
        case _:
            return 1

