"""Beta and type-beta reduction, leftmost-outermost."""

from __future__ import annotations

from typing import Iterator

from .errors import FuelExhausted
from .terms import Abs, App, Term, TyAbs, TyApp, beta, type_beta
from .typing import Signature, type_of

DEFAULT_FUEL = 100_000


class _NormalForm:
    __slots__ = ()

    def __repr__(self):
        return "NormalForm"

    def __bool__(self):
        return False


NormalForm = _NormalForm()


def is_redex(t: Term) -> bool:
    match t:
        case App(Abs(), _) | TyApp(TyAbs(), _):
            return True
    return False


def contract(t: Term) -> Term:
    """Contract the redex at the root of ``t``."""
    match t:
        case App(Abs(_, _, body), arg):
            return beta(body, arg)
        case TyApp(TyAbs(_, body), ty):
            return type_beta(body, ty)
    raise ValueError("not a redex")


def _step(t: Term) -> Term | None:
    match t:
        case App(Abs(_, _, body), arg):
            return beta(body, arg)
        case TyApp(TyAbs(_, body), ty):
            return type_beta(body, ty)
        case App(f, a):
            f2 = _step(f)
            if f2 is not None:
                return App(f2, a)
            a2 = _step(a)
            return None if a2 is None else App(f, a2)
        case Abs(name, ty, body):
            b2 = _step(body)
            return None if b2 is None else Abs(name, ty, b2)
        case TyApp(u, ty):
            u2 = _step(u)
            return None if u2 is None else TyApp(u2, ty)
        case TyAbs(name, body):
            b2 = _step(body)
            return None if b2 is None else TyAbs(name, b2)
    return None


def reduce_step(term: Term, signature: Signature | None = None, *, check: bool = True):
    """Contract the leftmost-outermost redex, or return ``NormalForm``.

    The term is type-checked first (``IllTyped`` is raised before anything is
    reduced); pass ``check=False`` to skip that when the caller already knows
    the term is well typed.
    """
    if check:
        type_of(term, signature)
    nxt = _step(term)
    return NormalForm if nxt is None else nxt


def reductions(term: Term) -> Iterator[Term]:
    """Successive reducts of ``term`` (not including ``term`` itself)."""
    while True:
        term = _step(term)
        if term is None:
            return
        yield term


def normalize_counted(
    term: Term,
    fuel: int = DEFAULT_FUEL,
    signature: Signature | None = None,
    *,
    check: bool = True,
) -> tuple[Term, int]:
    """Normal form of ``term`` and the number of steps taken to reach it."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    if check:
        type_of(term, signature)
    steps = 0
    while True:
        nxt = _step(term)
        if nxt is None:
            return term, steps
        if steps == fuel:
            raise FuelExhausted(steps)
        term = nxt
        steps += 1


def normalize(
    term: Term,
    fuel: int = DEFAULT_FUEL,
    signature: Signature | None = None,
    *,
    check: bool = True,
) -> Term:
    return normalize_counted(term, fuel, signature, check=check)[0]


def is_normal(t: Term) -> bool:
    return _step(t) is None
