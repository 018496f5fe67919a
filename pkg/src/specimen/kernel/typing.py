"""Signatures and the type checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import (
    ApplicationMismatch,
    GeneralisationViolation,
    IllFormedType,
    IllTyped,
    NotAFunction,
    SpecialisationOfNonPi,
    TypeMismatch,
    UnboundVariable,
    UnknownConstant,
    UnknownSort,
)
from .terms import Abs, App, Bound, Const, Term, TyAbs, TyApp, Var
from .types import (
    PROP,
    Arrow,
    BaseSort,
    Forall,
    Type,
    base_sorts,
    instantiate,
    max_free_index,
    mentions_index,
    type_shift,
)


@dataclass(frozen=True)
class Signature:
    """Typed constants over a closed registry of base sorts."""

    constants: Mapping[str, Type] = field(default_factory=dict)
    base_sorts: frozenset[str] = frozenset({PROP})

    def __post_init__(self):
        sorts = frozenset(self.base_sorts) | {PROP}
        object.__setattr__(self, "base_sorts", sorts)
        object.__setattr__(self, "constants", MappingProxyType(dict(self.constants)))
        for name, ty in self.constants.items():
            missing = base_sorts(ty) - sorts
            if missing:
                raise UnknownSort(min(missing), f"in the type of constant {name}")
            if max_free_index(ty) >= 0:
                raise IllFormedType(f"constant {name} has an open type")

    def __contains__(self, name: str) -> bool:
        return name in self.constants

    def __getitem__(self, name: str) -> Type:
        try:
            return self.constants[name]
        except KeyError:
            raise UnknownConstant(name) from None

    def const(self, name: str) -> Const:
        return Const(name, self[name])

    def with_sorts(self, *names: str) -> Signature:
        return Signature(self.constants, self.base_sorts | set(names))

    def with_constants(self, **constants: Type) -> Signature:
        return self.extend(constants)

    def extend(self, constants: Mapping[str, Type], sorts=()) -> Signature:
        merged = dict(self.constants)
        for name, ty in constants.items():
            if name in merged and merged[name] != ty:
                raise UnknownConstant(name, "declared twice with different types")
            merged[name] = ty
        return Signature(merged, self.base_sorts | set(sorts))


class _Checker:
    def __init__(self, signature: Signature | None, env: Mapping[str, Type] | None):
        self.signature = signature
        self.env = env
        # entries are (type, type depth at the binder)
        self.ctx: list[tuple[Type, int]] = []

    def check_type(self, ty: Type, tdepth: int) -> None:
        if max_free_index(ty) >= tdepth:
            raise IllFormedType("type refers to a type variable outside its scope")
        if self.signature is not None:
            missing = base_sorts(ty) - self.signature.base_sorts
            if missing:
                raise UnknownSort(min(missing))

    def infer(self, t: Term, tdepth: int) -> Type:
        match t:
            case Bound(index, name):
                if index >= len(self.ctx):
                    raise UnboundVariable(name, "dangling index")
                ty, d = self.ctx[-1 - index]
                return type_shift(ty, tdepth - d)
            case Var(name, ty):
                self.check_type(ty, tdepth)
                if self.env is not None:
                    if name not in self.env:
                        raise UnboundVariable(name)
                    declared = type_shift(self.env[name], tdepth)
                    if declared != ty:
                        raise TypeMismatch(declared, ty, what=f"variable {name}")
                return ty
            case Const(name, ty):
                if self.signature is not None:
                    if name not in self.signature:
                        raise UnknownConstant(name)
                    if self.signature[name] != ty:
                        raise UnknownConstant(name, "used at a type other than its declared one")
                return ty
            case App(f, a):
                fty = self.infer(f, tdepth)
                aty = self.infer(a, tdepth)
                if not isinstance(fty, Arrow):
                    raise NotAFunction(fty)
                if fty.domain != aty:
                    raise ApplicationMismatch(fty.domain, aty)
                return fty.codomain
            case Abs(name, ty, body):
                self.check_type(ty, tdepth)
                self.ctx.append((ty, tdepth))
                try:
                    return Arrow(ty, self.infer(body, tdepth))
                finally:
                    self.ctx.pop()
            case TyApp(u, ty):
                self.check_type(ty, tdepth)
                uty = self.infer(u, tdepth)
                if not isinstance(uty, Forall):
                    raise SpecialisationOfNonPi(uty)
                return instantiate(uty.body, ty)
            case TyAbs(name, body):
                offender = _free_var_mentioning(body, 0)
                if offender is not None:
                    raise GeneralisationViolation(name, offender)
                return Forall(name, self.infer(body, tdepth + 1))
        raise TypeError(f"not a term: {t!r}")


def _free_var_mentioning(t: Term, level: int) -> str | None:
    """Name of a free variable whose type mentions the type binder ``level`` up."""
    match t:
        case Var(name, ty):
            return name if mentions_index(ty, level) else None
        case App(f, a):
            return _free_var_mentioning(f, level) or _free_var_mentioning(a, level)
        case Abs(_, _, body):
            return _free_var_mentioning(body, level)
        case TyApp(u, _):
            return _free_var_mentioning(u, level)
        case TyAbs(_, body):
            return _free_var_mentioning(body, level + 1)
    return None


def type_of(
    term: Term,
    signature: Signature | None = None,
    env: Mapping[str, Type] | None = None,
) -> Type:
    """Type of ``term`` or an ``IllTyped`` error.

    Without a ``signature`` constants are trusted at their annotated type.
    With an ``env``, every free variable must be declared there at its
    annotated type.
    """
    return _Checker(signature, env).infer(term, 0)


def is_well_typed(term: Term, signature: Signature | None = None) -> bool:
    try:
        type_of(term, signature)
    except IllTyped:
        return False
    return True


def sort_of(ty: Type) -> str | None:
    return ty.name if isinstance(ty, BaseSort) else None

