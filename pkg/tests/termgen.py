"""Random well-typed System F terms and a second reduction strategy."""

from __future__ import annotations

import random

from specimen.kernel import (
    T,
    Abs,
    App,
    Arrow,
    BaseSort,
    Const,
    Forall,
    Signature,
    TyAbs,
    TyApp,
    Type,
    TypeVar,
    Var,
    forall,
    instantiate,
    lam,
    tlam,
)
from specimen.kernel.terms import beta, depth, type_beta

A, B = BaseSort("A"), BaseSort("B")
_X = TypeVar("X")

CONSTANTS = {
    "a": A,
    "b": B,
    "f": Arrow(A, B),
    "p": Arrow(A, T),
    "r": Arrow(A, Arrow(B, T)),
    "spec": forall("X", _X),
    "id": forall("X", Arrow(_X, _X)),
    "all": forall("X", Arrow(Arrow(_X, T), T)),
}
SIGNATURE = Signature(CONSTANTS, frozenset({"A", "B"}))
MAX_DEPTH = 8


class TermGen:
    """Type-directed generator; every result has depth at most ``max_depth``."""

    def __init__(self, rng: random.Random, max_depth: int = MAX_DEPTH):
        self.rng = rng
        self.max_depth = max_depth
        self.counter = 0

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def const(self, name: str) -> Const:
        return Const(name, CONSTANTS[name])

    def type(self, tvars: list[str], size: int = 2) -> Type:
        r = self.rng.random()
        atoms: list[Type] = [A, B, T] + [TypeVar(x) for x in tvars]
        if size <= 0 or r < 0.55:
            return self.rng.choice(atoms)
        if r < 0.9:
            return Arrow(self.type(tvars, size - 1), self.type(tvars, size - 1))
        x = self.fresh("Y")
        return forall(x, self.type(tvars + [x], size - 1))

    def leaf(self, ty: Type, env: list[Var]):
        options = [v for v in env if v.type == ty]
        if options and self.rng.random() < 0.7:
            return self.rng.choice(options)
        for name, cty in CONSTANTS.items():
            if cty == ty and self.rng.random() < 0.5:
                return self.const(name)
        return TyApp(self.const("spec"), ty)

    def term(self, ty: Type, env: list[Var], tvars: list[str], budget: int | None = None):
        budget = self.max_depth if budget is None else budget
        # a leaf has depth at most 2 (``spec{T}``)
        if budget <= 3:
            if isinstance(ty, Arrow) and budget == 3:
                x = Var(self.fresh("x"), ty.domain)
                return lam(x.name, x.type, self.leaf(ty.codomain, env + [x]))
            return self.leaf(ty, env)
        choices = ["leaf", "beta", "beta", "beta", "tbeta", "tbeta", "app", "poly"]
        if isinstance(ty, Arrow):
            choices += ["lam", "lam"]
        if isinstance(ty, Forall):
            choices += ["tlam", "tlam"]
        if ty == T:
            choices += ["quant"]
        kind = self.rng.choice(choices)
        sub = budget - 1
        if kind == "lam":
            x = Var(self.fresh("x"), ty.domain)
            return lam(x.name, x.type, self.term(ty.codomain, env + [x], tvars, sub))
        if kind == "tlam":
            name = self.fresh("X")
            body = self.term(instantiate(ty.body, TypeVar(name)), env, tvars + [name], sub)
            return tlam(name, body)
        if kind == "beta":
            arg_ty = self.type(tvars)
            x = Var(self.fresh("x"), arg_ty)
            fun = lam(x.name, arg_ty, self.term(ty, env + [x], tvars, sub - 1))
            return App(fun, self.term(arg_ty, env, tvars, sub))
        if kind == "tbeta":
            name = self.fresh("X")
            body = self.term(ty, env, tvars + [name], sub - 1)
            return TyApp(tlam(name, body), self.type(tvars))
        if kind == "app":
            funs = [v for v in env if isinstance(v.type, Arrow) and v.type.codomain == ty]
            funs += [self.const(n) for n, c in CONSTANTS.items() if isinstance(c, Arrow) and c.codomain == ty]
            if funs:
                fun = self.rng.choice(funs)
                return App(fun, self.term(fun.type.domain, env, tvars, sub))
        if kind == "poly":
            return App(TyApp(self.const("id"), ty), self.term(ty, env, tvars, sub - 1))
        if kind == "quant":
            dom = self.type(tvars, 1)
            return App(TyApp(self.const("all"), dom), self.term(Arrow(dom, T), env, tvars, sub - 1))
        return self.leaf(ty, env)

    def closed(self) -> tuple:
        ty = self.type([], 3)
        t = self.term(ty, [], [])
        assert depth(t) <= self.max_depth, depth(t)
        return t, ty

    def violation(self):
        """``ΛX. e`` where ``e`` has a free variable whose type mentions ``X``."""
        name = self.fresh("X")
        bad_ty = Arrow(TypeVar(name), self.type([name], 1))
        if self.rng.random() < 0.5:
            bad_ty = Arrow(self.type([name], 1), bad_ty)
        y = Var(self.fresh("y"), bad_ty)
        body_ty = self.type([name], 1)
        z = Var(self.fresh("z"), bad_ty)
        e = App(lam(z.name, bad_ty, self.term(body_ty, [z], [name], 4)), y)
        inner = tlam(name, e)
        # an outer binder at the open type does not capture the closed occurrences
        return lam(y.name, bad_ty, inner) if self.rng.random() < 0.5 else inner


def innermost(t):
    """Rightmost-innermost normal form; returns (normal form, steps)."""
    steps = 0

    def go(u):
        nonlocal steps
        match u:
            case App(f, a):
                a2 = go(a)
                f2 = go(f)
                if isinstance(f2, Abs):
                    steps += 1
                    return go(beta(f2.body, a2))
                return App(f2, a2)
            case TyApp(f, ty):
                f2 = go(f)
                if isinstance(f2, TyAbs):
                    steps += 1
                    return go(type_beta(f2.body, ty))
                return TyApp(f2, ty)
            case Abs(name, ty, body):
                return Abs(name, ty, go(body))
            case TyAbs(name, body):
                return TyAbs(name, go(body))
        return u

    return go(t), steps
