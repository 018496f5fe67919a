"""Logical constants shared by every lexicon.

``forall``/``exists`` quantify over any type once specialised, ``specimen`` is
the generic element of a type (bare "most"), ``specimen_of`` the generic
element of a property's extension ("most of the"), ``iota`` the choice-like
definite operator. ``POLY_AND`` conjoins predicates over different sorts of
one object, taking the two transfer functions as arguments.
"""

from __future__ import annotations

from .kernel import T, Arrow, Const, Signature, TypeVar, Var, apply, arrows, forall, lam, tlam

_X = TypeVar("X")

QUANTIFIER_TYPE = forall("X", arrows(Arrow(_X, T), T))
SPECIMEN_TYPE = forall("X", _X)
RESTRICTED_TYPE = forall("X", arrows(Arrow(_X, T), _X))

FORALL = Const("forall", QUANTIFIER_TYPE)
EXISTS = Const("exists", QUANTIFIER_TYPE)
SPECIMEN = Const("specimen", SPECIMEN_TYPE)
SPECIMEN_OF = Const("specimen_of", RESTRICTED_TYPE)
IOTA = Const("iota", RESTRICTED_TYPE)
AND = Const("and", arrows(T, T, T))
OR = Const("or", arrows(T, T, T))
IMPLIES = Const("implies", arrows(T, T, T))
NOT = Const("not", Arrow(T, T))

CONSTANTS = (FORALL, EXISTS, SPECIMEN, SPECIMEN_OF, IOTA, AND, OR, IMPLIES, NOT)
QUANTIFIERS = {"forall": "forall", "exists": "exists"}
CONNECTIVES = {"and": "and", "or": "or", "implies": "implies", "not": "not"}
GENERIC_OPERATORS = {"specimen_of": "specimen", "iota": "iota"}


def _poly_and():
    A, M, B = TypeVar("A"), TypeVar("M"), TypeVar("B")
    i = Var("i", Arrow(A, T))
    h = Var("h", Arrow(M, T))
    b = Var("b", B)
    a = Var("a", Arrow(B, A))
    m = Var("m", Arrow(B, M))
    body = apply(AND, apply(h, apply(m, b)), apply(i, apply(a, b)))
    body = lam("b", B, lam("a", Arrow(B, A), lam("m", Arrow(B, M), body)))
    body = lam("i", Arrow(A, T), lam("h", Arrow(M, T), tlam("B", body)))
    return tlam("A", tlam("M", body))


POLY_AND = _poly_and()


def builtin_signature() -> Signature:
    return Signature({c.name: c.type for c in CONSTANTS})
