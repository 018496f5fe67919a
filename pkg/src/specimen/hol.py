"""Readings as many-sorted higher-order logic formulas.

A closed normal term of type t is translated into a ``Formula``. The logical
constants become connectives, quantifiers and comparisons, and the generic
operators become generic constants. A bare ``specimen{A}`` is the constant
``⪍_A``. A restricted one (``specimen_of{A}(P)``, ``iota{A}(P)``) gets a fresh
name ``s``, ``s1``, ... and carries its restrictor ``P(s)``. Restrictors are
conjoined in front of the translated matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .builtins import CONNECTIVES, GENERIC_OPERATORS, QUANTIFIERS
from .kernel import (
    T,
    Abs,
    App,
    Arrow,
    BaseSort,
    Bound,
    Const,
    Forall,
    KernelError,
    Signature,
    Term,
    TyApp,
    Type,
    Var,
    format_type,
    instantiate,
    is_normal,
    normalize,
    free_vars,
    spine,
    type_of,
)
from .kernel.terms import dangling, subterms, term_shift
from .lexicon import Ontology
from .sexpr import Braced, located, read_one

COMPARISONS = {"lt": "<", "leq": "≤"}
_CONN_SYMBOLS = {"and": " ∧ ", "or": " ∨ ", "implies": " ⇒ "}
_QUANT_SYMBOLS = {"forall": "∀", "exists": "∃"}
BARE_PREFIX = "⪍_"


class UnsortableTerm(KernelError):
    """The term falls outside the many-sorted fragment."""


class NotAProposition(KernelError):
    def __init__(self, found: Type):
        self.found = found
        super().__init__(f"expected a closed term of type t, found type {format_type(found)}")


# -- syntax -----------------------------------------------------------------

@dataclass(frozen=True)
class Individual:
    name: str
    sort: str


@dataclass(frozen=True)
class Variable:
    name: str
    sort: str


@dataclass(frozen=True)
class GenericConst:
    name: str
    sort: str
    origin: str = "bare"  # or "restricted"
    restrictor: "Formula | None" = None  # mentions Variable(name, sort)
    operator: str = "specimen"  # or "iota"


@dataclass(frozen=True)
class FunApp:
    morphism: str
    sort: str
    arg: "HolTerm"
    inclusion: bool = False


HolTerm = Union[Individual, Variable, GenericConst, FunApp]


@dataclass(frozen=True)
class Pred:
    name: str
    type_args: tuple[Type, ...]
    args: tuple[HolTerm, ...]


@dataclass(frozen=True)
class Conn:
    kind: str
    operands: tuple["Formula", ...]


@dataclass(frozen=True)
class Quant:
    kind: str
    var: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class Cmp:
    kind: str
    left: HolTerm
    right: HolTerm


Formula = Union[Pred, Conn, Quant, Cmp]


def sort_of(term: HolTerm) -> str:
    return term.sort


# -- from lambda terms ------------------------------------------------------

def _sort_name(ty: Type, what: str) -> str:
    if not isinstance(ty, BaseSort):
        raise UnsortableTerm(f"{what} has type {format_type(ty)}, not a base sort")
    return ty.name


def _restricted_sites(term: Term) -> list[tuple[str, Type, Term]]:
    found: list[tuple[str, Type, Term]] = []
    for sub in subterms(term):
        if isinstance(sub, App) and isinstance(sub.fun, TyApp) and isinstance(sub.fun.term, Const):
            op = sub.fun.term.name
            if op in GENERIC_OPERATORS:
                key = (op, sub.fun.type_arg, sub.arg)
                if dangling(sub.arg):
                    raise UnsortableTerm(f"the restrictor of {op} depends on a bound variable")
                if key not in found:
                    found.append(key)
    return found


class _Translator:
    def __init__(self, term: Term, ontology: Ontology | None):
        self.morphisms = ontology.morphisms if ontology is not None else frozenset()
        self.constants = {s.name for s in subterms(term) if isinstance(s, Const)}
        self.generics: dict[tuple, GenericConst] = {}
        names = iter(f"s{i}" if i else "s" for i in range(10**6))
        self._names: dict[tuple, str] = {}
        for key in _restricted_sites(term):
            prefix = "ι" if key[0] == "iota" else ""
            name = prefix + next(n for n in names if prefix + n not in self.constants)
            self._names[key] = name
        self.taken = set(self._names.values()) | self.constants

    def fresh(self, hint: str, scope: list[Variable]) -> str:
        used = self.taken | {v.name for v in scope}
        name = hint or "x"
        while name in used:
            name += "'"
        return name

    def formula(self, t: Term, env: list[Variable]) -> Formula:
        head, args = spine(t)
        if not isinstance(head, Const):
            raise UnsortableTerm(f"formula headed by a variable: {head!r}")
        name = head.name
        terms = [a for a in args if isinstance(a, Term)]
        if name in CONNECTIVES and not any(isinstance(a, Type) for a in args):
            return Conn(CONNECTIVES[name], tuple(self.formula(a, env) for a in terms))
        if name in QUANTIFIERS and len(args) == 2 and isinstance(args[0], Type):
            sort = _sort_name(args[0], f"the domain of {name}")
            body = args[1]
            if isinstance(body, Abs):
                hint, inner = body.name, body.body
            else:
                hint, inner = "x", App(term_shift(body, 1), Bound(0, "x"))
            var = Variable(self.fresh(hint, env), sort)
            return Quant(QUANTIFIERS[name], var.name, sort, self.formula(inner, [var] + env))
        if name in COMPARISONS and len(args) == 2:
            return Cmp(name, self.term(args[0], env), self.term(args[1], env))
        ty = head.type
        type_args: list[Type] = []
        hol_args: list[HolTerm] = []
        for a in args:
            if isinstance(a, Type):
                if not isinstance(ty, Forall):
                    raise UnsortableTerm(f"{name} is specialised too often")
                type_args.append(a)
                ty = instantiate(ty.body, a)
            else:
                if not isinstance(ty, Arrow):
                    raise UnsortableTerm(f"{name} is applied to too many arguments")
                hol_args.append(self.term(a, env))
                ty = ty.codomain
        if ty != T:
            raise UnsortableTerm(f"{name} applied to {len(args)} arguments has type {format_type(ty)}, not t")
        return Pred(name, tuple(type_args), tuple(hol_args))

    def term(self, t: Term, env: list[Variable]) -> HolTerm:
        match t:
            case Bound(index):
                return env[index]
            case Var(name, ty):
                return Variable(name, _sort_name(ty, f"variable {name}"))
            case Const(name, ty):
                return Individual(name, _sort_name(ty, f"constant {name}"))
            case TyApp(Const("specimen"), ty):
                sort = _sort_name(ty, "the generic element")
                return GenericConst(BARE_PREFIX + sort, sort)
            case App(TyApp(Const(op), ty), restrictor) if op in GENERIC_OPERATORS:
                return self.generic(op, ty, restrictor)
            case App(Const(m, Arrow(BaseSort(), BaseSort(cod))), arg):
                return FunApp(m, cod, self.term(arg, env), m in self.morphisms)
        raise UnsortableTerm(f"not an individual term: {t!r}")

    def generic(self, op: str, ty: Type, restrictor: Term) -> GenericConst:
        key = (op, ty, restrictor)
        if key not in self.generics:
            sort = _sort_name(ty, f"the domain of {op}")
            name = self._names[key]
            body = normalize(App(restrictor, Var(name, ty)), check=False)
            self.generics[key] = GenericConst(
                name, sort, "restricted", self.formula(body, []), GENERIC_OPERATORS[op]
            )
        return self.generics[key]


def to_formula(
    reading,
    signature: Signature | None = None,
    ontology: Ontology | None = None,
) -> Formula:
    """Translate a reading (or a closed term of type t), normalising if needed.

    With an ontology, applications of its inclusion morphisms are marked so
    that printing can elide them.
    """
    term = getattr(reading, "term", reading)
    if dangling(term) or free_vars(term):
        raise UnsortableTerm("the term is not closed")
    ty = type_of(term, signature)
    if ty != T:
        raise NotAProposition(ty)
    if not is_normal(term):
        term = normalize(term)
    tr = _Translator(term, ontology)
    matrix = tr.formula(term, [])
    restrictors = [g.restrictor for g in generics(matrix) if g.origin == "restricted"]
    if not restrictors:
        return matrix
    return Conn("and", tuple(restrictors) + (matrix,))


# -- walking ----------------------------------------------------------------

def _formula_terms(f: Formula):
    match f:
        case Pred(_, _, args):
            yield from args
        case Conn(_, ops):
            for op in ops:
                yield from _formula_terms(op)
        case Quant(_, _, _, body):
            yield from _formula_terms(body)
        case Cmp(_, left, right):
            yield left
            yield right


def generics(f: Formula) -> list[GenericConst]:
    """Generic constants in order of first occurrence, restrictors included."""
    out: list[GenericConst] = []

    def visit_term(t: HolTerm):
        if isinstance(t, FunApp):
            visit_term(t.arg)
        elif isinstance(t, GenericConst) and t not in out:
            out.append(t)
            if t.restrictor is not None:
                visit(t.restrictor)

    def visit(g: Formula):
        for t in _formula_terms(g):
            visit_term(t)

    visit(f)
    return out


def map_terms(f: Formula, fn: Callable[[HolTerm], HolTerm]) -> Formula:
    match f:
        case Pred(name, targs, args):
            return Pred(name, targs, tuple(fn(a) for a in args))
        case Conn(kind, ops):
            return Conn(kind, tuple(map_terms(o, fn) for o in ops))
        case Quant(kind, var, sort, body):
            return Quant(kind, var, sort, map_terms(body, fn))
        case Cmp(kind, left, right):
            return Cmp(kind, fn(left), fn(right))
    raise TypeError(f"not a formula: {f!r}")


def strip_inclusions(t: HolTerm) -> HolTerm:
    if isinstance(t, FunApp):
        inner = strip_inclusions(t.arg)
        return inner if t.inclusion else FunApp(t.morphism, t.sort, inner, False)
    return t


# -- pretty printing --------------------------------------------------------

def pretty_term(t: HolTerm, elide: bool = False) -> str:
    if isinstance(t, FunApp):
        if elide and t.inclusion:
            return pretty_term(t.arg, elide)
        return f"{t.morphism}({pretty_term(t.arg, elide)})"
    return t.name


def pretty(f: Formula, elide_inclusions: bool = False) -> str:
    """Readable rendering, e.g. ``loves(a(h(⪍_Brits)), France)``."""

    def sub(g: Formula) -> str:
        text = pretty(g, elide_inclusions)
        return f"({text})" if isinstance(g, (Conn, Quant)) else text

    match f:
        case Pred(name, targs, args):
            tpart = "{" + ", ".join(format_type(a) for a in targs) + "}" if targs else ""
            apart = "(" + ", ".join(pretty_term(a, elide_inclusions) for a in args) + ")" if args else ""
            return name + tpart + apart
        case Conn("not", (op,)):
            return "¬" + sub(op)
        case Conn(kind, ops):
            return _CONN_SYMBOLS[kind].join(sub(o) for o in ops)
        case Quant(kind, var, sort, body):
            return f"{_QUANT_SYMBOLS[kind]}{var}:{sort}. {pretty(body, elide_inclusions)}"
        case Cmp(kind, left, right):
            return f"{pretty_term(left, elide_inclusions)} {COMPARISONS[kind]} {pretty_term(right, elide_inclusions)}"
    raise TypeError(f"not a formula: {f!r}")


def describe_generics(f: Formula, elide_inclusions: bool = False) -> list[str]:
    """One line per restricted generic: ``s : Student where passed(s, logic)``."""
    return [
        f"{g.name} : {g.sort} by {g.operator} where {pretty(g.restrictor, elide_inclusions)}"
        for g in generics(f)
        if g.restrictor is not None
    ]


# -- s-expressions ----------------------------------------------------------

def _type_sexpr(ty: Type) -> str:
    if isinstance(ty, BaseSort):
        return ty.name
    if isinstance(ty, Arrow):
        return f"(-> {_type_sexpr(ty.domain)} {_type_sexpr(ty.codomain)})"
    raise UnsortableTerm(f"type {format_type(ty)} cannot be serialised")


def term_sexpr(t: HolTerm) -> str:
    match t:
        case Individual(name, sort):
            return f"(ind {name} {sort})"
        case Variable(name, sort):
            return f"(var {name} {sort})"
        case GenericConst(name, sort, origin, restrictor, operator):
            parts = [f"(generic {name} {sort}"]
            if origin != ("restricted" if restrictor is not None else "bare"):
                parts.append(f":origin {origin}")
            if operator != "specimen":
                parts.append(f":operator {operator}")
            if restrictor is not None:
                parts.append(f":restrictor {to_sexpr(restrictor)}")
            return " ".join(parts) + ")"
        case FunApp(m, sort, arg, inclusion):
            return f"({'incl' if inclusion else 'fun'} {m} {sort} {term_sexpr(arg)})"
    raise TypeError(f"not a term: {t!r}")


def to_sexpr(f: Formula) -> str:
    match f:
        case Pred(name, targs, args):
            tpart = " {" + " ".join(_type_sexpr(a) for a in targs) + "}" if targs else ""
            return f"(pred {name}{tpart} (" + " ".join(term_sexpr(a) for a in args) + "))"
        case Conn(kind, ops):
            return f"({kind} " + " ".join(to_sexpr(o) for o in ops) + ")"
        case Quant(kind, var, sort, body):
            return f"({kind} {var} {sort} {to_sexpr(body)})"
        case Cmp(kind, left, right):
            return f"({kind} {term_sexpr(left)} {term_sexpr(right)})"
    raise TypeError(f"not a formula: {f!r}")


def _atom(node, what: str) -> str:
    if isinstance(node, list):
        raise located(node, f"expected {what}")
    return str(node)


def _read_type(node) -> Type:
    if isinstance(node, list):
        if len(node) < 3 or node[0] != "->":
            raise located(node, "expected a sort or (-> ...)")
        tys = [_read_type(n) for n in node[1:]]
        out = tys[-1]
        for ty in reversed(tys[:-1]):
            out = Arrow(ty, out)
        return out
    return BaseSort(str(node))


def _read_term(node) -> HolTerm:
    if not isinstance(node, list) or not node:
        raise located(node, "expected a term form")
    tag = node[0]
    if tag in ("ind", "var") and len(node) == 3:
        cls = Individual if tag == "ind" else Variable
        return cls(_atom(node[1], "a name"), _atom(node[2], "a sort"))
    if tag == "generic" and len(node) >= 3 and len(node) % 2 == 1:
        opts = {}
        for key, value in zip(node[3::2], node[4::2]):
            if key not in (":origin", ":operator", ":restrictor") or key in opts:
                raise located(key, f"unexpected generic option {key}")
            opts[str(key)] = value
        restrictor = _read_formula(opts[":restrictor"]) if ":restrictor" in opts else None
        origin = _atom(opts.get(":origin", "restricted" if restrictor is not None else "bare"), "an origin")
        operator = _atom(opts.get(":operator", "specimen"), "an operator")
        if origin not in ("bare", "restricted") or operator not in ("specimen", "iota"):
            raise located(node, "bad generic origin or operator")
        return GenericConst(_atom(node[1], "a name"), _atom(node[2], "a sort"), origin, restrictor, operator)
    if tag in ("fun", "incl") and len(node) == 4:
        return FunApp(_atom(node[1], "a morphism"), _atom(node[2], "a sort"), _read_term(node[3]), tag == "incl")
    raise located(node, f"unknown term form {tag!r}")


def _read_formula(node) -> Formula:
    if not isinstance(node, list) or not node:
        raise located(node, "expected a formula")
    tag = node[0]
    if tag == "pred" and len(node) in (3, 4):
        targs = node[2] if len(node) == 4 else Braced()
        args = node[-1]
        if not isinstance(targs, Braced) or not isinstance(args, list) or isinstance(args, Braced):
            raise located(node, "expected (pred NAME {TYPES}? (ARGS))")
        return Pred(_atom(node[1], "a name"), tuple(_read_type(n) for n in targs), tuple(_read_term(n) for n in args))
    if tag == "not" and len(node) == 2:
        return Conn("not", (_read_formula(node[1]),))
    if tag in ("and", "or", "implies") and len(node) >= 3:
        return Conn(str(tag), tuple(_read_formula(n) for n in node[1:]))
    if tag in _QUANT_SYMBOLS and len(node) == 4:
        return Quant(str(tag), _atom(node[1], "a variable"), _atom(node[2], "a sort"), _read_formula(node[3]))
    if tag in COMPARISONS and len(node) == 3:
        return Cmp(str(tag), _read_term(node[1]), _read_term(node[2]))
    raise located(node, f"unknown formula form {tag!r}")


def from_sexpr(text: str) -> Formula:
    """Inverse of ``to_sexpr``."""
    return _read_formula(read_one(text))


# -- sort checking ----------------------------------------------------------

def check_sorts(f: Formula, signature: Signature) -> list[str]:
    """Sort errors in ``f`` against ``signature``; empty when well sorted."""
    problems: list[str] = []

    def const_type(name: str) -> Type | None:
        if name not in signature:
            problems.append(f"unknown constant {name}")
            return None
        return signature[name]

    def term(t: HolTerm) -> None:
        match t:
            case Individual(name, sort):
                ty = const_type(name)
                if ty is not None and ty != BaseSort(sort):
                    problems.append(f"{name} has sort {format_type(ty)}, not {sort}")
            case GenericConst(name, sort, _, restrictor, _):
                if sort not in signature.base_sorts:
                    problems.append(f"generic {name} has unknown sort {sort}")
                if restrictor is not None:
                    formula(restrictor)
            case FunApp(m, sort, arg, _):
                term(arg)
                ty = const_type(m)
                want = Arrow(BaseSort(arg.sort), BaseSort(sort))
                if ty is not None and ty != want:
                    problems.append(f"{m} has type {format_type(ty)}, used at {format_type(want)}")
            case Variable(name, sort):
                if sort not in signature.base_sorts:
                    problems.append(f"variable {name} has unknown sort {sort}")

    def formula(g: Formula) -> None:
        match g:
            case Pred(name, targs, args):
                ty = const_type(name)
                for a in args:
                    term(a)
                if ty is None:
                    return
                for targ in targs:
                    if not isinstance(ty, Forall):
                        problems.append(f"{name} takes fewer type arguments")
                        return
                    ty = instantiate(ty.body, targ)
                for i, a in enumerate(args):
                    if not isinstance(ty, Arrow):
                        problems.append(f"{name} takes fewer arguments")
                        return
                    if ty.domain != BaseSort(a.sort):
                        problems.append(
                            f"argument {i + 1} of {name} has sort {a.sort}, expected {format_type(ty.domain)}"
                        )
                    ty = ty.codomain
                if ty != T:
                    problems.append(f"{name} is not saturated to t")
            case Conn(_, ops):
                for o in ops:
                    formula(o)
            case Quant(_, var, sort, body):
                if sort not in signature.base_sorts:
                    problems.append(f"{var} ranges over unknown sort {sort}")
                formula(body)
            case Cmp(kind, left, right):
                term(left)
                term(right)
                if left.sort != right.sort:
                    problems.append(f"{kind} compares {left.sort} with {right.sort}")

    formula(f)
    return problems
