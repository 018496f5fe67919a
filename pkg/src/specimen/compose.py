"""From syntax trees to readings.

A binary tree of words is instantiated with each word's main term, then
repaired: type mismatches at an application are fixed by inserting coercions
(from the argument's words, from the functor's head word, or ontological
inclusion chains), polymorphic terms are specialised by unifying one
application at a time, and trailing coercion slots (as in the polymorphic
AND) are filled from the words in the phrase. Candidates whose coercion trace
breaks exclusivity are dropped. Each survivor is normalised into a reading.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Union

from .builtins import SPECIMEN_OF
from .config import Config
from .kernel import (
    T,
    App,
    Arrow,
    BaseSort,
    Forall,
    IllTyped,
    Term,
    TyApp,
    Type,
    TypeMismatch,
    TypeVar,
    format_term,
    format_type,
    instantiate as open_forall,
    is_closed,
    normalize_counted,
    subst_types,
    type_of,
)
from .kernel.terms import free_type_vars_term
from .kernel.types import free_type_vars, replace_free
from .lexicon import LexEntry, Lexicon, Ontology, UnknownWord, chain_term, coercion_candidates
from .sexpr import located, read_one

Path = tuple[int, ...]


class CompositionError(Exception):
    pass


# -- syntax trees -----------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    word: str


@dataclass(frozen=True)
class Node:
    functor: "SyntaxTree"
    argument: "SyntaxTree"


SyntaxTree = Union[Leaf, Node]


def parse_tree(text_or_node) -> SyntaxTree:
    """Read ``(node F A)`` trees whose leaves are words."""
    node = read_one(text_or_node) if type(text_or_node) is str else text_or_node
    if isinstance(node, list):
        if len(node) != 3 or node[0] != "node":
            raise located(node, "expected (node FUNCTOR ARGUMENT)")
        return Node(parse_tree(node[1]), parse_tree(node[2]))
    return Leaf(str(node))


def format_tree(tree: SyntaxTree) -> str:
    if isinstance(tree, Leaf):
        return tree.word
    return f"(node {format_tree(tree.functor)} {format_tree(tree.argument)})"


def format_path(path: Path) -> str:
    return ".".join(("root",) + tuple(str(i) for i in path))


# -- instantiated trees -----------------------------------------------------

@dataclass(frozen=True)
class RawLeaf:
    word: str
    path: Path
    entry: LexEntry

    @property
    def term(self) -> Term:
        return self.entry.main


@dataclass(frozen=True)
class RawNode:
    functor: "RawTree"
    argument: "RawTree"
    path: Path

    @property
    def term(self) -> Term:
        return App(self.functor.term, self.argument.term)


RawTree = Union[RawLeaf, RawNode]


def instantiate(tree: SyntaxTree | None, lexicon: Lexicon, path: Path = ()) -> RawTree:
    """Replace each leaf by its word's main term; nodes become applications.

    Nothing is reduced or repaired; ``result.term`` is the (usually ill-typed)
    raw application term.
    """
    if tree is None:
        raise CompositionError("empty syntax tree")
    if isinstance(tree, Leaf):
        try:
            entry = lexicon.lookup(tree.word)
        except UnknownWord:
            raise UnknownWord(tree.word, format_path(path)) from None
        return RawLeaf(tree.word, path, entry)
    if isinstance(tree, Node):
        return RawNode(
            instantiate(tree.functor, lexicon, path + (0,)),
            instantiate(tree.argument, lexicon, path + (1,)),
            path,
        )
    raise CompositionError(f"not a syntax tree: {tree!r}")


def leaves(raw: RawTree) -> list[RawLeaf]:
    if isinstance(raw, RawLeaf):
        return [raw]
    return leaves(raw.functor) + leaves(raw.argument)


def head(raw: RawTree) -> RawLeaf:
    while isinstance(raw, RawNode):
        raw = raw.functor
    return raw


def _words(raw: RawTree) -> str:
    if isinstance(raw, RawLeaf):
        return raw.word
    return f"({_words(raw.functor)} {_words(raw.argument)})"


# -- traces and readings ----------------------------------------------------

@dataclass(frozen=True, order=True)
class CoercionUse:
    """One coercion inserted during composition.

    ``at`` is the path of the word occurrence that provides (and anchors) the
    coercion; ``site`` is the application where it was inserted, or for a
    filled coercion slot the subtree whose object it transfers.
    """

    at: Path
    anchor_word: str
    coercion_name: str
    exclusive: bool = False
    inclusion: bool = False
    site: Path = ()

    def __str__(self):
        flag = " exclusive" if self.exclusive else (" inclusion" if self.inclusion else "")
        return f"{self.coercion_name} on {self.anchor_word}@{format_path(self.at)} at {format_path(self.site)}{flag}"


Trace = tuple[CoercionUse, ...]


@dataclass(frozen=True)
class Reading:
    term: Term
    trace: Trace = ()
    instantiations: tuple[tuple[str, Type], ...] = ()
    raw: Term | None = field(default=None, compare=False)
    steps: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Diagnostic:
    path: Path
    functor: str
    argument: str
    message: str

    def __str__(self):
        where = format_path(self.path)
        if self.argument:
            return f"at {where} applying {self.functor} to {self.argument}: {self.message}"
        return f"at {where} {self.functor}: {self.message}"


class NoReading(CompositionError):
    """No repaired composition is well typed: the sentence is infelicitous."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        lines = "\n  ".join(str(d) for d in self.diagnostics) or "no candidate"
        super().__init__(f"no reading:\n  {lines}")


class Repair(NamedTuple):
    term: Term
    trace: Trace
    instantiations: tuple[tuple[str, Type], ...]


def exclusivity_conflict(trace: Trace) -> tuple[CoercionUse, CoercionUse] | None:
    """A pair of uses on one word occurrence that exclusivity forbids."""
    by_anchor: dict[Path, list[CoercionUse]] = defaultdict(list)
    for use in trace:
        by_anchor[use.at].append(use)
    for uses in by_anchor.values():
        for u in uses:
            if not u.exclusive:
                continue
            for v in uses:
                if v.coercion_name != u.coercion_name:
                    return u, v
    return None


# -- unification of metavariables --------------------------------------------

def _is_meta(ty: Type) -> bool:
    return isinstance(ty, TypeVar) and ty.name.startswith("?")


def _metas_in(ty: Type) -> set[str]:
    return {n for n in free_type_vars(ty) if n.startswith("?")}


def unify(a: Type, b: Type) -> dict[str, Type] | None:
    """Most general solution for the metavariables (``?n``) making ``a == b``.

    Metavariables stand for entity sorts, so they are only ever solved by
    another metavariable or by a base sort other than t.
    """
    subst: dict[str, Type] = {}
    stack = [(a, b, 0)]
    while stack:
        x, y, depth = stack.pop()
        x = replace_free(x, subst, depth) if subst else x
        y = replace_free(y, subst, depth) if subst else y
        if x == y:
            continue
        if not _is_meta(x) and _is_meta(y):
            x, y = y, x
        if _is_meta(x):
            # lexical type variables range over entity sorts only
            if not (_is_meta(y) or (isinstance(y, BaseSort) and y != T)):
                return None
            subst = {k: replace_free(v, {x.name: y}) for k, v in subst.items()}
            subst[x.name] = y
        elif isinstance(x, Arrow) and isinstance(y, Arrow):
            stack.append((x.codomain, y.codomain, depth))
            stack.append((x.domain, y.domain, depth))
        elif isinstance(x, Forall) and isinstance(y, Forall):
            stack.append((x.body, y.body, depth + 1))
        else:
            return None
    return subst


# -- the repair search --------------------------------------------------------

@dataclass(frozen=True)
class _Cand:
    term: Term
    type: Type
    trace: Trace = ()
    insts: tuple[tuple[str, Type], ...] = ()
    # the subtree supplying the most recent argument; coercion slots that
    # follow it transfer that object
    last: RawTree | None = None

    def subst(self, s: dict[str, Type]) -> _Cand:
        if not s:
            return self
        return _Cand(
            subst_types(self.term, s),
            subst_types(self.type, s),
            self.trace,
            tuple((w, subst_types(t, s)) for w, t in self.insts),
            self.last,
        )


def _slot(ty: Type) -> tuple[str, str] | None:
    """Sorts of a leading coercion-typed argument ``(S1 -> S2) -> R``."""
    if isinstance(ty, Arrow) and isinstance(ty.domain, Arrow):
        dom, cod = ty.domain.domain, ty.domain.codomain
        if isinstance(dom, BaseSort) and isinstance(cod, BaseSort) and T not in (dom, cod):
            return dom.name, cod.name
    return None


class _Composer:
    def __init__(self, lexicon: Lexicon, ontology: Ontology, max_depth: int):
        self.lexicon = lexicon
        self.ontology = ontology
        self.max_depth = max_depth
        self._metas = itertools.count(1)

    def meta(self) -> TypeVar:
        return TypeVar(f"?{next(self._metas)}")

    def specialise(self, term: Term, ty: Type, insts, word: str):
        while isinstance(ty, Forall):
            m = self.meta()
            term, ty = TyApp(term, m), open_forall(ty.body, m)
            insts = insts + ((word, m),)
        return term, ty, insts

    # leaves and nodes

    def elaborate(self, raw: RawTree) -> list[_Cand]:
        if isinstance(raw, RawLeaf):
            return [_Cand(raw.entry.main, raw.entry.main_type)]
        functors = self.elaborate(raw.functor)
        arguments = self.elaborate(raw.argument)
        diags: list[Diagnostic] = []
        out: list[_Cand] = []
        for f in functors:
            for x in arguments:
                out.extend(self.combine(raw, f, x, diags))
        out = list(dict.fromkeys(out))
        if not out:
            raise NoReading(diags)
        return out

    def combine(self, raw: RawNode, f: _Cand, x: _Cand, diags: list[Diagnostic]) -> list[_Cand]:
        fword = head(raw.functor).word
        fterm, fty, finsts = self.specialise(f.term, f.type, f.insts, fword)
        if not isinstance(fty, Arrow):
            diags.append(self._diag(raw, f"the functor has type {format_type(fty)}, which is not a function type"))
            return []
        expected = fty.domain
        out: list[_Cand] = []
        seen_types: list[Type] = []
        conflicts_before = len(diags)
        for xv in self.argument_variants(raw, x, expected):
            seen_types.append(xv.type)
            s = unify(expected, xv.type)
            if s is None:
                continue
            cand = _Cand(App(fterm, xv.term), fty.codomain, f.trace + xv.trace, finsts + xv.insts, raw.argument).subst(s)
            conflict = exclusivity_conflict(cand.trace)
            if conflict is not None:
                diags.append(self._conflict_diag(raw, conflict))
                continue
            out.append(cand)
        if not out and len(diags) == conflicts_before:
            found = ", ".join(dict.fromkeys(format_type(t) for t in seen_types)) or format_type(x.type)
            diags.append(self._diag(
                raw,
                f"argument of type {found} cannot be used where {format_type(expected)} is expected "
                f"(no coercion or inclusion chain within depth {self.max_depth})",
            ))
        return out

    def argument_variants(self, raw: RawNode, x: _Cand, expected: Type) -> Iterator[_Cand]:
        xword = head(raw.argument).word
        term, ty, insts = x.term, x.type, x.insts
        if isinstance(ty, Forall) and not isinstance(expected, Forall) and not _is_meta(expected):
            term, ty, insts = self.specialise(term, ty, insts, xword)
        base = [_Cand(term, ty, x.trace, insts)]
        if _slot(ty) is not None and not (isinstance(expected, Arrow) and isinstance(expected.domain, Arrow)):
            base = self.saturate(raw.argument, base[0], [])
        for cand in base:
            yield cand
            if not isinstance(cand.type, BaseSort):
                continue
            if isinstance(expected, BaseSort):
                if expected == cand.type:
                    continue
                targets = [expected.name]
            elif _is_meta(expected):
                targets = None
            else:
                continue
            for cterm, target, uses in self.coercions(raw, cand.type.name, targets):
                yield _Cand(App(cterm, cand.term), BaseSort(target), cand.trace + uses, cand.insts, cand.last)

    def coercions(self, raw: RawNode, src: str, targets: list[str] | None):
        """(term, target sort, uses) for every transfer of a ``src`` argument."""
        arg_leaves = leaves(raw.argument)
        arg_head = head(raw.argument)
        fun_head = head(raw.functor)
        providers = [arg_head] + [lf for lf in arg_leaves if lf is not arg_head] + [fun_head]
        if targets is None:
            found: set[str] = set(self.ontology.reachable(src, self.max_depth))
            for leaf in providers:
                found.update(c.type.codomain.name for c in leaf.entry.coercions_from(src))
            targets = sorted(found)
        for dst in targets:
            if dst not in self.ontology.sorts:
                continue
            for cand in coercion_candidates(arg_head.entry, self.ontology, src, dst, self.max_depth):
                if cand.inclusion:
                    if not cand.names:
                        continue
                    uses = tuple(CoercionUse(arg_head.path, arg_head.word, n, False, True, raw.path) for n in cand.names)
                else:
                    uses = (CoercionUse(arg_head.path, arg_head.word, cand.names[0], cand.exclusive, False, raw.path),)
                yield cand.term, dst, uses
            for leaf in providers[1:]:
                for c in leaf.entry.coercions_between(src, dst):
                    yield c.term, dst, (CoercionUse(leaf.path, leaf.word, c.name, c.exclusive, False, raw.path),)

    # coercion slots

    def slot_fillers(self, raw: RawTree, s1: str, s2: str):
        """Transfers ``s1 -> s2`` offered by the words of ``raw``."""
        if s1 == s2:
            yield chain_term(s1, ()), ()
        words = leaves(raw)
        for leaf in words:
            for c in leaf.entry.coercions_between(s1, s2):
                yield c.term, (CoercionUse(leaf.path, leaf.word, c.name, c.exclusive, False, raw.path),)
        anchor = next((lf for lf in words if lf.entry.main_type == BaseSort(s1)), head(raw))
        for chain in self.ontology.chains(s1, s2, self.max_depth):
            if chain:
                uses = tuple(CoercionUse(anchor.path, anchor.word, inc.morphism, False, True, raw.path) for inc in chain)
                yield chain_term(s1, chain), uses

    def saturate(self, raw: RawTree, cand: _Cand, diags: list[Diagnostic]) -> list[_Cand]:
        """Fill leading coercion slots ``(S1 -> S2) -> ...`` from the phrase's words."""
        done: list[_Cand] = []
        frontier = [cand]
        while frontier:
            c = frontier.pop(0)
            slot = _slot(c.type)
            if slot is None:
                done.append(c)
                continue
            s1, s2 = slot
            source = c.last if c.last is not None else raw
            filled = False
            for term, uses in self.slot_fillers(source, s1, s2):
                trace = c.trace + uses
                conflict = exclusivity_conflict(trace)
                if conflict is not None:
                    diags.append(self._conflict_diag(raw, conflict))
                    continue
                filled = True
                frontier.append(_Cand(App(c.term, term), c.type.codomain, trace, c.insts, c.last))
            if not filled and not any(True for _ in self.slot_fillers(source, s1, s2)):
                diags.append(self._diag(
                    raw, f"no transfer from {s1} to {s2} for {_words(source)} to fill a coercion slot"))
        return done

    # the whole tree

    def run(self, raw: RawTree) -> list[_Cand]:
        diags: list[Diagnostic] = []
        finals: list[_Cand] = []
        for cand in self.elaborate(raw):
            for c in self.saturate(raw, cand, diags):
                metas = _metas_in(c.type) | {n for n in free_type_vars_term(c.term) if n.startswith("?")}
                if metas:
                    diags.append(self._diag(raw, f"type variable(s) {', '.join(sorted(metas))} left uninstantiated"))
                elif c.type != T:
                    diags.append(self._diag(raw, f"the composition has type {format_type(c.type)}, not t"))
                else:
                    finals.append(c)
        if not finals:
            raise NoReading(diags)
        return list(dict.fromkeys(finals))

    # diagnostics

    def _diag(self, raw: RawTree, message: str) -> Diagnostic:
        if isinstance(raw, RawNode):
            return Diagnostic(raw.path, _words(raw.functor), _words(raw.argument), message)
        return Diagnostic(raw.path, raw.word, "", message)

    def _conflict_diag(self, raw: RawTree, conflict) -> Diagnostic:
        u, v = conflict
        return self._diag(
            raw,
            f"exclusive coercion {u.coercion_name} on {u.anchor_word}@{format_path(u.at)} "
            f"is incompatible with {v.coercion_name} on the same word",
        )


def repair(
    raw: RawTree,
    lexicon: Lexicon,
    ontology: Ontology | None = None,
    max_depth: int = 3,
) -> list[Repair]:
    """Every well-typed repaired composition of ``raw`` reaching sort t.

    Raises ``NoReading`` with diagnostics for the application that could not
    be repaired.
    """
    composer = _Composer(lexicon, ontology or lexicon.ontology, max_depth)
    return [Repair(c.term, c.trace, c.insts) for c in composer.run(raw)]


def _order_key(reading: Reading):
    return (
        reading.trace,
        tuple((w, format_type(t)) for w, t in reading.instantiations),
        format_term(reading.term),
    )


def readings(
    tree: SyntaxTree,
    lexicon: Lexicon,
    ontology: Ontology | None = None,
    config: Config | None = None,
) -> list[Reading]:
    """All readings of ``tree``: closed normal terms of type t with their traces.

    Readings whose normal forms coincide are reported once, with the least
    trace. The order is by trace, then instantiations, then printed term.
    """
    config = config or Config()
    raw = instantiate(tree, lexicon)
    found: dict[Term, Reading] = {}
    for rep in repair(raw, lexicon, ontology, config.max_coercion_depth):
        try:
            type_of(rep.term, lexicon.signature)
        except IllTyped as exc:  # pragma: no cover - would be a repair bug
            raise AssertionError(f"repair produced an ill-typed term: {exc}") from exc
        normal, steps = normalize_counted(rep.term, config.fuel, check=False)
        assert is_closed(normal)
        reading = Reading(normal, rep.trace, rep.instantiations, rep.term, steps)
        prev = found.get(normal)
        if prev is None or _order_key(reading) < _order_key(prev):
            found[normal] = reading
    return sorted(found.values(), key=_order_key)


def specimen_read(restrictor: Term, sort: str | Type, signature=None) -> Term:
    """``specimen_of{X}(restrictor)``: the generic element of a property's extension."""
    sort_ty = BaseSort(sort) if isinstance(sort, str) else sort
    want = Arrow(sort_ty, T)
    found = type_of(restrictor, signature)
    if found != want:
        raise TypeMismatch(want, found, what="restrictor")
    return App(TyApp(SPECIMEN_OF, sort_ty), restrictor)
