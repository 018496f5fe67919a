"""Many-sorted ontology and a lexicon of words with optional coercions.

Each word has a main lambda-term and a finite list of optional coercion terms
that turn an object of one sort into the same object seen at another sort. A
coercion flagged ``exclusive`` blocks every other transfer of the same word
occurrence within one composition.

Ontological inclusions (``Brits`` into ``Humans``) are named morphisms that
compose into chains; they are always inserted explicitly into terms.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .builtins import builtin_signature
from .kernel import (
    Abs,
    App,
    Arrow,
    BaseSort,
    Bound,
    Const,
    IllTyped,
    Signature,
    SurfaceParser,
    Term,
    Type,
    UnknownSort,
    format_type,
    is_closed,
    type_of,
)
from .sexpr import Atom, ParseError, located, read_all

DEFAULT_MAX_DEPTH = 3


class LexiconError(ParseError):
    pass


class UnknownWord(LookupError):
    def __init__(self, word: str, where: str | None = None):
        self.word = word
        self.where = where
        super().__init__(f"unknown word {word!r}" + (f" at {where}" if where else ""))


# -- ontology ---------------------------------------------------------------

@dataclass(frozen=True)
class Inclusion:
    sub: str
    sup: str
    morphism: str

    @property
    def type(self) -> Arrow:
        return Arrow(BaseSort(self.sub), BaseSort(self.sup))


class Ontology:
    """Base sorts plus an acyclic graph of named inclusion morphisms."""

    def __init__(self, sorts: Iterable[str], inclusions: Iterable[Inclusion] = ()):
        self.sorts = frozenset(sorts) | {"t"}
        self.inclusions = tuple(sorted(inclusions, key=lambda i: (i.sub, i.sup, i.morphism)))
        graph: dict[str, set[str]] = {s: set() for s in self.sorts}
        for inc in self.inclusions:
            for s in (inc.sub, inc.sup):
                if s not in self.sorts:
                    raise UnknownSort(s, f"in inclusion {inc.morphism}")
            graph[inc.sup].add(inc.sub)
        try:
            tuple(graphlib.TopologicalSorter(graph).static_order())
        except graphlib.CycleError as exc:
            cycle = " -> ".join(exc.args[1])
            raise LexiconError(f"inclusion cycle: {cycle}") from None
        self._out: dict[str, list[Inclusion]] = {s: [] for s in self.sorts}
        for inc in self.inclusions:
            self._out[inc.sub].append(inc)

    def __repr__(self):
        return f"Ontology({len(self.sorts)} sorts, {len(self.inclusions)} inclusions)"

    @property
    def morphisms(self) -> frozenset[str]:
        return frozenset(i.morphism for i in self.inclusions)

    def require(self, *sorts: str) -> None:
        for s in sorts:
            if s not in self.sorts:
                raise UnknownSort(s)

    def chains(self, src: str, dst: str, max_depth: int = DEFAULT_MAX_DEPTH) -> list[tuple[Inclusion, ...]]:
        """Every inclusion path from ``src`` to ``dst`` of length at most ``max_depth``.

        Ordered by length, then by morphism names; the empty path comes first
        when ``src == dst``.
        """
        self.require(src, dst)
        found: list[tuple[Inclusion, ...]] = []

        def walk(sort, path):
            if sort == dst:
                found.append(path)
            if len(path) == max_depth:
                return
            for inc in self._out[sort]:
                walk(inc.sup, path + (inc,))

        walk(src, ())
        found.sort(key=lambda p: (len(p), [i.morphism for i in p]))
        return found

    def reachable(self, src: str, max_depth: int = DEFAULT_MAX_DEPTH) -> list[str]:
        """Sorts reachable from ``src`` by a nonempty chain, sorted by name."""
        self.require(src)
        seen: set[str] = set()
        frontier = [src]
        for _ in range(max_depth):
            frontier = [inc.sup for s in frontier for inc in self._out[s]]
            seen.update(frontier)
        return sorted(seen)


def inclusion_chain(ontology: Ontology, src: str, dst: str, max_depth: int = DEFAULT_MAX_DEPTH) -> list[str] | None:
    """Morphism names of the shortest inclusion path, ``[]`` when equal, else None."""
    paths = ontology.chains(src, dst, max_depth)
    if not paths:
        return None
    return [inc.morphism for inc in paths[0]]


def chain_term(src: str, chain: tuple[Inclusion, ...]) -> Term:
    """``λx:src. m_k(... m_1(x))``; the identity for the empty chain."""
    body: Term = Bound(0, "x")
    for inc in chain:
        body = App(Const(inc.morphism, inc.type), body)
    return Abs("x", BaseSort(src), body)


# -- lexicon ----------------------------------------------------------------

@dataclass(frozen=True)
class Coercion:
    name: str
    term: Term
    exclusive: bool = False

    @cached_property
    def type(self) -> Type:
        return type_of(self.term)


@dataclass(frozen=True)
class LexEntry:
    word: str
    main: Term
    coercions: tuple[Coercion, ...] = ()

    @cached_property
    def main_type(self) -> Type:
        return type_of(self.main)

    def coercions_between(self, src: str, dst: str) -> list[Coercion]:
        want = Arrow(BaseSort(src), BaseSort(dst))
        return [c for c in self.coercions if c.type == want]

    def coercions_from(self, src: str) -> list[Coercion]:
        return [
            c for c in self.coercions
            if isinstance(c.type, Arrow) and c.type.domain == BaseSort(src)
            and isinstance(c.type.codomain, BaseSort)
        ]


class CoercionCandidate(NamedTuple):
    term: Term
    exclusive: bool
    names: tuple[str, ...] = ()
    inclusion: bool = False


def coercion_candidates(
    entry: LexEntry | None,
    ontology: Ontology,
    src: str,
    dst: str,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> list[CoercionCandidate]:
    """Ways to turn a ``src`` object into a ``dst`` one.

    The entry's own coercions of type ``src -> dst`` come first (in lexicon
    order), then inclusion chains by length and name; the identity is the
    empty chain.
    """
    ontology.require(src, dst)
    out: list[CoercionCandidate] = []
    if entry is not None:
        for c in entry.coercions_between(src, dst):
            out.append(CoercionCandidate(c.term, c.exclusive, (c.name,), False))
    for chain in ontology.chains(src, dst, max_depth):
        out.append(CoercionCandidate(chain_term(src, chain), False, tuple(i.morphism for i in chain), True))
    return out


@dataclass(frozen=True)
class Lexicon:
    signature: Signature
    ontology: Ontology
    entries: Mapping[str, LexEntry] = field(default_factory=dict)

    def lookup(self, word: str) -> LexEntry:
        try:
            return self.entries[word]
        except KeyError:
            raise UnknownWord(word) from None

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def replace_entries(self, entries: Mapping[str, LexEntry]) -> Lexicon:
        return Lexicon(self.signature, self.ontology, dict(entries))


def lookup(lexicon: Lexicon, word: str) -> LexEntry:
    return lexicon.lookup(word)


# -- file format ------------------------------------------------------------

def _name(node, what: str) -> str:
    if isinstance(node, list):
        raise located(node, f"expected a {what}, found a list")
    return str(node)


def load_lexicon(*sources: str | Path) -> Lexicon:
    """Load ontology and lexicon directives from texts or file paths.

    Directives are ``(sort S)``, ``(incl Sub Super morph)``, ``(const c TYPE)``
    and ``(word w :main TERM :coercion (name TERM :exclusive?) ...)``. Sorts are
    collected before anything else is read, so directive order does not matter.
    """
    forms = []
    for src in sources:
        text = Path(src).read_text(encoding="utf-8") if isinstance(src, Path) else src
        forms.extend(read_all(text))

    sorts: set[str] = set()
    for form in forms:
        if not isinstance(form, list) or not form:
            raise located(form, "expected a directive")
        if form[0] == "sort":
            if len(form) != 2:
                raise located(form, "expected (sort Name)")
            sorts.add(_name(form[1], "sort name"))

    base = builtin_signature().with_sorts(*sorts)
    parser = SurfaceParser(base, allow_free_type_vars=False)
    consts: dict[str, Type] = {}
    inclusions: list[Inclusion] = []
    for form in forms:
        kind = form[0]
        if kind == "const":
            if len(form) != 3:
                raise located(form, "expected (const name TYPE)")
            name = _name(form[1], "constant name")
            ty = parser.type(form[2])
            if name in consts or name in base:
                raise located(form, f"constant {name} declared twice")
            consts[name] = ty
        elif kind == "incl":
            if len(form) != 4:
                raise located(form, "expected (incl Sub Super morphism)")
            sub, sup, morph = (_name(n, "name") for n in form[1:])
            for s in (sub, sup):
                if s not in sorts:
                    raise UnknownSort(s, f"in inclusion {morph}")
            inclusions.append(Inclusion(sub, sup, morph))
        elif kind not in ("sort", "word"):
            raise located(form, f"unknown directive {kind!r}")

    for inc in inclusions:
        declared = consts.setdefault(inc.morphism, inc.type)
        if declared != inc.type:
            raise LexiconError(
                f"morphism {inc.morphism} is declared at {format_type(declared)}, "
                f"not {format_type(inc.type)}"
            )

    signature = base.extend(consts)
    ontology = Ontology(signature.base_sorts, inclusions)
    parser = SurfaceParser(signature, allow_free_type_vars=False)
    entries: dict[str, LexEntry] = {}
    for form in forms:
        if form[0] != "word":
            continue
        entry = _read_word(form, parser, signature)
        if entry.word in entries:
            raise located(form, f"word {entry.word} defined twice")
        entries[entry.word] = entry
    return Lexicon(signature, ontology, entries)


def _read_word(form, parser: SurfaceParser, signature: Signature) -> LexEntry:
    if len(form) < 2:
        raise located(form, "expected (word name :main TERM ...)")
    word = _name(form[1], "word")
    main = None
    coercions: list[Coercion] = []
    items = list(form[2:])
    mode = None
    for item in items:
        if isinstance(item, Atom) and item.startswith(":"):
            if item not in (":main", ":coercion"):
                raise located(item, f"unknown keyword {item}")
            mode = item
            continue
        if mode == ":main":
            if main is not None:
                raise located(item, f"word {word} has two main terms")
            main = _checked(parser.term(item), signature, item, f"main term of {word}")
        elif mode == ":coercion":
            coercions.append(_read_coercion(item, parser, signature, word))
        else:
            raise located(item, "expected :main or :coercion")
    if main is None:
        raise located(form, f"word {word} has no :main term")
    return LexEntry(word, main, tuple(coercions))


def _read_coercion(node, parser, signature, word) -> Coercion:
    if not isinstance(node, list) or len(node) not in (2, 3):
        raise located(node, "expected (name TERM :exclusive?)")
    name = _name(node[0], "coercion name")
    exclusive = False
    if len(node) == 3:
        if node[2] != ":exclusive":
            raise located(node[2], "expected :exclusive")
        exclusive = True
    term = _checked(parser.term(node[1]), signature, node, f"coercion {name} of {word}")
    ty = type_of(term, signature)
    if not isinstance(ty, Arrow):
        raise located(node, f"coercion {name} of {word} is not a function (type {format_type(ty)})")
    return Coercion(name, term, exclusive)


def _checked(term: Term, signature: Signature, node, what: str) -> Term:
    if not is_closed(term):
        raise located(node, f"{what} is not closed")
    try:
        type_of(term, signature)
    except IllTyped as exc:
        raise located(node, f"{what} is ill typed: {exc}") from None
    return term


def demo_sources() -> tuple[str, str]:
    """Texts of the bundled ontology and lexicon."""
    data = resources.files("specimen") / "data"
    return (data / "ontology.sexp").read_text(encoding="utf-8"), (data / "lexicon.sexp").read_text(encoding="utf-8")


def load_demo() -> Lexicon:
    return load_lexicon(*demo_sources())
