import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from specimen.kernel import Arrow, BaseSort, Const, UnknownSort, type_of
from specimen.lexicon import (
    Inclusion,
    LexiconError,
    Ontology,
    UnknownWord,
    coercion_candidates,
    inclusion_chain,
    load_lexicon,
    lookup,
)
from specimen.sexpr import ParseError

TINY_ONTOLOGY = """
(sort A) (sort B) (sort C) (sort D)
(incl A B ab) (incl B C bc) (incl C D cd) (incl A C ac)
"""


def test_lookup_carlotta(lex):
    entry = lookup(lex, "Carlotta")
    assert entry.main == Const("Carlotta", BaseSort("2yoGirl"))
    [h] = entry.coercions
    assert h.name == "h"
    assert h.type == Arrow(BaseSort("2yoGirl"), BaseSort("human"))


def test_lookup_book_coercions(lex):
    entry = lex.lookup("book")
    assert [(c.name, c.type) for c in entry.coercions] == [
        ("to_contents", Arrow(BaseSort("Book"), BaseSort("Abstract"))),
        ("to_material", Arrow(BaseSort("Book"), BaseSort("Material"))),
    ]


def test_lookup_unknown_word(lex):
    with pytest.raises(UnknownWord):
        lookup(lex, "zzz")
    assert "zzz" not in lex


def test_exclusive_flag_loaded(lex):
    flags = {c.name: c.exclusive for c in lex.lookup("Liverpool").coercions}
    assert flags == {"to_location": False, "to_people": False, "to_team": True}


@pytest.mark.parametrize(
    "src, dst, expected",
    [
        ("Brits", "Animals", ["h", "a"]),
        ("Brits", "Brits", []),
        ("Animals", "Brits", None),
        ("Brits", "Humans", ["h"]),
    ],
)
def test_inclusion_chain(lex, src, dst, expected):
    assert inclusion_chain(lex.ontology, src, dst) == expected


def test_inclusion_chain_depth_bound(lex):
    assert inclusion_chain(lex.ontology, "Brits", "Animals", max_depth=1) is None
    assert inclusion_chain(lex.ontology, "Brits", "Animals", max_depth=2) == ["h", "a"]


def test_inclusion_chain_unknown_sort(lex):
    with pytest.raises(UnknownSort):
        inclusion_chain(lex.ontology, "Brits", "Martians")


def test_morphisms_registered_in_signature(lex):
    for inc in lex.ontology.inclusions:
        assert lex.signature[inc.morphism] == inc.type


def test_book_to_material_candidates(lex):
    [cand] = coercion_candidates(lex.lookup("book"), lex.ontology, "Book", "Material")
    assert cand.names == ("to_material",)
    assert not cand.exclusive


def test_identity_candidate(lex):
    [cand] = coercion_candidates(lex.lookup("book"), lex.ontology, "Book", "Book")
    assert cand.names == () and cand.inclusion
    assert type_of(cand.term) == Arrow(BaseSort("Book"), BaseSort("Book"))


def test_table_cannot_become_a_dog(lex):
    assert coercion_candidates(lex.lookup("table"), lex.ontology, "Table", "Dogs") == []


def test_candidates_order_lexical_then_chains():
    lex = load_lexicon(TINY_ONTOLOGY, "(word w :main (const ab) :coercion (direct (const ac)))")
    names = [c.names for c in coercion_candidates(lex.lookup("w"), lex.ontology, "A", "D")]
    assert names == [("ac", "cd"), ("ab", "bc", "cd")]
    names = [c.names for c in coercion_candidates(lex.lookup("w"), lex.ontology, "A", "C")]
    assert names == [("direct",), ("ac",), ("ab", "bc")]


def test_all_candidates_type_check(lex):
    sorts = sorted(lex.ontology.sorts)
    for word, entry in sorted(lex.entries.items()):
        for src, dst in itertools.product(sorts, sorts):
            for cand in coercion_candidates(entry, lex.ontology, src, dst):
                assert type_of(cand.term, lex.signature) == Arrow(BaseSort(src), BaseSort(dst)), (word, src, dst)


def test_cycle_rejected():
    with pytest.raises(LexiconError, match="cycle"):
        Ontology({"A", "B"}, [Inclusion("A", "B", "f"), Inclusion("B", "A", "g")])


def test_inclusion_between_unknown_sorts_rejected():
    with pytest.raises(UnknownSort):
        load_lexicon("(sort A) (incl A Z m)")


def test_morphism_declared_at_wrong_type_rejected():
    with pytest.raises(LexiconError):
        load_lexicon("(sort A) (sort B) (const m (-> B A)) (incl A B m)")


@pytest.mark.parametrize(
    "text, message",
    [
        ("(sort A) (const a A) (word w :main (const a)) (word w :main (const a))", "twice"),
        ("(sort A) (const p (-> A t)) (word w :main ((const p) (const p)))", "ill typed"),
        ("(sort A) (word w :coercion (c (lam x A x)))", "no :main"),
        ("(sort A) (const a A) (word w :main (const a) :coercion (c (const a)))", "not a function"),
        ("(sort A) (frobnicate)", "unknown directive"),
        ("(sort A) (const a A) (word w :main (const a) :colour red)", "unknown keyword"),
    ],
)
def test_bad_lexicons(text, message):
    with pytest.raises(ParseError, match=message):
        load_lexicon(text)


def test_unknown_sort_in_constant():
    with pytest.raises(UnknownSort):
        load_lexicon("(const a Nowhere)")


def test_directive_order_is_irrelevant():
    parts = ["(word w :main (const a))", "(const a A)", "(sort A)"]
    assert load_lexicon(*parts).lookup("w") == load_lexicon(*reversed(parts)).lookup("w")


# -- ontology properties ------------------------------------------------------

SORTS = ["A", "B", "C", "D", "E"]


@st.composite
def dags(draw):
    # edges only go forward in SORTS, so the graph is acyclic
    pairs = [(a, b) for i, a in enumerate(SORTS) for b in SORTS[i + 1:]]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=8))
    return Ontology(SORTS, [Inclusion(a, b, f"{a.lower()}{b.lower()}") for a, b in chosen])


@given(dags(), st.sampled_from(SORTS))
def test_reflexive_chain_is_empty(onto, s):
    assert inclusion_chain(onto, s, s) == []


@given(dags(), st.sampled_from(SORTS), st.sampled_from(SORTS), st.sampled_from(SORTS))
def test_chains_compose(onto, a, b, c):
    ab = inclusion_chain(onto, a, b, 10)
    bc = inclusion_chain(onto, b, c, 10)
    if ab is not None and bc is not None:
        ac = inclusion_chain(onto, a, c, 10)
        assert ac is not None and len(ac) <= len(ab) + len(bc)


@given(dags(), st.sampled_from(SORTS))
def test_no_sort_reaches_itself(onto, s):
    assert s not in onto.reachable(s, 10)
    assert all(len(p) == 0 for p in onto.chains(s, s, 10))


@given(dags(), st.sampled_from(SORTS), st.sampled_from(SORTS), st.integers(0, 4))
def test_chains_are_shortest_first_and_bounded(onto, a, b, depth):
    paths = onto.chains(a, b, depth)
    assert [len(p) for p in paths] == sorted(len(p) for p in paths)
    assert all(len(p) <= depth for p in paths)
    for p in paths:
        sorts = [a] + [inc.sup for inc in p]
        assert sorts[-1] == b
        assert all(inc.sub == s for inc, s in zip(p, sorts))
