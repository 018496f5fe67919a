import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specimen.builtins import FORALL, POLY_AND, SPECIMEN, builtin_signature
from specimen.kernel import (
    T,
    Abs,
    App,
    ApplicationMismatch,
    Arrow,
    BaseSort,
    Const,
    FuelExhausted,
    GeneralisationViolation,
    NormalForm,
    NotAFunction,
    SpecialisationOfNonPi,
    TyApp,
    TypeMismatch,
    TypeVar,
    UnboundVariable,
    UnknownConstant,
    UnknownSort,
    Var,
    alpha_eq,
    apply,
    forall,
    format_term,
    format_type,
    instantiate,
    is_normal,
    lam,
    normalize,
    normalize_counted,
    parse_term,
    parse_type,
    reduce_step,
    subst_term,
    subst_type,
    tlam,
    type_of,
)
from specimen.kernel.terms import depth
from specimen.sexpr import ParseError

from termgen import SIGNATURE, TermGen, innermost

X, Y = TypeVar("X"), TypeVar("Y")
Book, Brits = BaseSort("Book"), BaseSort("Brits")
E = BaseSort("e")


def seeded():
    return st.randoms(use_true_random=False)


# -- typing -------------------------------------------------------------------

def test_polymorphic_identity_type():
    ident = tlam("X", lam("x", X, Var("x", X)))
    assert type_of(ident) == forall("X", Arrow(X, X))


def test_quantifier_specialisation():
    U = BaseSort("U")
    assert type_of(TyApp(FORALL, U)) == Arrow(Arrow(U, T), T)


def test_specimen_has_its_argument_type():
    assert type_of(TyApp(SPECIMEN, Brits)) == Brits


def test_generalisation_over_free_variable_type_rejected():
    y = Var("y", Arrow(X, T))
    with pytest.raises(GeneralisationViolation) as info:
        type_of(tlam("X", y))
    assert info.value.variable == "y"


def test_generalisation_rejected_through_parser():
    with pytest.raises(GeneralisationViolation):
        type_of(parse_term("(lam y (-> X t) (tlam X y))"))


def test_generalisation_fine_when_variable_is_bound_inside():
    assert type_of(tlam("X", lam("y", X, Var("y", X)))) == forall("X", Arrow(X, X))


def test_unbound_variable_with_environment():
    with pytest.raises(UnboundVariable):
        type_of(Var("x", Book), env={})
    assert type_of(Var("x", Book), env={"x": Book}) == Book


def test_unbound_variable_in_surface_syntax_is_located():
    with pytest.raises(UnboundVariable, match="1:13"):
        parse_term("(lam x Book y)")


def test_unknown_constant():
    with pytest.raises(UnknownConstant):
        type_of(Const("nope", T), builtin_signature())


def test_constant_must_match_signature_type():
    with pytest.raises(UnknownConstant, match="declared"):
        type_of(Const("and", T), builtin_signature())


def test_application_mismatch_reports_both_types():
    p = Const("p", Arrow(Book, T))
    with pytest.raises(ApplicationMismatch) as info:
        type_of(App(p, Const("b", Brits)))
    assert info.value.expected == Book and info.value.found == Brits


def test_not_a_function():
    with pytest.raises(NotAFunction):
        type_of(App(Const("b", Book), Const("b", Book)))


def test_specialisation_of_non_pi():
    with pytest.raises(SpecialisationOfNonPi):
        type_of(TyApp(Const("b", Book), Brits))


def test_unknown_sort_rejected_by_signature():
    sig = builtin_signature()
    with pytest.raises(UnknownSort):
        sig.with_constants(b=Book)
    with pytest.raises(UnknownSort):
        type_of(lam("x", Book, Var("x", Book)), sig)


def test_impredicative_instantiation_allowed():
    pi_x = forall("X", X)
    assert instantiate(pi_x.body, pi_x) == pi_x
    assert type_of(TyApp(SPECIMEN, pi_x)) == pi_x


# -- substitution -----------------------------------------------------------

def test_subst_variable_itself():
    c = Const("c", Book)
    assert subst_term(Var("x", Book), "x", c) == c


def test_subst_avoids_capture():
    body = lam("y", Book, Var("x", Book))
    out = subst_term(body, "x", Var("y", Book))
    assert out == Abs("y'", Book, Var("y", Book))
    assert format_term(out) == "(lam y' Book y)"


def test_subst_requires_declared_type():
    with pytest.raises(TypeMismatch):
        subst_term(Var("x", Book), Var("x", Book), Const("b", Brits))


def test_subst_type_simple():
    assert subst_type(Arrow(X, T), "X", Book) == Arrow(Book, T)


def test_subst_type_avoids_capture():
    out = subst_type(forall("X", Arrow(X, Y)), "Y", X)
    assert format_type(out) == "(pi X' (-> X' X))"
    assert out == forall("Z", Arrow(TypeVar("Z"), X))


def test_subst_type_inside_terms():
    t = lam("x", X, Var("x", X))
    assert subst_type(t, "X", Book) == lam("x", Book, Var("x", Book))


# -- alpha equivalence ------------------------------------------------------

def test_alpha_equivalent_polymorphic_identities():
    a = tlam("X", lam("x", X, Var("x", X)))
    b = tlam("Y", lam("z", Y, Var("z", Y)))
    assert alpha_eq(a, b)


def test_different_annotations_are_not_alpha_equal():
    assert not alpha_eq(lam("x", E, Var("x", E)), lam("x", T, Var("x", T)))


def test_types_alpha_equal():
    assert alpha_eq(forall("X", X), forall("Y", Y))
    assert not alpha_eq(forall("X", Arrow(X, Y)), forall("Y", Arrow(Y, Y)))


# -- reduction --------------------------------------------------------------

def test_beta_step():
    c = Const("c", E)
    assert reduce_step(App(lam("x", E, Var("x", E)), c)) == c


def test_type_beta_step():
    t = TyApp(tlam("X", lam("x", X, Var("x", X))), Book)
    assert reduce_step(t) == lam("x", Book, Var("x", Book))


def test_normal_form_marker():
    assert reduce_step(Const("c", E)) is NormalForm
    assert not NormalForm


def test_reduce_step_checks_types_first():
    bad = App(lam("x", Book, Var("x", Book)), Const("b", Brits))
    with pytest.raises(ApplicationMismatch):
        reduce_step(bad)


def test_leftmost_outermost_order():
    inner = App(lam("y", E, Var("y", E)), Const("c", E))
    outer = App(lam("x", E, Const("d", E)), inner)
    # the outer redex discards the inner one
    assert reduce_step(outer) == Const("d", E)


def test_and_body_shape():
    A, M, B = BaseSort("A"), BaseSort("M"), BaseSort("B")
    i, h = Var("i", Arrow(A, T)), Var("h", Arrow(M, T))
    b, a, m = Var("b", B), Var("a", Arrow(B, A)), Var("m", Arrow(B, M))
    sig = builtin_signature().with_sorts("A", "M", "B")
    full = apply(POLY_AND, A, M, i, h, B, b, a, m)
    expected = apply(Const("and", Arrow(T, Arrow(T, T))), App(h, App(m, b)), App(i, App(a, b)))
    assert normalize(full, signature=sig) == expected


def test_normalize_constant_takes_no_steps():
    c = Const("c", E)
    assert normalize_counted(c) == (c, 0)


def test_fuel_exhausted():
    t = App(lam("x", E, Var("x", E)), App(lam("y", E, Var("y", E)), Const("c", E)))
    assert normalize_counted(t, 2)[1] == 2
    with pytest.raises(FuelExhausted) as info:
        normalize_counted(t, 1)
    assert info.value.steps == 1


def test_fuel_must_be_positive():
    with pytest.raises(ValueError):
        normalize_counted(Const("c", E), 0)


# -- surface syntax ---------------------------------------------------------

@pytest.mark.parametrize(
    "text, expected",
    [
        ("t", "t"),
        ("(-> A B t)", "(-> A (-> B t))"),
        ("(pi X (-> X X))", "(pi X (-> X X))"),
    ],
)
def test_type_syntax(text, expected):
    assert format_type(parse_type(text)) == expected


def test_term_sugar_matches_explicit_forms():
    sig = builtin_signature().with_sorts("Book").with_constants(c=Book, f=Arrow(Book, Arrow(Book, T)))
    sugar = parse_term("((const f) ((tlam X (lam x X x)) {Book} (const c)) (const c))", sig)
    explicit = parse_term("(app (app (const f) (app (tapp (tlam X (lam x X x)) Book) (const c))) (const c))", sig)
    assert sugar == explicit
    assert type_of(sugar, sig) == T


def test_comments_and_whitespace_ignored():
    a = parse_term("; identity\n(tlam X\n  (lam x X x))  ; done")
    assert a == tlam("X", lam("x", X, Var("x", X)))


def test_parse_error_is_located():
    with pytest.raises(ParseError) as info:
        parse_term("(lam x Book x")
    assert info.value.line == 1


def test_unknown_sort_with_signature():
    with pytest.raises(UnknownSort):
        parse_type("Nope", builtin_signature(), allow_free=False)


# -- properties -------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(seeded())
def test_subject_reduction(rng):
    t, ty = TermGen(rng).closed()
    assert type_of(t, SIGNATURE) == ty
    current = t
    while (nxt := reduce_step(current, SIGNATURE)) is not NormalForm:
        assert type_of(nxt, SIGNATURE) == ty
        current = nxt


@settings(max_examples=300, deadline=None)
@given(seeded())
def test_strategies_agree(rng):
    t, _ = TermGen(rng).closed()
    lo = normalize(t, signature=SIGNATURE)
    ri, _ = innermost(t)
    assert alpha_eq(lo, ri)
    assert is_normal(lo)


@settings(max_examples=200, deadline=None)
@given(seeded())
def test_generated_terms_respect_depth_bound(rng):
    t, _ = TermGen(rng).closed()
    assert depth(t) <= 8


@settings(max_examples=300, deadline=None)
@given(seeded())
def test_generalisation_violations_rejected(rng):
    with pytest.raises(GeneralisationViolation):
        type_of(TermGen(rng).violation(), SIGNATURE)


@settings(max_examples=300, deadline=None)
@given(seeded())
def test_substitution_lemma(rng):
    gen = TermGen(rng)
    arg_ty = gen.type([], 2)
    x = Var("x0", arg_ty)
    body_ty = gen.type([], 2)
    body = gen.term(body_ty, [x], [], 6)
    replacement = gen.term(arg_ty, [], [], 6)
    assert type_of(body, SIGNATURE, {"x0": arg_ty}) == body_ty
    out = subst_term(body, x, replacement, SIGNATURE)
    assert type_of(out, SIGNATURE) == body_ty
    # substitution agrees with contracting the corresponding redex
    assert reduce_step(App(lam("x0", arg_ty, body), replacement), SIGNATURE) == out


@settings(max_examples=300, deadline=None)
@given(seeded())
def test_print_parse_round_trip(rng):
    t, _ = TermGen(rng).closed()
    assert parse_term(format_term(t), SIGNATURE) == t


def test_random_generator_is_seed_deterministic():
    def batch():
        gen = TermGen(random.Random(7))
        return [format_term(gen.closed()[0]) for _ in range(20)]

    assert batch() == batch()
