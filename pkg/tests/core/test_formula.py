"""Tests for formula syntax: parsing, rendering and structural queries."""

import pytest

from nckit.core.exceptions import FormulaSyntaxError, LanguageError, UnknownOperatorError
from nckit.core.formula import (
    TOP,
    And,
    BlackTri,
    Box,
    Circ,
    Delta,
    LanguageTag,
    Not,
    Prop,
    as_equivalence,
    as_implication,
    bottom,
    compose_substitutions,
    conjoin,
    diamond,
    first_difference,
    iff,
    implies,
    in_language,
    lor,
    modal_depth,
    parse,
    props_of,
    render,
    substitute,
    subformulas,
)
from nckit.utils.generators import random_formula


p, q, r = Prop("p"), Prop("q"), Prop("r")


def test_parse_noncontingency_conjunction():
    """Test the shape of a conjunction of ▲ formulas."""
    assert parse("#(p -> q) & #p") == And(BlackTri(Not(And(p, Not(q)))), BlackTri(p))


def test_parse_precedence_and_associativity():
    """Test unary > & > | > -> (right) > <->."""
    assert parse("!p & q") == And(Not(p), q)
    assert parse("p & q | r") == lor(And(p, q), r)
    assert parse("p -> q -> r") == implies(p, implies(q, r))
    assert parse("p & q & r") == And(And(p, q), r)
    assert parse("p -> q <-> r") == iff(implies(p, q), r)
    assert parse("p | q -> r") == implies(lor(p, q), r)


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("true", TOP),
        ("T", TOP),
        ("false", Not(TOP)),
        ("[]p", Box(p)),
        ("<>p", Not(Box(Not(p)))),
        ("%p", Delta(p)),
        ("^p", Not(Delta(p))),
        ("o p", Circ(p)),
        ("@p", Not(Circ(p))),
        ("#p", BlackTri(p)),
        ("~p", Not(BlackTri(p))),
        ("#!p", BlackTri(Not(p))),
    ],
)
def test_parse_operators(text, expected):
    """Test every surface operator desugars as documented."""
    assert parse(text) == expected


def test_derived_connectives_never_stored():
    """Test that derived connectives leave only core nodes behind."""
    formula = parse("p | q -> <>r <-> ~p")
    kinds = {type(node).__name__ for node in subformulas(formula)}
    assert kinds <= {"Top", "Prop", "Not", "And", "Box", "Delta", "Circ", "BlackTri"}


def test_atom_names_with_digits_and_underscores():
    """Test atoms follow the identifier pattern."""
    assert parse("p_1 & open") == And(Prop("p_1"), Prop("open"))


def test_unknown_operator_reports_position():
    """Test an unknown operator names itself and its offset."""
    with pytest.raises(UnknownOperatorError) as excinfo:
        parse("p $$ q")
    assert excinfo.value.position == 2
    assert "'$$'" in str(excinfo.value)


def test_syntax_error_lists_expected_tokens():
    """Test unbalanced input reports what would have been accepted."""
    with pytest.raises(FormulaSyntaxError) as excinfo:
        parse("(p & q")
    assert excinfo.value.position == len("(p & q")
    assert ")" in excinfo.value.expected


def test_dangling_operator_is_syntax_error():
    """Test a binary operator without right operand."""
    with pytest.raises(FormulaSyntaxError):
        parse("p &")


def test_reserved_word_is_not_an_atom():
    """Test that 'o' needs an operand."""
    with pytest.raises(FormulaSyntaxError):
        parse("o")


def test_parse_restricted_language():
    """Test parsing into a sublanguage rejects foreign modalities."""
    assert parse("#p & !#q", LanguageTag.BLACKTRI) == And(BlackTri(p), Not(BlackTri(q)))
    with pytest.raises(LanguageError) as excinfo:
        parse("#p & []q", LanguageTag.BLACKTRI)
    assert "[]q" in str(excinfo.value)


@pytest.mark.parametrize(
    "text",
    [
        "#(p -> q) & #p",
        "p -> q -> r",
        "(p -> q) -> r",
        "!(p & q) | r",
        "p <-> q <-> r",
        "<>[]p & ^q",
        "o p -> @!p",
        "~(p | q) -> ~q",
        "false | true",
    ],
)
def test_render_reparses_to_same_tree(text):
    """Test that printing then parsing is the identity on trees."""
    formula = parse(text)
    assert parse(render(formula)) == formula


def test_render_restores_sugar():
    """Test the printer shows derived connectives again."""
    assert render(parse("p -> q")) == "p -> q"
    assert render(parse("p | !q")) == "p | !q"
    assert render(parse("#p <-> #!p")) == "#p <-> #!p"
    assert render(diamond(p)) == "<>p"
    assert render(bottom()) == "false"
    assert str(parse("(p -> q) -> r")) == "(p -> q) -> r"


class TestConnectiveSugar:
    """Trees of the shape ¬(¬φ ∧ ¬ψ) print the way they were written."""

    @pytest.mark.parametrize(
        "text",
        [
            "(p -> q) -> r",
            "!p -> []!p",
            "(p -> []p) & (!p -> []!p)",
            "!p -> !q",
            "p | !q",
            "[]p | []!p",
            "p & !q | r",
            "!(p & q) | r",
        ],
    )
    def test_written_form_is_kept(self, text):
        """Test parsed implications and disjunctions print as written."""
        assert render(parse(text)) == text

    def test_constructors_record_the_connective(self):
        """Test implies and lor print as their own connective."""
        assert render(implies(Not(p), Box(Not(p)))) == "!p -> []!p"
        assert render(lor(p, Box(Not(p)))) == "p | []!p"

    def test_sugar_does_not_affect_equality(self):
        """Test the same tree written both ways is equal and hashes alike."""
        written_as_or = parse("p | q")
        written_as_implication = parse("!p -> q")
        assert written_as_or == written_as_implication
        assert hash(written_as_or) == hash(written_as_implication)
        assert render(written_as_or) != render(written_as_implication)

    def test_bare_negations_fall_back(self):
        """Test trees built from ¬ and ∧ alone print as a disjunction unless nested."""
        assert render(Not(And(Not(p), Not(q)))) == "p | q"
        assert render(Not(And(implies(p, q), Not(r)))) == "(p -> q) -> r"

    def test_substitution_keeps_the_connective(self):
        """Test substituting into an implication keeps it an implication."""
        result = substitute(parse("!p -> []!p"), {"p": q})
        assert render(result) == "!q -> []!q"


def test_render_random_formulas(rng):
    """Test the round trip on seeded random formulas of every sublanguage."""
    for language in (LanguageTag.BOX, LanguageTag.BLACKTRI, LanguageTag.FULL):
        for _ in range(200):
            formula = random_formula(rng, ("p", "q", "r"), depth=3, language=language)
            assert parse(render(formula)) == formula


def test_pattern_helpers():
    """Test implication and equivalence recognition."""
    assert as_implication(implies(p, q)) == (p, q)
    assert as_implication(And(p, q)) is None
    assert as_equivalence(iff(p, q)) == (p, q)
    assert as_equivalence(And(implies(p, q), implies(q, r))) is None


def test_substitute_is_simultaneous():
    """Test atoms are replaced in one pass."""
    formula = parse("#p & #q -> #(p & q)")
    result = substitute(formula, {"p": And(p, q), "q": r})
    assert result == parse("#(p & q) & #r -> #(p & q & r)")


def test_compose_substitutions():
    """Test composition agrees with sequential application."""
    first = {"p": And(q, r)}
    then = {"q": Not(p), "r": TOP}
    formula = parse("#p -> q")
    composed = compose_substitutions(first, then)
    assert substitute(formula, composed) == substitute(substitute(formula, first), then)


def test_structural_queries():
    """Test atoms, subformulas, depth and language membership."""
    formula = parse("#(p -> []q) & r")
    assert props_of(formula) == frozenset({"p", "q", "r"})
    assert modal_depth(formula) == 2
    assert Box(q) in subformulas(formula)
    assert in_language(formula, LanguageTag.FULL)
    assert not in_language(formula, LanguageTag.BLACKTRI)
    assert in_language(parse("p & !q"), LanguageTag.PL)


def test_conjoin():
    """Test left-nested conjunction with ⊤ for the empty case."""
    assert conjoin([]) == TOP
    assert conjoin([p, q, r]) == And(And(p, q), r)


def test_first_difference():
    """Test the path to the first differing subtree."""
    expected = parse("#p & p -> #(p | q)")
    actual = parse("#p & p -> #(p | r)")
    path, want, got = first_difference(expected, actual)
    assert (want, got) == (q, r)
    assert path.startswith("operand.")
    assert first_difference(expected, expected) is None
    assert first_difference(p, q) == (".", p, q)


def test_operator_overloads():
    """Test Python operators build desugared trees."""
    assert (p & q) == And(p, q)
    assert (p | q) == lor(p, q)
    assert (~p) == Not(p)
    assert (p >> q) == implies(p, q)


def test_formulas_are_hashable_values():
    """Test structurally equal trees compare and hash equal."""
    seen = {parse("#p & q"), parse("#p&q")}
    assert len(seen) == 1
    assert seen == {And(BlackTri(p), q)}
