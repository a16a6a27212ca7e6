"""Tests for the translations between sublanguages."""

import pytest

from nckit.core.exceptions import TranslationError
from nckit.core.formula import And, BlackTri, LanguageTag, in_language, parse
from nckit.core.kripke import FrameProperty
from nckit.core.semantics import truth_set
from nckit.core.translate import to_blacktri, to_box, to_circ
from nckit.utils.generators import random_formula, random_model


@pytest.mark.parametrize(
    ("source", "expected"),
    [
        ("#p", "(p -> []p) & (!p -> []!p)"),
        ("%p", "[]p | []!p"),
        ("o p", "p -> []p"),
        ("[]p & q", "[]p & q"),
        ("!!p", "!!p"),
    ],
)
def test_to_box_rules(source, expected):
    """Test each modality is compiled literally."""
    assert to_box(parse(source)) == parse(expected)


def test_to_blacktri_and_to_circ_rules():
    """Test the rules into L(▲) and L(∘)."""
    assert to_blacktri(parse("[]p")) == parse("#p & p")
    assert to_blacktri(parse("#[]p")) == parse("#(#p & p)")
    assert to_circ(parse("#p")) == parse("o p & o !p")
    assert to_circ(parse("o #p")) == parse("o(o p & o !p)")


def test_to_box_preserves_truth(rng):
    """Test to_box agrees with its input at every world."""
    for i in range(500):
        m = random_model(rng, 1 + i % 5, ("p", "q", "r"))
        formula = random_formula(rng, ("p", "q", "r"), depth=3, language=LanguageTag.FULL)
        translated = to_box(formula)
        assert in_language(translated, LanguageTag.BOX)
        assert truth_set(m, translated) == truth_set(m, formula)


def test_to_blacktri_preserves_truth_on_reflexive_models(rng):
    """Test to_blacktri on reflexive models."""
    for i in range(500):
        m = random_model(rng, 1 + i % 5, ("p", "q"), [FrameProperty.REFLEXIVE])
        formula = random_formula(rng, ("p", "q"), depth=3, language=LanguageTag.BOX)
        translated = to_blacktri(formula)
        assert in_language(translated, LanguageTag.BLACKTRI)
        assert truth_set(m, translated) == truth_set(m, formula)


def test_to_blacktri_fails_off_reflexive_models(model):
    """Test □p and its translation differ at a dead end where p is false."""
    m = model("delta_not_tri")
    formula = parse("[]p")
    assert "t" in truth_set(m, formula)
    assert "t" not in truth_set(m, to_blacktri(formula))


def test_to_circ_preserves_truth(rng):
    """Test to_circ agrees with its input at every world."""
    for i in range(300):
        m = random_model(rng, 1 + i % 5, ("p", "q"))
        formula = random_formula(rng, ("p", "q"), depth=3, language=LanguageTag.BLACKTRI)
        translated = to_circ(formula)
        assert in_language(translated, LanguageTag.CIRC)
        assert truth_set(m, translated) == truth_set(m, formula)


@pytest.mark.parametrize(
    ("translate", "source"),
    [
        (to_blacktri, "%p"),
        (to_blacktri, "#(o p)"),
        (to_circ, "[]p"),
        (to_circ, "#p & %q"),
    ],
)
def test_outside_domain(translate, source):
    """Test foreign modalities raise TranslationError."""
    with pytest.raises(TranslationError):
        translate(parse(source))


def test_shared_subtrees_stay_shared():
    """Test a subtree appearing twice is translated once."""
    inner = BlackTri(parse("p & q"))
    result = to_box(And(inner, inner))
    assert result.left is result.right
