"""Tests for proof script parsing and checking."""

import logging

import pytest

from nckit.core.exceptions import BudgetExceededError, ProofScriptError
from nckit.core.formula import Prop, parse
from nckit.core.proof import (
    SYSTEMS,
    ProofScript,
    axiom_instance,
    check_line,
    check_script,
    get_system,
    is_tautology_instance,
    load_script,
)
from nckit.core.semantics import valid_on_model
from nckit.types.result_types import RejectionKind
from nckit.utils.generators import random_model


SHIPPED = [
    "k_agreement",
    "k_conjunction",
    "k_equivalents",
    "k_necessitation",
    "kb_top",
    "la_rules",
]


def _check(text, system=None):
    return check_script(ProofScript.parse(text, system=system))


class TestShippedScripts:
    """The derivations under proofs/."""

    @pytest.mark.parametrize("name", SHIPPED)
    def test_checks(self, proofs_dir, name):
        """Test every line of the script is accepted."""
        report = check_script(load_script(proofs_dir / f"{name}.proof"))
        assert report.ok, [v.reason for v in report.rejected]
        assert report.theorems

    @pytest.mark.parametrize("name", SHIPPED)
    def test_theorems_are_valid(self, proofs_dir, rng, name):
        """Test established theorems hold on random models of the system's frame class."""
        script = load_script(proofs_dir / f"{name}.proof")
        report = check_script(script)
        frame_class = SYSTEMS[report.system].frame_class
        for i in range(200):
            m = random_model(rng, 1 + i % 5, ("p", "q", "r"), frame_class)
            for theorem in report.theorems:
                assert valid_on_model(m, theorem), f"{theorem} fails on {m.to_json()}"

    @pytest.mark.parametrize("name", SHIPPED)
    def test_corrupted_last_line_is_rejected(self, proofs_dir, name):
        """Test conjoining a fresh atom to the final line is caught by its own rule."""
        lines = (proofs_dir / f"{name}.proof").read_text().rstrip("\n").split("\n")
        statement, justification = lines[-1].split(" ; ")
        index, text = statement.split(". ", 1)
        lines[-1] = f"{index}. ({text}) & z ; {justification}"
        (verdict,) = check_script(ProofScript.parse("\n".join(lines))).rejected
        assert verdict.index == int(index)
        assert verdict.kind is RejectionKind.MISMATCH
        assert verdict.rule == justification.split("(")[0]

    def test_agreement_axiom_derived_in_k(self, proofs_dir):
        """Test the last theorem is the agreement axiom of LA."""
        report = check_script(load_script(proofs_dir / "k_agreement.proof"))
        assert report.system == "K"
        assert report.theorems[-1] == SYSTEMS["LA"].axioms["A3"]

    def test_top_in_kb_without_top_axiom(self, proofs_dir):
        """Test #true is established in KB from #B alone."""
        script = load_script(proofs_dir / "kb_top.proof")
        assert all(line.justification.label != "#T" for line in script.lines)
        report = check_script(script)
        assert report.theorems[-1] == parse("#true")

    def test_system_override(self, proofs_dir):
        """Test the caller's system wins over the header."""
        script = load_script(proofs_dir / "k_necessitation.proof", system="KB")
        assert script.system == "KB"
        assert check_script(script).ok


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_axioms_sound_for_frame_class(rng, name):
    """Test every axiom schema holds on random models of the system's frames."""
    system = SYSTEMS[name]
    for i in range(200):
        m = random_model(rng, 1 + i % 5, ("p", "q", "r"), system.frame_class)
        for label, schema in system.axioms.items():
            assert valid_on_model(m, schema), f"{name} {label} fails on {m.to_json()}"


class TestRejections:
    """Lines the checker must refuse, with the reason kind."""

    def test_rule_output_mismatch(self):
        """Test R with the wrong consequent reports the differing subtree."""
        report = _check("1. p -> p | q ; Taut\n2. #p & p -> #(p | r) ; R(1)")
        (verdict,) = report.rejected
        assert verdict.index == 2
        assert verdict.kind is RejectionKind.MISMATCH
        assert "differs at" in verdict.reason

    def test_not_a_tautology(self):
        """Test Taut on a contingent formula."""
        (verdict,) = _check("1. p -> q ; Taut").rejected
        assert verdict.kind is RejectionKind.MISMATCH

    def test_modal_principle_is_not_a_tautology(self):
        """Test ▲p → p is not accepted as Taut."""
        (verdict,) = _check("1. #p -> p ; Taut").rejected
        assert verdict.kind is RejectionKind.MISMATCH

    def test_foreign_modality(self):
        """Test formulas with □ are rejected."""
        (verdict,) = _check("1. []p -> []p ; Taut").rejected
        assert verdict.kind is RejectionKind.MISMATCH
        assert "L(▲)" in verdict.reason

    @pytest.mark.parametrize(
        "text",
        [
            "1. p | !p ; Taut\n2. #(p | !p) ; MP(1)",
            "1. p | !p ; Taut\n2. q ; MP(1,5)",
            "1. p | !p ; Taut\n2. q ; MP(2,1)",
            "1. #true ; Axiom",
            "1. p | !p ; Taut(1)",
        ],
    )
    def test_malformed_references(self, text):
        """Test wrong arity, forward references and missing labels."""
        verdicts = _check(text).rejected
        assert verdicts[-1].kind is RejectionKind.MALFORMED_REFERENCE

    @pytest.mark.parametrize(
        ("text", "system"),
        [
            ("1. #p -> ##p ; Axiom(#4)", "K"),
            ("1. p | !p ; Taut\n2. #(p | !p) ; RTri(1)", "K"),
            ("1. p | !p ; Frobnicate", "K"),
            ("1. p -> p | q ; Taut\n2. #p & p -> #(p | q) ; R(1)", "LA"),
        ],
    )
    def test_unknown_rules(self, text, system):
        """Test rules and axioms outside the system."""
        verdicts = _check(text, system).rejected
        assert verdicts[-1].kind is RejectionKind.UNKNOWN_RULE

    def test_extension_axiom_in_its_system(self):
        """Test #4 is accepted in K4."""
        assert _check("1. #p -> ##p ; Axiom(#4)", "K4").ok

    def test_rejections_are_logged(self, caplog):
        """Test rejected lines are logged at INFO."""
        with caplog.at_level(logging.INFO, logger="nckit.core.proof"):
            _check("1. p -> q ; Taut")
        assert "Line 1 rejected (mismatch)" in caplog.text

    def test_rule_on_premise(self):
        """Test R may not be applied to a line depending on a premise."""
        (verdict,) = _check("1. p -> q ; Premise\n2. #p & p -> #q ; R(1)").rejected
        assert verdict.kind is RejectionKind.PREMISE_DEPENDENCY
        assert verdict.premise_dependent

    def test_modus_ponens_on_premise(self):
        """Test MP propagates premise dependency without rejecting."""
        report = _check("1. p ; Premise\n2. p -> p | q ; Taut\n3. p | q ; MP(1,2)")
        assert report.ok
        assert [v.premise_dependent for v in report.verdicts] == [True, False, True]
        assert report.theorems == [parse("p -> p | q")]

    def test_explicit_substitution_must_match(self):
        """Test Axiom with a substitution yielding another formula."""
        (verdict,) = _check("1. #q <-> #!q ; Axiom(#!, p:=q)").rejected
        assert verdict.kind is RejectionKind.MISMATCH

    def test_rejected_lines_do_not_establish_theorems(self):
        """Test a line citing a rejected line is not a theorem."""
        report = _check("1. p -> q ; Taut\n2. q ; MP(3,1)\n3. p ; Taut")
        assert not report.ok
        assert report.theorems == []

    def test_uniform_substitution(self):
        """Test US applies the written substitution."""
        text = "1. #p & #q -> #(p & q) ; Axiom(#&)\n2. #r & #q -> #(r & q) ; US(1, p:=r)"
        assert _check(text).ok
        bad = "1. #p & #q -> #(p & q) ; Axiom(#&)\n2. #r & #q -> #(q & r) ; US(1, p:=r)"
        assert _check(bad).rejected[0].kind is RejectionKind.MISMATCH


class TestScriptParsing:
    """Script syntax errors."""

    @pytest.mark.parametrize(
        "text",
        [
            "1 p ; Taut",
            "1. p & ; Taut",
            "2. p | !p ; Taut\n1. p | !p ; Taut",
            "1. p | !p ; Taut\nsystem: K",
            "system: S4\n1. p | !p ; Taut",
            "1. #p ; Axiom(#!, p:=&)",
        ],
    )
    def test_parse_errors(self, text):
        """Test malformed scripts raise ProofScriptError."""
        with pytest.raises(ProofScriptError):
            ProofScript.parse(text)

    def test_error_carries_line_number(self):
        """Test the failing source line is reported."""
        with pytest.raises(ProofScriptError) as excinfo:
            ProofScript.parse("-- header\nsystem: K\n\n1 p ; Taut")
        assert excinfo.value.line_number == 4

    def test_justification_arguments(self):
        """Test labels, references and substitutions are parsed."""
        script = ProofScript.parse("1. #(p & q) <-> #!(p & q) ; Axiom(#!, p:=(p & q))")
        just = script.lines[0].justification
        assert just.label == "#!"
        assert just.substitution == {"p": parse("p & q")}
        assert str(just) == "Axiom(#!, p:=p & q)"

    def test_rule_names_are_case_insensitive(self):
        """Test aliases and case variants."""
        assert _check("1. p | !p ; taut\n2. q | !q ; PL").ok

    def test_missing_file(self, tmp_path):
        """Test unreadable scripts raise ProofScriptError."""
        with pytest.raises(ProofScriptError):
            load_script(tmp_path / "missing.proof")

    def test_unknown_system(self):
        """Test system lookup."""
        assert get_system("KB5").name == "KB5"
        with pytest.raises(ProofScriptError):
            get_system("S5")


def test_check_line():
    """Test a single line is checked in the context of its script."""
    script = ProofScript.parse("1. p -> p | q ; Taut\n2. #p & p -> #(p | q) ; R(1)")
    assert check_line(script, 2).ok
    with pytest.raises(ProofScriptError):
        check_line(script, 3)


def test_axiom_instance():
    """Test structural matching of schemas."""
    schema = parse("#p -> ##p")
    assert axiom_instance(schema, parse("#(q & r) -> ##(q & r)")) == {"p": parse("q & r")}
    assert axiom_instance(schema, parse("#q -> ##r")) is None
    assert axiom_instance(schema, parse("#q -> #q")) is None
    assert axiom_instance(parse("#true"), parse("#true")) == {}
    assert axiom_instance(Prop("p"), parse("#q")) == {"p": parse("#q")}


def test_tautology_instances():
    """Test modal subformulas count as variables."""
    assert is_tautology_instance(parse("#p | !#p"))
    assert is_tautology_instance(parse("(#p -> []q) -> !#p | []q"))
    assert is_tautology_instance(parse("true"))
    assert not is_tautology_instance(parse("#p -> #!p"))
    assert not is_tautology_instance(parse("false"))


def test_truth_table_budget():
    """Test the variable cap."""
    formula = parse("p | q | r | s | u | !p")
    assert is_tautology_instance(formula, max_atoms=5)
    with pytest.raises(BudgetExceededError):
        is_tautology_instance(formula, max_atoms=4)
    report = check_script(ProofScript.parse("1. p | q | r | s | u | !p ; Taut"), max_atoms=5)
    assert report.ok
