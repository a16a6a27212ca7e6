"""Hilbert-style derivation checking for L(▲).

A proof script is plain text::

    system: K
    -- comments start with two dashes
    1. p -> p | q ; Taut
    2. #p & p -> #(p | q) ; R(1)
    3. #!p <-> #p ; Axiom(#!, p:=p)

Every line carries an index, a formula and a justification. Justifications
name a rule and its arguments: earlier line indices, an axiom label and
substitutions written ``atom:=formula``.

Checking is a pure function of the script. Each line gets a ``LineVerdict``;
a rejected line names its rejection kind and, for mismatches, the first place
where the expected and the written formula differ.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path

from nckit.types.result_types import LineVerdict, ProofReport, RejectionKind

from .exceptions import BudgetExceededError, FormulaSyntaxError, ProofScriptError
from .formula import (
    And,
    BlackTri,
    Formula,
    LanguageTag,
    Modal,
    Not,
    Prop,
    Top,
    Unary,
    as_equivalence,
    as_implication,
    first_difference,
    iff,
    implies,
    in_language,
    parse,
    render,
    substitute,
)
from .kripke import FrameProperty


logger = logging.getLogger(__name__)

DEFAULT_TRUTH_TABLE_MAX_ATOMS = 22


class Rule(str, Enum):
    """Justifications a proof line may cite."""

    AXIOM = "Axiom"
    TAUT = "Taut"
    US = "US"
    MP = "MP"
    R = "R"
    RTRI = "RTri"
    RE = "RE"
    PREMISE = "Premise"

    @classmethod
    def lookup(cls, name: str) -> Rule | None:
        """Rule for a written name, case-insensitively; None when unknown."""
        key = name.lower()
        for rule in cls:
            if rule.value.lower() == key:
                return rule
        return _RULE_ALIASES.get(key)


_RULE_ALIASES = {"pl": Rule.TAUT, "tautology": Rule.TAUT, "premiss": Rule.PREMISE}

# Rules that may only be applied to lines derived without premises.
PROOF_ONLY_RULES = frozenset({Rule.US, Rule.R, Rule.RTRI, Rule.RE})

_ARITY: dict[Rule, int] = {Rule.MP: 2, Rule.US: 1, Rule.R: 1, Rule.RTRI: 1, Rule.RE: 1}


@dataclass(frozen=True)
class AxiomSystem:
    """Axiom schemas, admitted rules and the frame class the system is sound for."""

    name: str
    axioms: Mapping[str, Formula]
    rules: frozenset[Rule]
    frame_class: frozenset[FrameProperty] = frozenset()
    description: str = ""

    def admits(self, rule: Rule) -> bool:
        """Axiom and Premise are available in every system."""
        return rule in (Rule.AXIOM, Rule.PREMISE) or rule in self.rules


def _schemas(**texts: str) -> dict[str, Formula]:
    return {label: parse(text) for label, text in texts.items()}


_K_AXIOMS = {"#T": "#true", "#!": "#!p <-> #p", "#&": "#p & #q -> #(p & q)"}
_EXTENSION_AXIOMS = {
    "#4": "#p -> ##p",
    "#B": "p -> #(#p -> p)",
    "#5": "!#p -> #!#p",
    "#5'": "p & !#p -> #(p & #p)",
}
_LA_AXIOMS = {
    "A1": "#p -> #!p",
    "A2": "#p & ~(p | q) -> ~q",
    "A3": "#p -> p & #(p | q) | !p & #(!p | r)",
    "A3a": "#p -> #(p | q) | !p & #(!p | r)",
    "A3b": "#p -> p & #(p | q) | #(!p | r)",
}

_K_RULES = frozenset({Rule.TAUT, Rule.US, Rule.MP, Rule.R})


def _k_extension(
    name: str,
    labels: tuple[str, ...],
    frames: frozenset[FrameProperty],
    description: str,
) -> AxiomSystem:
    texts = dict(_K_AXIOMS)
    texts.update({label: _EXTENSION_AXIOMS[label] for label in labels})
    return AxiomSystem(name, _schemas(**texts), _K_RULES, frames, description)


_SYMMETRIC_EUCLIDEAN = frozenset({FrameProperty.SYMMETRIC, FrameProperty.EUCLIDEAN})

SYSTEMS: dict[str, AxiomSystem] = {
    system.name: system
    for system in (
        _k_extension("K", (), frozenset(), "minimal logic, all frames"),
        _k_extension("K4", ("#4",), frozenset({FrameProperty.TRANSITIVE}), "transitive frames"),
        _k_extension("KB", ("#B",), frozenset({FrameProperty.SYMMETRIC}), "symmetric frames"),
        _k_extension("KB5", ("#B", "#5"), _SYMMETRIC_EUCLIDEAN, "symmetric Euclidean frames"),
        _k_extension("KB5'", ("#B", "#5'"), _SYMMETRIC_EUCLIDEAN, "symmetric Euclidean frames"),
        _k_extension(
            "K5'",
            ("#5'",),
            frozenset({FrameProperty.EUCLIDEAN}),
            "Euclidean frames, soundness only",
        ),
        AxiomSystem(
            "LA",
            _schemas(**_LA_AXIOMS),
            frozenset({Rule.TAUT, Rule.MP, Rule.RTRI, Rule.RE}),
            frozenset(),
            "agreement-operator axiomatization, all frames",
        ),
    )
}


def get_system(name: str) -> AxiomSystem:
    """Look up a system by name.

    Raises:
        ProofScriptError: if no system has that name.
    """
    try:
        return SYSTEMS[name]
    except KeyError:
        known = ", ".join(SYSTEMS)
        raise ProofScriptError(f"unknown axiom system {name!r}; known: {known}") from None


@dataclass(frozen=True)
class Justification:
    """Rule name as written plus its parsed arguments."""

    rule_name: str
    refs: tuple[int, ...] = ()
    label: str | None = None
    substitution: Mapping[str, Formula] = field(default_factory=dict, hash=False)

    @property
    def rule(self) -> Rule | None:
        """The rule, or None when the name is not a known rule."""
        return Rule.lookup(self.rule_name)

    def __str__(self) -> str:
        args = [str(ref) for ref in self.refs]
        if self.label is not None:
            args.insert(0, self.label)
        args.extend(f"{atom}:={render(image)}" for atom, image in self.substitution.items())
        return f"{self.rule_name}({', '.join(args)})" if args else self.rule_name


@dataclass(frozen=True)
class ProofLine:
    """One numbered step of a derivation."""

    index: int
    formula: Formula
    justification: Justification
    line_number: int = 0


_LINE = re.compile(r"^\s*(\d+)\s*\.\s*(.+?)\s*;\s*([A-Za-z][A-Za-z0-9]*)\s*(?:\((.*)\))?\s*$")
_HEADER = re.compile(r"^\s*system\s*:\s*(\S+)\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class ProofScript:
    """A parsed derivation in a named axiom system."""

    system: str
    lines: tuple[ProofLine, ...]

    @cached_property
    def by_index(self) -> Mapping[int, int]:
        """Position of every line index."""
        return {line.index: position for position, line in enumerate(self.lines)}

    @classmethod
    def parse(cls, text: str, *, system: str | None = None) -> ProofScript:
        """Parse script text.

        Args:
            text: Script source.
            system: System name overriding the ``system:`` header; ``K`` when
                neither is given.

        Raises:
            ProofScriptError: on a line that does not have the line shape, a
                formula that does not parse, or non-increasing indices.
        """
        header: str | None = None
        lines: list[ProofLine] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("--"):
                continue
            match = _HEADER.match(stripped)
            if match:
                if lines or header is not None:
                    raise ProofScriptError("system header must come first", line_number=number)
                header = match.group(1)
                continue
            line = _parse_line(stripped, number)
            if lines and line.index <= lines[-1].index:
                raise ProofScriptError(
                    f"line index {line.index} does not follow {lines[-1].index}",
                    line_number=number,
                )
            lines.append(line)
        name = system or header or "K"
        get_system(name)
        return cls(name, tuple(lines))


def load_script(path: Path | str, *, system: str | None = None) -> ProofScript:
    """Read and parse a proof script file.

    Raises:
        ProofScriptError: if the file cannot be read or parsed.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ProofScriptError(f"cannot read proof script {path}: {e}") from e
    return ProofScript.parse(text, system=system)


def _parse_line(text: str, number: int) -> ProofLine:
    match = _LINE.match(text)
    if not match:
        raise ProofScriptError(
            f"expected '<index>. <formula> ; <rule>[(<args>)]', got {text!r}",
            line_number=number,
        )
    index_text, formula_text, rule_name, arg_text = match.groups()
    try:
        formula = parse(formula_text)
    except FormulaSyntaxError as e:
        raise ProofScriptError(str(e), line_number=number) from e
    refs: list[int] = []
    label: str | None = None
    substitution: dict[str, Formula] = {}
    for arg in _split_args(arg_text or ""):
        if ":=" in arg:
            atom, _, image = arg.partition(":=")
            atom = atom.strip()
            try:
                Prop(atom)
                substitution[atom] = parse(image)
            except FormulaSyntaxError as e:
                raise ProofScriptError(f"bad substitution {arg!r}: {e}", line_number=number) from e
        elif arg.isdigit():
            refs.append(int(arg))
        elif label is None and not refs:
            label = arg
        else:
            raise ProofScriptError(f"unexpected argument {arg!r}", line_number=number)
    justification = Justification(rule_name, tuple(refs), label, substitution)
    return ProofLine(int(index_text), formula, justification, number)


def _split_args(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for char in text:
        if char == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
            continue
        depth += {"(": 1, ")": -1}.get(char, 0)
        current.append(char)
    tail = "".join(current).strip()
    if tail or parts:
        parts.append(tail)
    return [part for part in parts if part]


def axiom_instance(schema: Formula, candidate: Formula) -> dict[str, Formula] | None:
    """The substitution turning ``schema`` into ``candidate``, or None.

    Matching is structural; each schematic atom is bound at its first
    occurrence and must match the same subtree everywhere else.
    """
    binding: dict[str, Formula] = {}
    stack = [(schema, candidate)]
    while stack:
        pattern, target = stack.pop()
        if isinstance(pattern, Prop):
            bound = binding.setdefault(pattern.name, target)
            if bound != target:
                return None
        elif type(pattern) is not type(target):
            return None
        elif isinstance(pattern, Unary) and isinstance(target, Unary):
            stack.append((pattern.operand, target.operand))
        elif isinstance(pattern, And) and isinstance(target, And):
            stack.append((pattern.right, target.right))
            stack.append((pattern.left, target.left))
    return binding


def is_tautology_instance(
    formula: Formula,
    *,
    max_atoms: int = DEFAULT_TRUTH_TABLE_MAX_ATOMS,
) -> bool:
    """True when ``formula`` is a substitution instance of a propositional tautology.

    Maximal modal subformulas and atoms become propositional variables and
    the resulting formula is truth-tabled, one bit per row.

    Raises:
        BudgetExceededError: if there are more than ``max_atoms`` variables.
    """
    variables: dict[Formula, int] = {}

    def collect(node: Formula) -> None:
        if isinstance(node, (Prop, Modal)):
            variables.setdefault(node, len(variables))
        elif isinstance(node, Not):
            collect(node.operand)
        elif isinstance(node, And):
            collect(node.left)
            collect(node.right)

    collect(formula)
    count = len(variables)
    if count > max_atoms:
        raise BudgetExceededError("truth table", 1 << count, 1 << max_atoms)
    rows = 1 << count
    full = (1 << rows) - 1
    columns = {}
    for node, i in variables.items():
        period = 1 << (i + 1)
        # ones in the upper half of every period of 2^(i+1) rows
        columns[node] = (((1 << (1 << i)) - 1) << (1 << i)) * (full // ((1 << period) - 1))

    def value(node: Formula) -> int:
        if isinstance(node, Top):
            return full
        if isinstance(node, Not):
            return full & ~value(node.operand)
        if isinstance(node, And):
            return value(node.left) & value(node.right)
        return columns[node]

    return value(formula) == full


Rejection = tuple[RejectionKind, str]


def _mismatch(expected: Formula, actual: Formula, what: str) -> Rejection:
    difference = first_difference(expected, actual)
    reason = f"{what}: expected {render(expected)}"
    if difference is not None:
        path, want, got = difference
        reason += f"; differs at {path}: {render(want)} vs {render(got)}"
    return RejectionKind.MISMATCH, reason


def _compare(expected: Formula, actual: Formula, what: str) -> Rejection | None:
    return None if expected == actual else _mismatch(expected, actual, what)


class _Checker:
    """Line-by-line checking state for one script."""

    def __init__(self, script: ProofScript, system: AxiomSystem, max_atoms: int) -> None:
        self.script = script
        self.system = system
        self.max_atoms = max_atoms
        self._dependent: dict[int, bool] = {}

    def premise_dependent(self, position: int) -> bool:
        cached = self._dependent.get(position)
        if cached is not None:
            return cached
        line = self.script.lines[position]
        result = line.justification.rule is Rule.PREMISE
        for ref in line.justification.refs:
            source = self.script.by_index.get(ref)
            if source is not None and source < position:
                result = result or self.premise_dependent(source)
        self._dependent[position] = result
        return result

    def check(self, position: int) -> LineVerdict:
        line = self.script.lines[position]
        just = line.justification
        dependent = self.premise_dependent(position)

        def reject(kind: RejectionKind, reason: str) -> LineVerdict:
            return LineVerdict(line.index, False, just.rule_name, kind, reason, dependent)

        rule = just.rule
        if rule is None or not self.system.admits(rule):
            return reject(
                RejectionKind.UNKNOWN_RULE,
                f"rule {just.rule_name} is not available in {self.system.name}",
            )
        if not in_language(line.formula, LanguageTag.BLACKTRI):
            return reject(RejectionKind.MISMATCH, "formula uses a modality outside L(▲)")

        sources: list[Formula] = []
        if rule in _ARITY:
            if len(just.refs) != _ARITY[rule]:
                return reject(
                    RejectionKind.MALFORMED_REFERENCE,
                    f"{rule.value} takes {_ARITY[rule]} line reference(s), got {len(just.refs)}",
                )
            for ref in just.refs:
                source = self.script.by_index.get(ref)
                if source is None or source >= position:
                    return reject(
                        RejectionKind.MALFORMED_REFERENCE,
                        f"line {ref} is not an earlier line",
                    )
                if rule in PROOF_ONLY_RULES and self.premise_dependent(source):
                    return reject(
                        RejectionKind.PREMISE_DEPENDENCY,
                        f"{rule.value} applies only to theorems; line {ref} depends on a premise",
                    )
                sources.append(self.script.lines[source].formula)
        elif just.refs:
            return reject(
                RejectionKind.MALFORMED_REFERENCE, f"{rule.value} takes no line references"
            )

        failure = self._apply(rule, just, sources, line.formula)
        if failure is not None:
            return reject(*failure)
        return LineVerdict(line.index, True, just.rule_name, premise_dependent=dependent)

    def _apply(
        self,
        rule: Rule,
        just: Justification,
        sources: list[Formula],
        formula: Formula,
    ) -> Rejection | None:
        """None when the rule yields ``formula``, otherwise why it does not."""
        if rule is Rule.PREMISE:
            return None
        if rule is Rule.AXIOM:
            return self._axiom(just, formula)
        if rule is Rule.TAUT:
            if is_tautology_instance(formula, max_atoms=self.max_atoms):
                return None
            return RejectionKind.MISMATCH, "not a substitution instance of a tautology"
        if rule is Rule.MP:
            what = f"line {just.refs[1]} is not line {just.refs[0]} -> this line"
            return _compare(implies(sources[0], formula), sources[1], what)
        if rule is Rule.US:
            return _compare(substitute(sources[0], just.substitution), formula, "US")
        if rule is Rule.RTRI:
            return _compare(BlackTri(sources[0]), formula, "RTri")
        if rule is Rule.R:
            parts = as_implication(sources[0])
            if parts is None:
                return RejectionKind.MISMATCH, f"line {just.refs[0]} is not an implication"
            antecedent, consequent = parts
            expected = implies(And(BlackTri(antecedent), antecedent), BlackTri(consequent))
            return _compare(expected, formula, "R")
        if rule is Rule.RE:
            parts = as_equivalence(sources[0])
            if parts is None:
                return RejectionKind.MISMATCH, f"line {just.refs[0]} is not an equivalence"
            left, right = parts
            return _compare(iff(BlackTri(left), BlackTri(right)), formula, "RE")
        return RejectionKind.UNKNOWN_RULE, f"rule {rule.value} has no checker"

    def _axiom(self, just: Justification, formula: Formula) -> Rejection | None:
        if just.label is None:
            return RejectionKind.MALFORMED_REFERENCE, "axiom label missing"
        schema = self.system.axioms.get(just.label)
        if schema is None:
            return (
                RejectionKind.UNKNOWN_RULE,
                f"axiom {just.label} is not part of {self.system.name}",
            )
        if just.substitution:
            expected = substitute(schema, just.substitution)
            return _compare(expected, formula, f"instance of {just.label}")
        if axiom_instance(schema, formula) is None:
            return (
                RejectionKind.MISMATCH,
                f"not an instance of {just.label} ({render(schema)})",
            )
        return None


def _system_for(script: ProofScript, system: AxiomSystem | str | None) -> AxiomSystem:
    if isinstance(system, AxiomSystem):
        return system
    return get_system(system or script.system)


def check_line(
    script: ProofScript,
    index: int,
    *,
    system: AxiomSystem | str | None = None,
    max_atoms: int = DEFAULT_TRUTH_TABLE_MAX_ATOMS,
) -> LineVerdict:
    """Check the line with the given index on its own.

    Raises:
        ProofScriptError: if the script has no such line.
    """
    position = script.by_index.get(index)
    if position is None:
        raise ProofScriptError(f"no line with index {index}")
    return _Checker(script, _system_for(script, system), max_atoms).check(position)


def check_script(
    script: ProofScript,
    *,
    system: AxiomSystem | str | None = None,
    max_atoms: int = DEFAULT_TRUTH_TABLE_MAX_ATOMS,
) -> ProofReport:
    """Check every line.

    A line's formula counts as a theorem when it checks, uses no premise and
    every line it cites is itself a theorem.
    """
    resolved = _system_for(script, system)
    checker = _Checker(script, resolved, max_atoms)
    report = ProofReport(system=resolved.name)
    established: set[int] = set()
    for position, line in enumerate(script.lines):
        verdict = checker.check(position)
        report.verdicts.append(verdict)
        if not verdict.ok:
            kind = verdict.kind.value if verdict.kind else "rejected"
            logger.info(f"Line {line.index} rejected ({kind}): {verdict.reason}")
            continue
        if verdict.premise_dependent:
            continue
        if all(ref in established for ref in line.justification.refs):
            established.add(line.index)
            report.theorems.append(line.formula)
    logger.debug(
        f"Checked {len(script.lines)} lines in {resolved.name}: {len(report.rejected)} rejected",
    )
    return report
