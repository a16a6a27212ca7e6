"""Formula syntax for the modal languages over □, Δ, ∘ and ▲.

Formulas are immutable dataclass trees built from ⊤, atoms, ¬, ∧ and the four
modalities. Derived connectives (⊥, ∨, →, ↔, ◇, ∇, •, ▼) never appear in a
stored tree: the parser and the sugar constructors below expand them, and
``render`` restores them when printing.

Surface syntax (tightest first: unary, ``&``, ``|``, ``->`` right-assoc, ``<->``)::

    true false T   !  &  |  ->  <->  []  <>  %  ^  o  @  #  ~
    ⊤    ⊥     ⊤   ¬  ∧  ∨  →   ↔    □   ◇   Δ  ∇  ∘  •  ▲  ▼
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache, reduce
from typing import Literal

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .exceptions import FormulaSyntaxError, LanguageError, UnknownOperatorError


logger = logging.getLogger(__name__)

ATOM_PATTERN = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
RESERVED_WORDS = frozenset({"true", "false", "T", "o"})

# How a desugared negation was written.
Sugar = Literal["or", "implies"]


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return lor(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def __rshift__(self, other: Formula) -> Formula:
        return implies(self, other)

    def to_json(self) -> str:
        """JSON representation: the rendered surface syntax."""
        return render(self)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    """The constant ⊤."""


@dataclass(frozen=True, slots=True)
class Prop(Formula):
    """A propositional atom."""

    name: str

    def __post_init__(self) -> None:
        if not ATOM_PATTERN.fullmatch(self.name) or self.name in RESERVED_WORDS:
            raise FormulaSyntaxError(f"invalid atom name {self.name!r}", text=self.name)


@dataclass(frozen=True, slots=True)
class Unary(Formula):
    """A node with exactly one operand."""

    operand: Formula


@dataclass(frozen=True, slots=True)
class Not(Unary):
    """Negation.

    ``sugar`` remembers whether the node was built as a disjunction or an
    implication so that printing can restore it. Equality and hashing ignore it.
    """

    sugar: Sugar | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class And(Formula):
    """Conjunction."""

    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Modal(Unary):
    """Base class of the four modalities."""


@dataclass(frozen=True, slots=True)
class Box(Modal):
    """Necessity □."""


@dataclass(frozen=True, slots=True)
class Delta(Modal):
    """Noncontingency Δ."""


@dataclass(frozen=True, slots=True)
class Circ(Modal):
    """Essence ∘."""


@dataclass(frozen=True, slots=True)
class BlackTri(Modal):
    """Strong noncontingency ▲."""


TOP = Top()

Substitution = Mapping[str, Formula]


class LanguageTag(str, Enum):
    """Sublanguages, identified by the modalities they admit."""

    PL = "pl"
    BOX = "box"
    DELTA = "delta"
    CIRC = "circ"
    BLACKTRI = "tri"
    FULL = "full"

    @property
    def modalities(self) -> frozenset[type[Modal]]:
        """Modal constructors admitted by this sublanguage."""
        return _LANGUAGE_MODALITIES[self]


_LANGUAGE_MODALITIES: dict[LanguageTag, frozenset[type[Modal]]] = {
    LanguageTag.PL: frozenset(),
    LanguageTag.BOX: frozenset({Box}),
    LanguageTag.DELTA: frozenset({Delta}),
    LanguageTag.CIRC: frozenset({Circ}),
    LanguageTag.BLACKTRI: frozenset({BlackTri}),
    LanguageTag.FULL: frozenset({Box, Delta, Circ, BlackTri}),
}


# Sugar constructors. Each returns the desugared tree.


def bottom() -> Formula:
    """⊥ as ¬⊤."""
    return Not(TOP)


def lor(left: Formula, right: Formula) -> Formula:
    """φ ∨ ψ as ¬(¬φ ∧ ¬ψ)."""
    return Not(And(Not(left), Not(right)), "or")


def implies(left: Formula, right: Formula) -> Formula:
    """φ → ψ as ¬(φ ∧ ¬ψ)."""
    return Not(And(left, Not(right)), "implies")


def iff(left: Formula, right: Formula) -> Formula:
    """φ ↔ ψ as (φ → ψ) ∧ (ψ → φ)."""
    return And(implies(left, right), implies(right, left))


def diamond(operand: Formula) -> Formula:
    """◇φ as ¬□¬φ."""
    return Not(Box(Not(operand)))


def nabla(operand: Formula) -> Formula:
    """∇φ as ¬Δφ."""
    return Not(Delta(operand))


def bullet(operand: Formula) -> Formula:
    """•φ as ¬∘φ."""
    return Not(Circ(operand))


def blacktri_down(operand: Formula) -> Formula:
    """▼φ as ¬▲φ."""
    return Not(BlackTri(operand))


def conjoin(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction of ``items``; ⊤ when empty."""
    parts = list(items)
    return reduce(And, parts) if parts else TOP


def as_implication(formula: Formula) -> tuple[Formula, Formula] | None:
    """Split ``¬(φ ∧ ¬ψ)`` into ``(φ, ψ)``."""
    if (
        isinstance(formula, Not)
        and isinstance(formula.operand, And)
        and isinstance(formula.operand.right, Not)
    ):
        return formula.operand.left, formula.operand.right.operand
    return None


def as_equivalence(formula: Formula) -> tuple[Formula, Formula] | None:
    """Split the desugared ``φ ↔ ψ`` into ``(φ, ψ)``."""
    if not isinstance(formula, And):
        return None
    forward = as_implication(formula.left)
    backward = as_implication(formula.right)
    if forward is None or backward is None:
        return None
    if forward[0] == backward[1] and forward[1] == backward[0]:
        return forward
    return None


def _as_disjunction(formula: Formula) -> tuple[Formula, Formula] | None:
    if (
        isinstance(formula, Not)
        and isinstance(formula.operand, And)
        and isinstance(formula.operand.left, Not)
        and isinstance(formula.operand.right, Not)
    ):
        return formula.operand.left.operand, formula.operand.right.operand
    return None


# Structural queries


def substitute(formula: Formula, sigma: Substitution) -> Formula:
    """Simultaneously replace every atom ``p`` in ``sigma`` by ``sigma[p]``."""
    if not sigma:
        return formula
    if isinstance(formula, Prop):
        return sigma.get(formula.name, formula)
    if isinstance(formula, Unary):
        return replace(formula, operand=substitute(formula.operand, sigma))
    if isinstance(formula, And):
        return And(substitute(formula.left, sigma), substitute(formula.right, sigma))
    return formula


def compose_substitutions(first: Substitution, then: Substitution) -> dict[str, Formula]:
    """Substitution equal to applying ``first`` and then ``then``."""
    composed = {atom: substitute(image, then) for atom, image in first.items()}
    for atom, image in then.items():
        composed.setdefault(atom, image)
    return composed


def iter_nodes(formula: Formula) -> Iterator[Formula]:
    """Pre-order traversal of every node occurrence."""
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Unary):
            stack.append(node.operand)
        elif isinstance(node, And):
            stack.extend((node.right, node.left))


def props_of(formula: Formula) -> frozenset[str]:
    """Atoms occurring in ``formula``."""
    return frozenset(node.name for node in iter_nodes(formula) if isinstance(node, Prop))


def subformulas(formula: Formula) -> frozenset[Formula]:
    """Distinct subformulas of ``formula``, itself included."""
    return frozenset(iter_nodes(formula))


def modal_depth(formula: Formula) -> int:
    """Maximal nesting of modalities of any kind."""
    if isinstance(formula, Unary):
        return modal_depth(formula.operand) + (1 if isinstance(formula, Modal) else 0)
    if isinstance(formula, And):
        return max(modal_depth(formula.left), modal_depth(formula.right))
    return 0


def in_language(formula: Formula, tag: LanguageTag) -> bool:
    """True when every modality in ``formula`` belongs to ``tag``."""
    return _foreign_modality(formula, tag) is None


def check_language(formula: Formula, tag: LanguageTag) -> None:
    """Raise ``LanguageError`` unless ``formula`` lies in ``tag``.

    Raises:
        LanguageError: naming the first offending subformula.
    """
    offender = _foreign_modality(formula, tag)
    if offender is not None:
        raise LanguageError(
            f"modality outside sublanguage {tag.value}: {render(offender)}",
        )


def _foreign_modality(formula: Formula, tag: LanguageTag) -> Formula | None:
    allowed = tag.modalities
    for node in iter_nodes(formula):
        if isinstance(node, Modal) and type(node) not in allowed:
            return node
    return None


def first_difference(expected: Formula, actual: Formula) -> tuple[str, Formula, Formula] | None:
    """Locate the first structural difference between two trees.

    Returns:
        ``(path, expected_subtree, actual_subtree)`` where ``path`` is a
        dotted route such as ``"left.operand"`` (``"."`` for the root), or
        None when the trees are equal.
    """
    stack: list[tuple[str, Formula, Formula]] = [("", expected, actual)]
    while stack:
        path, left, right = stack.pop()
        if left == right:
            continue
        if type(left) is not type(right) or isinstance(left, Prop):
            return path or ".", left, right
        if isinstance(left, Unary) and isinstance(right, Unary):
            stack.append((_join(path, "operand"), left.operand, right.operand))
        elif isinstance(left, And) and isinstance(right, And):
            stack.append((_join(path, "right"), left.right, right.right))
            stack.append((_join(path, "left"), left.left, right.left))
    return None


def _join(path: str, step: str) -> str:
    return f"{path}.{step}" if path else step


# Printing

_IFF, _IMP, _OR, _AND, _UNARY, _ATOM = range(6)

_MODAL_SYMBOLS: dict[type[Modal], str] = {Box: "[]", Delta: "%", Circ: "o ", BlackTri: "#"}
_NEGATED_MODAL_SYMBOLS: dict[type[Modal], str] = {Delta: "^", Circ: "@", BlackTri: "~"}


def render(formula: Formula) -> str:
    """Print ``formula`` with restored sugar and minimal parentheses.

    The output re-parses to a structurally identical tree.
    """
    return _render(formula)[0]


def _wrap(part: tuple[str, int], minimum: int) -> str:
    text, level = part
    return text if level >= minimum else f"({text})"


def _connective(formula: Formula) -> tuple[Sugar, Formula, Formula] | None:
    """Read ``¬(φ ∧ ¬ψ)`` back as the connective it was written with.

    ``¬(¬φ ∧ ¬ψ)`` is both ``φ | ψ`` and ``¬φ -> ψ``. The recorded sugar decides;
    trees built without it print as a disjunction unless ``¬φ`` is itself an
    implication.
    """
    if not isinstance(formula, Not):
        return None
    implication = as_implication(formula)
    if implication is None:
        return None
    disjunction = _as_disjunction(formula)
    if disjunction is None or formula.sugar == "implies":
        return "implies", *implication
    if formula.sugar is None and as_implication(Not(disjunction[0])) is not None:
        return "implies", *implication
    return "or", *disjunction


def _render(formula: Formula) -> tuple[str, int]:
    if isinstance(formula, Top):
        return "true", _ATOM
    if isinstance(formula, Prop):
        return formula.name, _ATOM

    pair = as_equivalence(formula)
    if pair is not None:
        left, right = pair
        return f"{_wrap(_render(left), _IFF)} <-> {_wrap(_render(right), _IMP)}", _IFF
    connective = _connective(formula)
    if connective is not None:
        kind, left, right = connective
        if kind == "or":
            return f"{_wrap(_render(left), _OR)} | {_wrap(_render(right), _AND)}", _OR
        return f"{_wrap(_render(left), _OR)} -> {_wrap(_render(right), _IMP)}", _IMP

    if isinstance(formula, And):
        return (
            f"{_wrap(_render(formula.left), _AND)} & {_wrap(_render(formula.right), _UNARY)}",
            _AND,
        )
    if isinstance(formula, Not):
        inner = formula.operand
        if isinstance(inner, Top):
            return "false", _ATOM
        if isinstance(inner, Box) and isinstance(inner.operand, Not):
            return "<>" + _wrap(_render(inner.operand.operand), _UNARY), _UNARY
        if isinstance(inner, Modal) and type(inner) in _NEGATED_MODAL_SYMBOLS:
            symbol = _NEGATED_MODAL_SYMBOLS[type(inner)]
            return symbol + _wrap(_render(inner.operand), _UNARY), _UNARY
        return "!" + _wrap(_render(inner), _UNARY), _UNARY
    if isinstance(formula, Modal):
        return _MODAL_SYMBOLS[type(formula)] + _wrap(_render(formula.operand), _UNARY), _UNARY
    msg = f"not a formula node: {formula!r}"
    raise TypeError(msg)


# Parsing

GRAMMAR = r"""
    ?start: equivalence

    ?equivalence: implication (_IFF implication)*
    ?implication: disjunction (_IMP implication)?
    ?disjunction: conjunction (_OR conjunction)*
    ?conjunction: unary (_AND unary)*

    ?unary: _NOT unary      -> negation
          | _BOX unary      -> box
          | _DIAMOND unary  -> diamond
          | _DELTA unary    -> delta
          | _NABLA unary    -> nabla
          | _CIRC unary     -> circ
          | _BULLET unary   -> bullet
          | _TRI unary      -> blacktri
          | _TRI_DOWN unary -> blacktri_down
          | atom

    ?atom: _TRUE          -> top
         | _TOP_ALIAS     -> top
         | _FALSE         -> bottom
         | IDENT          -> prop
         | _LPAR equivalence _RPAR

    _IFF: "<->"
    _IMP: "->"
    _OR: "|"
    _AND: "&"
    _NOT: "!"
    _BOX: "[]"
    _DIAMOND: "<>"
    _DELTA: "%"
    _NABLA: "^"
    _CIRC: "o"
    _BULLET: "@"
    _TRI: "#"
    _TRI_DOWN: "~"
    _TRUE: "true"
    _TOP_ALIAS: "T"
    _FALSE: "false"
    _LPAR: "("
    _RPAR: ")"
    IDENT: /[A-Za-z][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""

_TOKEN_DISPLAY = {
    "_IFF": "<->",
    "_IMP": "->",
    "_OR": "|",
    "_AND": "&",
    "_NOT": "!",
    "_BOX": "[]",
    "_DIAMOND": "<>",
    "_DELTA": "%",
    "_NABLA": "^",
    "_CIRC": "o",
    "_BULLET": "@",
    "_TRI": "#",
    "_TRI_DOWN": "~",
    "_TRUE": "true",
    "_TOP_ALIAS": "T",
    "_FALSE": "false",
    "_LPAR": "(",
    "_RPAR": ")",
    "IDENT": "atom",
    "$END": "end of input",
}

_SYMBOL_RUN = re.compile(r"[^\sA-Za-z0-9()]+")


@v_args(inline=True)
class _FormulaBuilder(Transformer[Token, Formula]):
    """Turns parse trees into desugared formulas."""

    def top(self) -> Formula:
        return TOP

    def bottom(self) -> Formula:
        return bottom()

    def prop(self, token: Token) -> Formula:
        return Prop(str(token))

    def negation(self, operand: Formula) -> Formula:
        return Not(operand)

    def box(self, operand: Formula) -> Formula:
        return Box(operand)

    def diamond(self, operand: Formula) -> Formula:
        return diamond(operand)

    def delta(self, operand: Formula) -> Formula:
        return Delta(operand)

    def nabla(self, operand: Formula) -> Formula:
        return nabla(operand)

    def circ(self, operand: Formula) -> Formula:
        return Circ(operand)

    def bullet(self, operand: Formula) -> Formula:
        return bullet(operand)

    def blacktri(self, operand: Formula) -> Formula:
        return BlackTri(operand)

    def blacktri_down(self, operand: Formula) -> Formula:
        return blacktri_down(operand)

    def conjunction(self, *operands: Formula) -> Formula:
        return reduce(And, operands)

    def disjunction(self, *operands: Formula) -> Formula:
        return reduce(lor, operands)

    def implication(self, left: Formula, right: Formula) -> Formula:
        return implies(left, right)

    def equivalence(self, *operands: Formula) -> Formula:
        return reduce(iff, operands)


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(GRAMMAR, parser="lalr", start="start")


def parse(text: str, language: LanguageTag = LanguageTag.FULL) -> Formula:
    """Parse ``text`` into a desugared formula.

    Args:
        text: Formula in the ASCII surface syntax.
        language: Sublanguage the result must belong to.

    Returns:
        The desugared syntax tree.

    Raises:
        FormulaSyntaxError: on malformed input, with position and expected tokens.
        UnknownOperatorError: on characters that are not part of any operator.
        LanguageError: when the formula uses a modality outside ``language``.
    """
    try:
        tree = _parser().parse(text)
    except UnexpectedInput as err:
        raise _syntax_error(text, err) from None
    formula = _FormulaBuilder().transform(tree)
    check_language(formula, language)
    logger.debug(f"Parsed {text!r} into {formula!r}")
    return formula


def _syntax_error(text: str, err: UnexpectedInput) -> FormulaSyntaxError:
    if isinstance(err, UnexpectedCharacters):
        position = err.pos_in_stream
        char = text[position] if position < len(text) else ""
        expected = [_TOKEN_DISPLAY.get(name, name) for name in err.allowed or ()]
        if not char.isalnum():
            run = _SYMBOL_RUN.match(text, position)
            symbol = run.group(0) if run else char
            return UnknownOperatorError(
                f"unknown operator {symbol!r}",
                text=text,
                position=position,
                expected=expected,
            )
        return FormulaSyntaxError(
            f"unexpected character {char!r}",
            text=text,
            position=position,
            expected=expected,
        )
    if isinstance(err, UnexpectedEOF):
        expected = [_TOKEN_DISPLAY.get(name, name) for name in err.expected]
        return FormulaSyntaxError(
            "unexpected end of input",
            text=text,
            position=len(text),
            expected=expected,
        )
    if isinstance(err, UnexpectedToken):
        token = err.token
        at_end = token.type == "$END"
        position = len(text) if at_end else (token.start_pos or 0)
        expected = [_TOKEN_DISPLAY.get(name, name) for name in err.expected]
        found = "end of input" if at_end else repr(str(token))
        return FormulaSyntaxError(
            f"unexpected {found}",
            text=text,
            position=position,
            expected=expected,
        )
    return FormulaSyntaxError(str(err), text=text)
