"""Truth-preserving translations between the modal sublanguages.

``to_box`` compiles Δ, ∘ and ▲ away into □ and is truth preserving on every
model. ``to_blacktri`` goes the other way for L(□) and preserves truth on
reflexive models only. ``to_circ`` rewrites ▲ through the essence operator.

Translations are literal: no double negations are removed and no other
simplification is applied. A subtree shared in the input is translated once
and shared in the output.
"""

from __future__ import annotations

import logging
from collections.abc import Callable

from .exceptions import TranslationError
from .formula import (
    And,
    BlackTri,
    Box,
    Circ,
    Delta,
    Formula,
    Modal,
    Not,
    Prop,
    Top,
    implies,
    lor,
    render,
)


logger = logging.getLogger(__name__)

ModalRule = Callable[[Modal, Formula], Formula]


def _translator(rules: dict[type[Modal], ModalRule], target: str) -> Callable[[Formula], Formula]:
    def translate(formula: Formula) -> Formula:
        memo: dict[int, Formula] = {}

        def visit(node: Formula) -> Formula:
            key = id(node)
            if key in memo:
                return memo[key]
            if isinstance(node, (Top, Prop)):
                result = node
            elif isinstance(node, Not):
                result = Not(visit(node.operand), node.sugar)
            elif isinstance(node, And):
                result = And(visit(node.left), visit(node.right))
            elif isinstance(node, Modal):
                rule = rules.get(type(node))
                if rule is None:
                    raise TranslationError(
                        f"{render(node)} is outside the domain of the translation to {target}",
                    )
                result = rule(node, visit(node.operand))
            else:
                msg = f"not a formula node: {node!r}"
                raise TypeError(msg)
            memo[key] = result
            return result

        return visit(formula)

    return translate


def _keep(node: Modal, inner: Formula) -> Formula:
    return type(node)(inner)


def _blacktri_to_box(_: Modal, inner: Formula) -> Formula:
    # (φ → □φ) ∧ (¬φ → □¬φ)
    negated = Not(inner)
    return And(implies(inner, Box(inner)), implies(negated, Box(negated)))


def _delta_to_box(_: Modal, inner: Formula) -> Formula:
    return lor(Box(inner), Box(Not(inner)))


def _circ_to_box(_: Modal, inner: Formula) -> Formula:
    return implies(inner, Box(inner))


def _box_to_blacktri(_: Modal, inner: Formula) -> Formula:
    return And(BlackTri(inner), inner)


def _blacktri_to_circ(_: Modal, inner: Formula) -> Formula:
    return And(Circ(inner), Circ(Not(inner)))


_to_box = _translator(
    {Box: _keep, Delta: _delta_to_box, Circ: _circ_to_box, BlackTri: _blacktri_to_box},
    "L(□)",
)
_to_blacktri = _translator({Box: _box_to_blacktri, BlackTri: _keep}, "L(▲)")
_to_circ = _translator({BlackTri: _blacktri_to_circ, Circ: _keep}, "L(∘)")


def to_box(formula: Formula) -> Formula:
    """Compile every Δ, ∘ and ▲ into □.

    ``▲φ ↦ (t(φ) → □t(φ)) ∧ (¬t(φ) → □¬t(φ))``,
    ``Δφ ↦ □t(φ) ∨ □¬t(φ)`` and ``∘φ ↦ t(φ) → □t(φ)``; homomorphic on
    everything else. Accepts the full language and never fails.
    """
    return _to_box(formula)


def to_blacktri(formula: Formula) -> Formula:
    """Translate an L(□) formula into L(▲) with ``□φ ↦ ▲t(φ) ∧ t(φ)``.

    The result agrees with the input at every world of a reflexive model;
    on other models it may not. ▲ subformulas are kept as they are.

    Raises:
        TranslationError: if the input uses Δ or ∘.
    """
    return _to_blacktri(formula)


def to_circ(formula: Formula) -> Formula:
    """Translate an L(▲) formula into L(∘) with ``▲φ ↦ ∘t(φ) ∧ ∘¬t(φ)``.

    Truth preserving on every model.

    Raises:
        TranslationError: if the input uses □ or Δ.
    """
    return _to_circ(formula)
