"""Satisfaction, validity and logical equivalence on finite models.

Truth sets are computed bottom-up as world bitmasks. The four modal set
operators on a truth set ``X`` (``R(s)`` the successors of ``s``):

    □X = {s | R(s) ⊆ X}
    ΔX = {s | R(s) ⊆ X or R(s) ∩ X = ∅}
    ∘X = {s | s ∈ X ⇒ R(s) ⊆ X}
    ▲X = {s | (s ∈ X ⇒ R(s) ⊆ X) and (s ∉ X ⇒ R(s) ∩ X = ∅)}

Logical equivalence of two worlds is decided exactly through the family of
sets definable in a sublanguage: the least family containing the carrier and
the atom truth sets, closed under complement, intersection and the
sublanguage's operators. Two worlds satisfy the same formulas iff no member
of the family separates them.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import reduce

from nckit.types.result_types import Countermodel, ValidityResult

from .exceptions import BudgetExceededError, UnknownWorldError
from .formula import (
    TOP,
    And,
    BlackTri,
    Box,
    Circ,
    Delta,
    Formula,
    LanguageTag,
    Modal,
    Not,
    Prop,
    Top,
    bottom,
    lor,
    props_of,
)
from .kripke import Frame, FrameProperty, Model, enumerate_frames, iter_bits


logger = logging.getLogger(__name__)

DEFAULT_VALUATION_BUDGET = 2**20

SetOperator = Callable[[int, Sequence[int]], int]


def box_image(truth: int, succ: Sequence[int]) -> int:
    """□X as a bitmask."""
    out = 0
    for s, successors in enumerate(succ):
        if not successors & ~truth:
            out |= 1 << s
    return out


def delta_image(truth: int, succ: Sequence[int]) -> int:
    """ΔX as a bitmask; vacuous at worlds with fewer than two successors."""
    out = 0
    for s, successors in enumerate(succ):
        if not successors & ~truth or not successors & truth:
            out |= 1 << s
    return out


def circ_image(truth: int, succ: Sequence[int]) -> int:
    """∘X as a bitmask."""
    out = 0
    for s, successors in enumerate(succ):
        if not truth >> s & 1 or not successors & ~truth:
            out |= 1 << s
    return out


def blacktri_image(truth: int, succ: Sequence[int]) -> int:
    """▲X as a bitmask."""
    out = 0
    for s, successors in enumerate(succ):
        agrees = not successors & ~truth if truth >> s & 1 else not successors & truth
        if agrees:
            out |= 1 << s
    return out


SET_OPERATORS: dict[type[Modal], SetOperator] = {
    Box: box_image,
    Delta: delta_image,
    Circ: circ_image,
    BlackTri: blacktri_image,
}


def evaluate_mask(
    formula: Formula,
    succ: Sequence[int],
    atoms: Mapping[str, int],
    *,
    blacktri_false: bool = False,
) -> int:
    """Truth set of ``formula`` over a relation given by successor bitmasks.

    Args:
        formula: Formula to evaluate.
        succ: Successor bitmask of each world.
        atoms: Truth-set bitmask of each atom; missing atoms are empty.
        blacktri_false: Degenerate interpretation in which every ▲-formula
            is false everywhere.

    Returns:
        Bitmask of the worlds satisfying ``formula``.
    """
    full = (1 << len(succ)) - 1
    memo: dict[int, int] = {}

    def visit(node: Formula) -> int:
        key = id(node)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if isinstance(node, Top):
            result = full
        elif isinstance(node, Prop):
            result = atoms.get(node.name, 0) & full
        elif isinstance(node, Not):
            result = full & ~visit(node.operand)
        elif isinstance(node, And):
            result = visit(node.left) & visit(node.right)
        elif isinstance(node, BlackTri) and blacktri_false:
            result = 0
        elif isinstance(node, Modal):
            result = SET_OPERATORS[type(node)](visit(node.operand), succ)
        else:
            msg = f"not a formula node: {node!r}"
            raise TypeError(msg)
        memo[key] = result
        return result

    return visit(formula)


def truth_mask(model: Model, formula: Formula, *, blacktri_false: bool = False) -> int:
    """Truth set of ``formula`` in ``model`` as a bitmask."""
    return evaluate_mask(
        formula,
        model.succ_masks,
        model.atom_masks,
        blacktri_false=blacktri_false,
    )


def truth_set(model: Model, formula: Formula, *, blacktri_false: bool = False) -> frozenset[str]:
    """Worlds of ``model`` where ``formula`` holds."""
    return model.frame.worlds_of(truth_mask(model, formula, blacktri_false=blacktri_false))


def satisfies(model: Model, world: str, formula: Formula, *, blacktri_false: bool = False) -> bool:
    """``M, s ⊨ φ``.

    Raises:
        UnknownWorldError: if ``world`` is not a world of ``model``.
    """
    index = model.index_of(world)
    return bool(truth_mask(model, formula, blacktri_false=blacktri_false) >> index & 1)


def valid_on_model(model: Model, formula: Formula, *, blacktri_false: bool = False) -> bool:
    """``M ⊨ φ``: true at every world."""
    return truth_mask(model, formula, blacktri_false=blacktri_false) == model.full_mask


def _valuations(frame: Frame, atoms: Sequence[str], budget: int) -> Iterator[dict[str, int]]:
    total = 1 << (frame.size * len(atoms))
    if total > budget:
        raise BudgetExceededError("valuation enumeration", total, budget)
    full = frame.full_mask
    for code in range(total):
        yield {atom: (code >> (i * frame.size)) & full for i, atom in enumerate(atoms)}


def _countermodel(frame: Frame, masks: Mapping[str, int], failing: int) -> Countermodel:
    world = frame.worlds[next(iter_bits(failing))]
    return Countermodel({a: frame.worlds_of(m) for a, m in masks.items()}, world)


def valid_on_frame(
    frame: Frame,
    formula: Formula,
    *,
    budget: int = DEFAULT_VALUATION_BUDGET,
) -> ValidityResult:
    """``F ⊨ φ``, by enumerating every valuation of the atoms of ``formula``.

    Valuations are visited in increasing code order (atom ``i`` owns bits
    ``i*n .. i*n+n-1``), so the reported countermodel is the first one in
    that order, at its first failing world.

    Raises:
        BudgetExceededError: if ``2^(|worlds|·|atoms|)`` exceeds ``budget``.
    """
    atoms = sorted(props_of(formula))
    checked = 0
    for masks in _valuations(frame, atoms, budget):
        checked += 1
        failing = frame.full_mask & ~evaluate_mask(formula, frame.succ_masks, masks)
        if failing:
            return ValidityResult(False, checked, _countermodel(frame, masks, failing))
    logger.debug(f"{formula} valid on {frame.size}-world frame ({checked} valuations)")
    return ValidityResult(True, checked)


def entails_on_frame(
    frame: Frame,
    premises: Iterable[Formula],
    conclusion: Formula,
    *,
    budget: int = DEFAULT_VALUATION_BUDGET,
) -> ValidityResult:
    """``Γ ⊨_F φ``: no valuation and world over ``frame`` satisfy Γ ∪ {¬φ}.

    Raises:
        BudgetExceededError: if the valuation enumeration exceeds ``budget``.
    """
    gamma = list(premises)
    atoms = sorted(set().union(props_of(conclusion), *(props_of(g) for g in gamma)))
    checked = 0
    for masks in _valuations(frame, atoms, budget):
        checked += 1
        witness = frame.full_mask & ~evaluate_mask(conclusion, frame.succ_masks, masks)
        for premise in gamma:
            if not witness:
                break
            witness &= evaluate_mask(premise, frame.succ_masks, masks)
        if witness:
            return ValidityResult(False, checked, _countermodel(frame, masks, witness))
    return ValidityResult(True, checked)


@dataclass(frozen=True)
class DefinableFamily:
    """Sets of worlds definable in a sublanguage over given atoms.

    The family is a finite boolean algebra: its members are exactly the
    unions of ``blocks``, the classes of worlds that no definable set
    separates. ``generators`` maps every set reached during the closure to a
    formula defining it.
    """

    carrier: frozenset[str]
    blocks: tuple[frozenset[str], ...]
    language: LanguageTag
    atoms: tuple[str, ...]
    generators: Mapping[frozenset[str], Formula] = field(default_factory=dict, hash=False)

    @property
    def sets(self) -> frozenset[frozenset[str]]:
        """Every member of the family."""
        members = set()
        for choice in range(1 << len(self.blocks)):
            members.add(frozenset().union(*(self.blocks[i] for i in iter_bits(choice))))
        return frozenset(members)

    def __len__(self) -> int:
        return 1 << len(self.blocks)

    def __contains__(self, candidate: object) -> bool:
        if not isinstance(candidate, (set, frozenset)) or not candidate <= self.carrier:
            return False
        return all(block <= candidate or block.isdisjoint(candidate) for block in self.blocks)

    def block_of(self, world: str) -> frozenset[str]:
        """The block containing ``world``.

        Raises:
            UnknownWorldError: if ``world`` is not in the carrier.
        """
        for block in self.blocks:
            if world in block:
                return block
        raise UnknownWorldError(world)

    def separates(self, first: str, second: str) -> bool:
        """True when some member contains exactly one of the two worlds."""
        return self.block_of(first) != self.block_of(second)

    def separating_formula(self, first: str, second: str) -> Formula | None:
        """Shortest generator formula true at ``first`` and false at ``second``."""
        best: Formula | None = None
        for members, formula in self.generators.items():
            if (first in members) == (second in members):
                continue
            candidate = formula if first in members else Not(formula)
            if best is None or len(str(candidate)) < len(str(best)):
                best = candidate
        return best


def definable_closure(
    model: Model,
    atoms: Iterable[str] | None = None,
    language: LanguageTag = LanguageTag.BLACKTRI,
    *,
    budget: int = DEFAULT_VALUATION_BUDGET,
) -> DefinableFamily:
    """Least family containing the carrier and atom truth sets, closed under
    complement, intersection and the modal operators of ``language``.

    The partition of worlds induced by the generators is refined until
    applying every operator to every union of blocks yields a union of
    blocks again.

    Args:
        model: The model whose worlds form the carrier.
        atoms: Generating atoms; defaults to the atoms ``model`` mentions.
        language: Sublanguage whose operators close the family.
        budget: Cap on the number of block unions examined per round.

    Raises:
        BudgetExceededError: if the partition grows past ``budget`` unions.
    """
    names = tuple(sorted(set(atoms))) if atoms is not None else model.atoms
    succ = model.succ_masks
    operators = [(kind, SET_OPERATORS[kind]) for kind in _ordered(language)]

    generators: dict[int, Formula] = {model.full_mask: TOP}
    blocks: dict[int, Formula] = {model.full_mask: TOP}
    for atom in names:
        mask = model.atom_mask(atom)
        if mask not in generators:
            generators[mask] = Prop(atom)
            blocks = _split(blocks, mask, generators[mask])

    rounds = 0
    while True:
        rounds += 1
        if 1 << len(blocks) > budget:
            raise BudgetExceededError("definable closure", 1 << len(blocks), budget)
        before = len(blocks)
        for union, defining in list(_unions(blocks, generators)):
            for kind, image in operators:
                produced = image(union, succ)
                if produced not in generators:
                    generators[produced] = kind(defining)
                    blocks = _split(blocks, produced, generators[produced])
        if len(blocks) == before:
            break
    logger.debug(
        f"Closure for {language.value} over {model.frame.size} worlds: "
        f"{len(blocks)} blocks after {rounds} rounds",
    )
    frame = model.frame
    return DefinableFamily(
        carrier=frozenset(model.worlds),
        blocks=tuple(frame.worlds_of(mask) for mask in sorted(blocks, key=lambda b: b & -b)),
        language=language,
        atoms=names,
        generators={frame.worlds_of(mask): formula for mask, formula in generators.items()},
    )


def _ordered(language: LanguageTag) -> list[type[Modal]]:
    return [kind for kind in (BlackTri, Box, Delta, Circ) if kind in language.modalities]


def _split(blocks: Mapping[int, Formula], mask: int, formula: Formula) -> dict[int, Formula]:
    result: dict[int, Formula] = {}
    for block, defining in blocks.items():
        inside, outside = block & mask, block & ~mask
        if not inside or not outside:
            result[block] = defining
            continue
        result[inside] = formula if isinstance(defining, Top) else And(defining, formula)
        negated = Not(formula)
        result[outside] = negated if isinstance(defining, Top) else And(defining, negated)
    return result


def _unions(
    blocks: Mapping[int, Formula],
    generators: Mapping[int, Formula],
) -> Iterator[tuple[int, Formula]]:
    """Every union of blocks with a formula defining it."""
    ordered = sorted(blocks.items(), key=lambda item: item[0] & -item[0])
    for choice in range(1 << len(ordered)):
        union = 0
        for i in iter_bits(choice):
            union |= ordered[i][0]
        known = generators.get(union)
        if known is not None:
            yield union, known
        elif not choice:
            yield union, bottom()
        else:
            yield union, reduce(lor, (ordered[i][1] for i in iter_bits(choice)))


def logically_equivalent(
    model: Model,
    first: str,
    second: str,
    atoms: Iterable[str] | None = None,
    language: LanguageTag = LanguageTag.BLACKTRI,
) -> bool:
    """True when the two worlds satisfy the same ``language``-formulas over ``atoms``.

    Raises:
        UnknownWorldError: if either world is not in ``model``.
    """
    model.index_of(first)
    model.index_of(second)
    return not definable_closure(model, atoms, language).separates(first, second)


def distinguishing_formula(
    model: Model,
    first: str,
    second: str,
    atoms: Iterable[str] | None = None,
    language: LanguageTag = LanguageTag.BLACKTRI,
) -> Formula | None:
    """A ``language``-formula true at exactly one of the worlds, or None."""
    model.index_of(first)
    model.index_of(second)
    family = definable_closure(model, atoms, language)
    if not family.separates(first, second):
        return None
    return family.separating_formula(first, second)


def defines_property(
    formula: Formula,
    prop: FrameProperty,
    max_worlds: int = 3,
    *,
    budget: int = DEFAULT_VALUATION_BUDGET,
) -> Frame | None:
    """Bounded frame-definability check.

    Returns:
        The first frame (by size, then relation code) on at most
        ``max_worlds`` worlds where validity of ``formula`` and ``prop``
        disagree, or None when they agree on all of them.
    """
    for size in range(1, max_worlds + 1):
        for frame in enumerate_frames(size):
            valid = valid_on_frame(frame, formula, budget=budget).valid
            if valid != frame.has_property(prop).holds:
                return frame
    return None
