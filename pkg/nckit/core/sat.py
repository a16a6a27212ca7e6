"""Bounded satisfiability search over finite models.

Models are generated in a fixed canonical order: size, then relation code,
then valuation code. A candidate is kept only when its per-world keys
(out-degree, valuation bits) are nondecreasing, which still leaves one
representative of every model up to renaming of worlds. The first candidate
satisfying the formula at some world is the minimal one in that order.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence

from nckit.types.result_types import SatOutcome, SatResult

from .exceptions import BudgetExceededError
from .formula import Box, Formula, iter_nodes, modal_depth, props_of, subformulas
from .kripke import Frame, FrameProperty, Model, enumerate_relations, iter_bits
from .semantics import evaluate_mask
from .translate import to_box


logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 2_000_000

ProgressCallback = Callable[[int, int], None]


def fmp_bound(formula: Formula) -> int:
    """Model size that suffices to satisfy ``formula`` over arbitrary frames.

    The smaller of the filtration bound ``2^n`` (``n`` distinct subformulas of
    the □-translation) and the tree-model bound ``b^0 + ... + b^d`` (``b``
    distinct □-subformulas, ``d`` modal depth).
    """
    translated = to_box(formula)
    boxes = {node for node in iter_nodes(translated) if isinstance(node, Box)}
    depth = modal_depth(translated)
    tree = sum(len(boxes) ** level for level in range(depth + 1))
    count = len(subformulas(translated))
    return min(tree, 1 << count)


def _canonical(succ: Sequence[int], masks: Sequence[int]) -> bool:
    previous: tuple[int, ...] | None = None
    for world, successors in enumerate(succ):
        key = (successors.bit_count(), *(mask >> world & 1 for mask in masks))
        if previous is not None and key < previous:
            return False
        previous = key
    return True


def satisfiable(
    formula: Formula,
    frame_class: Iterable[FrameProperty] = (),
    max_worlds: int = 3,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    progress: ProgressCallback | None = None,
) -> SatResult:
    """Search for a pointed model of ``formula`` whose frame has ``frame_class``.

    Args:
        formula: Formula to satisfy.
        frame_class: Required frame properties; empty for arbitrary frames.
        max_worlds: Largest model size to try.
        node_budget: Cap on the number of candidate models generated.
        progress: Called with ``(size, bound)`` before each model size.

    Returns:
        ``SAT`` with the model and world; otherwise ``UNSAT_CERTIFIED`` when
        the frame class is empty and the search reached ``fmp_bound``, else
        ``UNSAT_UP_TO``.

    Raises:
        ValueError: if ``max_worlds`` is below 1.
        BudgetExceededError: if the search needs more than ``node_budget``
            candidates.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    properties = tuple(sorted(set(frame_class), key=lambda prop: prop.value))
    class_names = tuple(prop.value for prop in properties)
    certified = None if properties else fmp_bound(formula)
    bound = max_worlds if certified is None else min(max_worlds, certified)
    atoms = sorted(props_of(formula))

    examined = 0
    for size in range(1, bound + 1):
        if progress is not None:
            progress(size, bound)
        full = (1 << size) - 1
        valuations = 1 << (size * len(atoms))
        for succ in enumerate_relations(size, properties):
            for code in range(valuations):
                examined += 1
                if examined > node_budget:
                    raise BudgetExceededError("model search", examined, node_budget)
                masks = [(code >> (i * size)) & full for i in range(len(atoms))]
                if not _canonical(succ, masks):
                    continue
                truth = evaluate_mask(formula, succ, dict(zip(atoms, masks, strict=True)))
                if truth:
                    frame = Frame.from_masks(succ)
                    valuation = {a: frame.worlds_of(m) for a, m in zip(atoms, masks, strict=True)}
                    model = Model(frame, valuation)
                    world = frame.worlds[next(iter_bits(truth))]
                    logger.debug(f"Satisfied at {world} after {examined} candidates")
                    return SatResult(
                        SatOutcome.SAT,
                        bound,
                        class_names,
                        examined,
                        certified_bound=certified,
                        model=model,
                        world=world,
                    )
        logger.debug(f"No model of size {size} ({examined} candidates so far)")

    outcome = (
        SatOutcome.UNSAT_CERTIFIED
        if certified is not None and bound >= certified
        else SatOutcome.UNSAT_UP_TO
    )
    return SatResult(outcome, bound, class_names, examined, certified_bound=certified)
