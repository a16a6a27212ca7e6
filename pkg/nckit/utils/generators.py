"""Random formulas, frames and models for property-based test suites.

All generators take an explicit ``random.Random`` so runs are reproducible.
"""

import random
from collections.abc import Iterable, Sequence

from nckit.core.formula import (
    TOP,
    And,
    Formula,
    LanguageTag,
    Modal,
    Not,
    Prop,
    implies,
    lor,
)
from nckit.core.kripke import Frame, FrameProperty, Model, iter_bits


def random_formula(
    rng: random.Random,
    atoms: Sequence[str] = ("p", "q"),
    depth: int = 2,
    language: LanguageTag = LanguageTag.BLACKTRI,
) -> Formula:
    """Random formula over ``atoms`` with modal depth at most ``depth``."""
    modalities: list[type[Modal]] = sorted(language.modalities, key=lambda kind: kind.__name__)

    def build(budget: int, size: int) -> Formula:
        if size <= 0 or rng.random() < 0.25:
            return TOP if rng.random() < 0.05 else Prop(rng.choice(atoms))
        choices = ["not", "and", "or", "implies"]
        if budget > 0 and modalities:
            choices += ["modal"] * 3
        kind = rng.choice(choices)
        if kind == "not":
            return Not(build(budget, size - 1))
        if kind == "modal":
            return rng.choice(modalities)(build(budget - 1, size - 1))
        left, right = build(budget, size - 1), build(budget, size - 1)
        if kind == "and":
            return And(left, right)
        return lor(left, right) if kind == "or" else implies(left, right)

    return build(depth, depth + 3)


def close_relation(
    size: int, succ: Sequence[int], properties: Iterable[FrameProperty]
) -> tuple[int, ...]:
    """Smallest extension of ``succ`` with ``properties``.

    Coreflexivity is imposed first by dropping every edge that is not a
    loop; the remaining properties only ever add edges.
    """
    wanted = set(properties)
    if FrameProperty.EQUIVALENCE in wanted:
        wanted |= {FrameProperty.REFLEXIVE, FrameProperty.SYMMETRIC, FrameProperty.TRANSITIVE}
    masks = list(succ)
    if FrameProperty.COREFLEXIVE in wanted:
        masks = [out & (1 << s) for s, out in enumerate(masks)]
    changed = True
    while changed:
        before = list(masks)
        for s in range(size):
            if FrameProperty.REFLEXIVE in wanted:
                masks[s] |= 1 << s
            if FrameProperty.SERIAL in wanted and not masks[s]:
                masks[s] = 1 << s
            for t in iter_bits(masks[s]):
                if FrameProperty.SYMMETRIC in wanted:
                    masks[t] |= 1 << s
                if FrameProperty.TRANSITIVE in wanted:
                    masks[s] |= masks[t]
                if FrameProperty.EUCLIDEAN in wanted:
                    masks[t] |= masks[s]
        changed = masks != before
    return tuple(masks)


def random_frame(
    rng: random.Random,
    size: int,
    properties: Iterable[FrameProperty] = (),
    density: float = 0.4,
) -> Frame:
    """Random frame on ``w0 .. w{size-1}`` closed under ``properties``."""
    succ = [sum(1 << t for t in range(size) if rng.random() < density) for _ in range(size)]
    return Frame.from_masks(close_relation(size, succ, properties))


def random_model(
    rng: random.Random,
    size: int,
    atoms: Sequence[str] = ("p", "q"),
    properties: Iterable[FrameProperty] = (),
    density: float = 0.4,
) -> Model:
    """Random model whose frame has ``properties``."""
    frame = random_frame(rng, size, properties, density)
    valuation = {atom: frozenset(w for w in frame.worlds if rng.random() < 0.5) for atom in atoms}
    return Model(frame, valuation)
