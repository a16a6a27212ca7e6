"""□- and ▲-bisimulations over finite models.

A ▲-bisimulation ``Z`` is a nonempty relation whose pairs agree on every atom
and satisfy, for each ``(x, y) ∈ Z``:

    ▲-Forth  if xRt and (x, t) ∉ Z, some u with yRu has (t, u) ∈ Z
    ▲-Back   if yRt and (y, t) ∉ Z, some u with xRu has (u, t) ∈ Z

The □ clauses are the same without the guards. Relations between two models
live on their disjoint union so that the guards can refer to pairs on one
side.

The largest bisimulation is computed by refinement from the relation of all
atom-agreeing pairs, dropping in each round every pair whose clauses fail
against the previous round's relation. The ▲ guard makes one round's operator
non-monotone, but every round still contains the largest ▲-bisimulation ``B``:
if ``Z ⊇ B`` then ``(x, t) ∉ Z`` implies ``(x, t) ∉ B`` and a witness in ``B`` is
a witness in ``Z``. The stable relation satisfies the clauses against itself,
so when nonempty it is a ▲-bisimulation containing ``B``, hence equal to it.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

from nckit.types.result_types import BisimReport, ClauseViolation

from .exceptions import KripkeError, UnknownWorldError
from .kripke import Model, disjoint_union, iter_bits, quotient


logger = logging.getLogger(__name__)


class BisimKind(str, Enum):
    """Which family of back-and-forth clauses applies."""

    BOX = "box"
    BLACKTRI = "tri"

    @property
    def symbol(self) -> str:
        """Modal symbol used in clause names."""
        return "□" if self is BisimKind.BOX else "▲"


@dataclass(frozen=True)
class BisimRelation:
    """A candidate bisimulation: a nonempty set of world pairs over one model."""

    kind: BisimKind
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", BisimKind(self.kind))
        object.__setattr__(self, "pairs", frozenset((a, b) for a, b in self.pairs))
        if not self.pairs:
            raise KripkeError("a bisimulation relation must be nonempty")

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def __or__(self, other: BisimRelation) -> BisimRelation:
        return BisimRelation(self.kind, self.pairs | other.pairs)

    def to_json(self) -> dict[str, object]:
        """Document form with pairs sorted."""
        return {"kind": self.kind.value, "pairs": [list(p) for p in sorted(self.pairs)]}


def _rows(size: int, pairs: Iterable[tuple[int, int]]) -> tuple[list[int], list[int]]:
    rows = [0] * size
    cols = [0] * size
    for x, y in pairs:
        rows[x] |= 1 << y
        cols[y] |= 1 << x
    return rows, cols


def _signatures(model: Model) -> list[int]:
    return [
        sum(1 << a for a, atom in enumerate(model.atoms) if model.atom_mask(atom) >> i & 1)
        for i in range(model.frame.size)
    ]


def _clause_failures(
    x: int,
    y: int,
    succ: Sequence[int],
    rows: Sequence[int],
    cols: Sequence[int],
    kind: BisimKind,
) -> Iterator[tuple[str, int]]:
    """Failed clauses at ``(x, y)`` with the successor lacking a partner."""
    guarded = kind is BisimKind.BLACKTRI
    forth = succ[x] & ~rows[x] if guarded else succ[x]
    for t in iter_bits(forth):
        if not succ[y] & rows[t]:
            yield "Forth", t
            break
    back = succ[y] & ~rows[y] if guarded else succ[y]
    for t in iter_bits(back):
        if not succ[x] & cols[t]:
            yield "Back", t
            break


def check_bisimulation(model: Model, relation: BisimRelation) -> BisimReport:
    """Check every pair of ``relation`` against the clauses of its kind.

    Pairs are visited in lexicographic world-index order; each violated
    clause is reported once per pair.

    Raises:
        UnknownWorldError: if a pair uses a world outside ``model``.
    """
    kind = relation.kind
    succ = model.succ_masks
    indexed = sorted((model.index_of(a), model.index_of(b)) for a, b in relation.pairs)
    rows, cols = _rows(model.frame.size, indexed)
    signature = _signatures(model)
    worlds = model.worlds
    report = BisimReport(kind=kind.value, pairs_checked=len(indexed))
    for x, y in indexed:
        pair = (worlds[x], worlds[y])
        if signature[x] != signature[y]:
            report.violations.append(
                ClauseViolation(pair, "Inv", f"{pair[0]} and {pair[1]} disagree on an atom"),
            )
            continue
        for side, t in _clause_failures(x, y, succ, rows, cols, kind):
            source, other = (x, y) if side == "Forth" else (y, x)
            detail = (
                f"{worlds[source]} R {worlds[t]} but no successor of {worlds[other]} "
                f"is related to {worlds[t]}"
            )
            report.violations.append(ClauseViolation(pair, f"{kind.symbol}-{side}", detail))
    if report.violations:
        logger.debug(f"{len(report.violations)} clause violations in {kind.value} relation")
    return report


@dataclass(frozen=True)
class Bisimilarity:
    """Largest bisimulation between two models, kept on their disjoint union."""

    kind: BisimKind
    union: Model
    left: Mapping[str, str]
    right: Mapping[str, str]
    pairs: frozenset[tuple[str, str]]
    cross_pairs: frozenset[tuple[str, str]]
    rounds: int = 0

    def relates(self, left_world: str, right_world: str) -> bool:
        """``(M, s) ≈ (N, t)`` for ``s`` in the left and ``t`` in the right model.

        Raises:
            UnknownWorldError: if a world is not in its model.
        """
        for world, inject in ((left_world, self.left), (right_world, self.right)):
            if world not in inject:
                raise UnknownWorldError(world)
        return (left_world, right_world) in self.cross_pairs

    @property
    def empty(self) -> bool:
        """True when no two worlds are bisimilar."""
        return not self.pairs

    def as_relation(self) -> BisimRelation | None:
        """The relation over the union, or None when it is empty."""
        return BisimRelation(self.kind, self.pairs) if self.pairs else None

    def to_json(self) -> dict[str, object]:
        """Document form listing cross pairs by original names."""
        return {
            "kind": self.kind.value,
            "rounds": self.rounds,
            "pairs": [list(p) for p in sorted(self.cross_pairs)],
        }


def _refine(model: Model, kind: BisimKind) -> tuple[list[int], int]:
    """Rows of the greatest fixpoint of the clause refinement on ``model``."""
    size = model.frame.size
    succ = model.succ_masks
    signature = _signatures(model)
    rows = [
        sum(1 << y for y in range(size) if signature[y] == signature[x]) for x in range(size)
    ]
    rounds = 0
    while True:
        rounds += 1
        cols = [sum(1 << x for x in range(size) if rows[x] >> y & 1) for y in range(size)]
        refined = [
            sum(
                1 << y
                for y in iter_bits(rows[x])
                if next(_clause_failures(x, y, succ, rows, cols, kind), None) is None
            )
            for x in range(size)
        ]
        if refined == rows:
            break
        rows = refined
    logger.debug(f"{kind.value}-bisimilarity on {size} worlds stable after {rounds} rounds")
    return rows, rounds


def largest_bisimulation(left: Model, right: Model, kind: BisimKind) -> Bisimilarity:
    """Largest ``kind``-bisimulation over the disjoint union of two models.

    The result may be empty; that means no two worlds are bisimilar and is
    not an error.
    """
    kind = BisimKind(kind)
    union, inject_left, inject_right = disjoint_union(left, right)
    rows, rounds = _refine(union, kind)
    worlds = union.worlds
    pairs = frozenset(
        (worlds[x], worlds[y]) for x in range(len(worlds)) for y in iter_bits(rows[x])
    )
    cross = frozenset(
        (s, t)
        for s, tagged_s in inject_left.items()
        for t, tagged_t in inject_right.items()
        if (tagged_s, tagged_t) in pairs
    )
    return Bisimilarity(kind, union, inject_left, inject_right, pairs, cross, rounds)


def bisimilar(
    left: Model,
    left_world: str,
    right: Model,
    right_world: str,
    kind: BisimKind = BisimKind.BLACKTRI,
) -> bool:
    """``(M, s) ≈ (N, t)`` for the given kind.

    Raises:
        UnknownWorldError: if a world is not in its model.
    """
    left.index_of(left_world)
    right.index_of(right_world)
    return largest_bisimulation(left, right, kind).relates(left_world, right_world)


def bisimilarity_classes(model: Model, kind: BisimKind = BisimKind.BLACKTRI) -> list[list[str]]:
    """Partition of the worlds of ``model`` into bisimilarity classes.

    The refinement runs on ``model`` alone. On the union ``model ⊎ model``
    each round keeps a pair of tagged worlds exactly when it keeps the pair of
    their untagged originals, since the clauses only look at successors inside
    each copy. So the result equals the cross pairs of
    ``largest_bisimulation(model, model, kind)``, at half the size. The relation
    is taken together with the diagonal and closed into an equivalence, so
    every world lands in exactly one class.
    """
    rows, _ = _refine(model, kind)
    size = model.frame.size
    linked = [
        rows[x] | sum(1 << y for y in range(size) if rows[y] >> x & 1) | 1 << x
        for x in range(size)
    ]
    classes: list[list[str]] = []
    assigned = 0
    for x in range(size):
        if assigned >> x & 1:
            continue
        component, frontier = 0, 1 << x
        while frontier:
            component |= frontier
            reached = 0
            for y in iter_bits(frontier):
                reached |= linked[y]
            frontier = reached & ~component
        assigned |= component
        classes.append([model.worlds[i] for i in iter_bits(component)])
    return classes


def contract(model: Model) -> tuple[Model, dict[str, str]]:
    """Quotient of ``model`` by ▲-bisimilarity.

    Blocks are related when some member of one sees some member of the
    other. Every world of the result is ▲-bisimilar to the worlds of its
    block.

    Returns:
        The contracted model and the map from each world to its block name.
    """
    classes = bisimilarity_classes(model, BisimKind.BLACKTRI)
    result, block_of = quotient(model, classes)
    logger.debug(f"Contracted {model.frame.size} worlds to {result.frame.size}")
    return result, block_of
