"""Finite Kripke frames and models.

Worlds are opaque strings kept in a fixed order; algorithms work on the
bitmask view (``succ_masks``, ``atom_mask``) where world ``i`` is bit ``i``.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from types import MappingProxyType

from nckit.types.result_types import PropertyCheck

from .exceptions import KripkeError, QuotientError, UnknownWorldError
from .formula import ATOM_PATTERN, RESERVED_WORDS


logger = logging.getLogger(__name__)

LEFT_TAG = "·L"
RIGHT_TAG = "·R"


class FrameProperty(str, Enum):
    """First-order conditions on the accessibility relation."""

    SERIAL = "serial"
    REFLEXIVE = "reflexive"
    SYMMETRIC = "symmetric"
    TRANSITIVE = "transitive"
    EUCLIDEAN = "euclidean"
    COREFLEXIVE = "coreflexive"
    EQUIVALENCE = "equivalence"

    @classmethod
    def parse_list(cls, text: str) -> frozenset[FrameProperty]:
        """Parse a comma separated list such as ``"reflexive,euclidean"``."""
        names = [part.strip().lower() for part in text.split(",") if part.strip()]
        try:
            return frozenset(cls(name) for name in names)
        except ValueError as e:
            valid = ", ".join(member.value for member in cls)
            raise KripkeError(f"unknown frame property in {text!r}; valid: {valid}") from e


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    index = 0
    while mask:
        if mask & 1:
            yield index
        mask >>= 1
        index += 1


def find_violation(succ: Sequence[int], prop: FrameProperty) -> tuple[int, ...] | None:
    """First tuple of world indices violating ``prop``, or None when it holds.

    Tuples are found in lexicographic index order: ``(s,)`` for seriality and
    reflexivity, ``(s, t)`` with ``sRt`` for symmetry and coreflexivity,
    ``(s, t, u)`` with ``sRt, tRu`` (transitivity) or ``sRt, sRu``
    (Euclideanness).
    """
    if prop is FrameProperty.EQUIVALENCE:
        for part in (FrameProperty.REFLEXIVE, FrameProperty.SYMMETRIC, FrameProperty.TRANSITIVE):
            witness = find_violation(succ, part)
            if witness is not None:
                return witness
        return None
    for s, out in enumerate(succ):
        if prop is FrameProperty.SERIAL and not out:
            return (s,)
        if prop is FrameProperty.REFLEXIVE and not out >> s & 1:
            return (s,)
        for t in iter_bits(out):
            if prop is FrameProperty.SYMMETRIC and not succ[t] >> s & 1:
                return (s, t)
            if prop is FrameProperty.COREFLEXIVE and t != s:
                return (s, t)
            if prop is FrameProperty.TRANSITIVE:
                missing = succ[t] & ~out
                if missing:
                    return (s, t, next(iter_bits(missing)))
            if prop is FrameProperty.EUCLIDEAN:
                missing = out & ~succ[t]
                if missing:
                    return (s, t, next(iter_bits(missing)))
    return None


def _violated_part(succ: Sequence[int], prop: FrameProperty) -> FrameProperty | None:
    if prop is not FrameProperty.EQUIVALENCE:
        return prop
    for part in (FrameProperty.REFLEXIVE, FrameProperty.SYMMETRIC, FrameProperty.TRANSITIVE):
        if find_violation(succ, part) is not None:
            return part
    return None


def satisfies_all(succ: Sequence[int], properties: Iterable[FrameProperty]) -> bool:
    """True when the relation given by ``succ`` has every property."""
    return all(find_violation(succ, prop) is None for prop in properties)


@dataclass(frozen=True)
class Frame:
    """A nonempty finite set of worlds with an accessibility relation."""

    worlds: tuple[str, ...]
    relation: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "worlds", tuple(self.worlds))
        object.__setattr__(self, "relation", frozenset((a, b) for a, b in self.relation))
        if not self.worlds:
            raise KripkeError("a frame needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise KripkeError(f"duplicate world names in {list(self.worlds)}")
        known = set(self.worlds)
        for source, target in self.relation:
            if source not in known or target not in known:
                raise KripkeError(f"relation pair ({source}, {target}) uses an unknown world")

    @classmethod
    def from_masks(cls, succ: Sequence[int], names: Sequence[str] | None = None) -> Frame:
        """Build a frame from successor bitmasks; worlds default to ``w0, w1, ...``."""
        worlds = tuple(names) if names is not None else tuple(f"w{i}" for i in range(len(succ)))
        relation = {(worlds[s], worlds[t]) for s, out in enumerate(succ) for t in iter_bits(out)}
        return cls(worlds, frozenset(relation))

    @cached_property
    def index(self) -> Mapping[str, int]:
        """Position of every world."""
        return MappingProxyType({world: i for i, world in enumerate(self.worlds)})

    @cached_property
    def succ_masks(self) -> tuple[int, ...]:
        """Successor set of every world as a bitmask."""
        masks = [0] * len(self.worlds)
        for source, target in self.relation:
            masks[self.index[source]] |= 1 << self.index[target]
        return tuple(masks)

    @property
    def size(self) -> int:
        """Number of worlds."""
        return len(self.worlds)

    @property
    def full_mask(self) -> int:
        """Bitmask of the whole carrier."""
        return (1 << len(self.worlds)) - 1

    def index_of(self, world: str) -> int:
        """Position of ``world``.

        Raises:
            UnknownWorldError: if the frame has no such world.
        """
        try:
            return self.index[world]
        except KeyError:
            raise UnknownWorldError(world) from None

    def mask_of(self, worlds: Iterable[str]) -> int:
        """Bitmask of a set of worlds."""
        mask = 0
        for world in worlds:
            mask |= 1 << self.index_of(world)
        return mask

    def worlds_of(self, mask: int) -> frozenset[str]:
        """World set of a bitmask."""
        return frozenset(self.worlds[i] for i in iter_bits(mask))

    def successors(self, world: str) -> frozenset[str]:
        """``R(s)``, the worlds accessible from ``world``."""
        return self.worlds_of(self.succ_masks[self.index_of(world)])

    def has_property(self, prop: FrameProperty) -> PropertyCheck:
        """Check ``prop``; on failure the result carries a violating tuple of worlds."""
        witness = find_violation(self.succ_masks, prop)
        if witness is None:
            return PropertyCheck(prop.value, holds=True)
        violated = _violated_part(self.succ_masks, prop)
        return PropertyCheck(
            prop.value,
            holds=False,
            witness=tuple(self.worlds[i] for i in witness),
            violated=violated.value if violated else None,
        )

    def properties(self) -> dict[FrameProperty, PropertyCheck]:
        """All seven property checks."""
        return {prop: self.has_property(prop) for prop in FrameProperty}

    def to_json(self) -> dict[str, object]:
        """Document form used by frame files."""
        return {
            "worlds": list(self.worlds),
            "relation": [
                [self.worlds[s], self.worlds[t]]
                for s, out in enumerate(self.succ_masks)
                for t in iter_bits(out)
            ],
        }


@dataclass(frozen=True)
class Model:
    """A frame together with a valuation; atoms not mentioned are nowhere true."""

    frame: Frame
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        normalized: dict[str, frozenset[str]] = {}
        for atom in sorted(self.valuation):
            if not ATOM_PATTERN.fullmatch(atom) or atom in RESERVED_WORDS:
                raise KripkeError(f"invalid atom name {atom!r} in valuation")
            worlds = frozenset(self.valuation[atom])
            unknown = worlds - set(self.frame.worlds)
            if unknown:
                raise KripkeError(f"valuation of {atom} uses unknown worlds {sorted(unknown)}")
            normalized[atom] = worlds
        object.__setattr__(self, "valuation", MappingProxyType(normalized))

    @classmethod
    def build(
        cls,
        worlds: Iterable[str],
        relation: Iterable[tuple[str, str]] = (),
        valuation: Mapping[str, Iterable[str]] | None = None,
    ) -> Model:
        """Construct a model from plain collections."""
        frame = Frame(tuple(worlds), frozenset(relation))
        return cls(frame, {atom: frozenset(ws) for atom, ws in (valuation or {}).items()})

    @property
    def worlds(self) -> tuple[str, ...]:
        """Worlds in their fixed order."""
        return self.frame.worlds

    @property
    def relation(self) -> frozenset[tuple[str, str]]:
        """Accessibility pairs."""
        return self.frame.relation

    @property
    def atoms(self) -> tuple[str, ...]:
        """Atoms the valuation mentions, sorted."""
        return tuple(self.valuation)

    @property
    def succ_masks(self) -> tuple[int, ...]:
        """Successor bitmasks of the underlying frame."""
        return self.frame.succ_masks

    @property
    def full_mask(self) -> int:
        """Bitmask of the whole carrier."""
        return self.frame.full_mask

    def index_of(self, world: str) -> int:
        """Position of ``world``; raises ``UnknownWorldError``."""
        return self.frame.index_of(world)

    def successors(self, world: str) -> frozenset[str]:
        """``R(s)``, the worlds accessible from ``world``."""
        return self.frame.successors(world)

    @cached_property
    def atom_masks(self) -> Mapping[str, int]:
        """Truth set of every mentioned atom as a bitmask."""
        return MappingProxyType(
            {atom: self.frame.mask_of(worlds) for atom, worlds in self.valuation.items()},
        )

    def atom_mask(self, atom: str) -> int:
        """Truth set of ``atom`` as a bitmask; 0 for unmentioned atoms."""
        return self.atom_masks.get(atom, 0)

    def label(self, world: str) -> frozenset[str]:
        """Atoms true at ``world``."""
        self.index_of(world)
        return frozenset(atom for atom, worlds in self.valuation.items() if world in worlds)

    def with_valuation(self, valuation: Mapping[str, Iterable[str]]) -> Model:
        """Same frame, different valuation."""
        return Model(self.frame, {atom: frozenset(ws) for atom, ws in valuation.items()})

    def to_json(self) -> dict[str, object]:
        """Document form used by model files."""
        document = self.frame.to_json()
        document["valuation"] = {
            atom: [w for w in self.worlds if w in worlds] for atom, worlds in self.valuation.items()
        }
        return document


def enumerate_relations(
    size: int,
    properties: Iterable[FrameProperty] = (),
) -> Iterator[tuple[int, ...]]:
    """Every relation on ``size`` worlds with ``properties``, as successor masks.

    Relations come in increasing code order, where world ``s`` owns bits
    ``s*size .. s*size+size-1`` of the code.
    """
    wanted = tuple(properties)
    full = (1 << size) - 1
    for code in range(1 << (size * size)):
        succ = tuple((code >> (s * size)) & full for s in range(size))
        if satisfies_all(succ, wanted):
            yield succ


def enumerate_frames(size: int, properties: Iterable[FrameProperty] = ()) -> Iterator[Frame]:
    """Every frame on worlds ``w0 .. w{size-1}`` with ``properties``."""
    for succ in enumerate_relations(size, properties):
        yield Frame.from_masks(succ)


def disjoint_union(left: Model, right: Model) -> tuple[Model, dict[str, str], dict[str, str]]:
    """Disjoint union with worlds tagged ``·L`` and ``·R``.

    Returns:
        The union model and the two injections from original to tagged names.
    """
    inject_left = {w: f"{w}{LEFT_TAG}" for w in left.worlds}
    inject_right = {w: f"{w}{RIGHT_TAG}" for w in right.worlds}
    worlds = [*inject_left.values(), *inject_right.values()]
    relation = {(inject_left[a], inject_left[b]) for a, b in left.relation}
    relation |= {(inject_right[a], inject_right[b]) for a, b in right.relation}
    valuation: dict[str, set[str]] = {}
    for model, inject in ((left, inject_left), (right, inject_right)):
        for atom, holders in model.valuation.items():
            valuation.setdefault(atom, set()).update(inject[w] for w in holders)
    union = Model.build(worlds, relation, valuation)
    logger.debug(f"Disjoint union of {left.frame.size} and {right.frame.size} worlds")
    return union, inject_left, inject_right


def block_name(members: Sequence[str]) -> str:
    """Default name of a quotient world."""
    return "[" + ",".join(members) + "]"


def quotient(model: Model, partition: Iterable[Iterable[str]]) -> tuple[Model, dict[str, str]]:
    """Quotient of ``model`` by a partition of its worlds.

    ``[s] R [t]`` holds when some member of ``[s]`` sees some member of ``[t]``;
    ``[V](p)`` holds the blocks of worlds in ``V(p)``.

    Returns:
        The quotient model and the map from each world to its block name.

    Raises:
        QuotientError: if the blocks do not partition the worlds or a block
            mixes worlds that disagree on an atom.
    """
    blocks: list[list[str]] = []
    seen: set[str] = set()
    for raw in partition:
        block = sorted(set(raw), key=model.index_of)
        if not block:
            raise QuotientError("empty block in partition")
        overlap = seen.intersection(block)
        if overlap:
            raise QuotientError(f"worlds {sorted(overlap)} occur in more than one block")
        seen.update(block)
        blocks.append(block)
    missing = [w for w in model.worlds if w not in seen]
    if missing:
        raise QuotientError(f"worlds {missing} are not covered by the partition")

    for block in blocks:
        labels = {model.label(w) for w in block}
        if len(labels) > 1:
            raise QuotientError(f"block {block_name(block)} mixes worlds that disagree on an atom")

    blocks.sort(key=lambda b: model.index_of(b[0]))
    block_of = {w: block_name(block) for block in blocks for w in block}
    relation = {(block_of[a], block_of[b]) for a, b in model.relation}
    valuation = {atom: {block_of[w] for w in holders} for atom, holders in model.valuation.items()}
    result = Model.build([block_name(b) for b in blocks], relation, valuation)
    return result, block_of


def isomorphism(left: Model, right: Model) -> dict[str, str] | None:
    """A world bijection preserving relation and valuation, or None.

    Atoms missing from one valuation count as empty. Brute force over
    permutations; meant for small models.
    """
    if left.frame.size != right.frame.size:
        return None
    atoms = sorted(set(left.atoms) | set(right.atoms))

    def signature(model: Model, i: int) -> tuple[int, tuple[bool, ...]]:
        return (
            model.succ_masks[i].bit_count(),
            tuple(bool(model.atom_mask(a) >> i & 1) for a in atoms),
        )

    left_sig = [signature(left, i) for i in range(left.frame.size)]
    right_sig = [signature(right, i) for i in range(right.frame.size)]
    if sorted(left_sig) != sorted(right_sig):
        return None
    for perm in itertools.permutations(range(right.frame.size)):
        if any(left_sig[i] != right_sig[perm[i]] for i in range(len(perm))):
            continue
        if all(
            _image(left.succ_masks[i], perm) == right.succ_masks[perm[i]]
            for i in range(len(perm))
        ):
            return {left.worlds[i]: right.worlds[perm[i]] for i in range(len(perm))}
    return None


def _image(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for i in iter_bits(mask):
        out |= 1 << perm[i]
    return out
