"""Formal contexts, Galois derivation operators, and the naive concept oracle.

A formal context is a binary incidence table between objects and
attributes. The two derivation operators map object sets to the attributes
they share and attribute sets to the objects carrying them; their
composition is a closure operator whose fixed points are the concepts.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .bits import bit_indices, bits_to_list, list_to_bits, mask_from_indices
from .errors import CapacityError, DimensionError, FormatError

# Exhaustive enumeration walks every attribute subset; refuse beyond this.
NAIVE_ATTRIBUTE_LIMIT = 20


class Concept(NamedTuple):
    """A closed (extent, intent) pair, both as int bitsets."""

    extent: int
    intent: int


@dataclass(frozen=True)
class FormalContext:
    """Immutable object x attribute incidence table.

    ``rows[o]`` is the attribute mask of object o; ``columns[a]`` (derived)
    is the object mask of attribute a. Safe to share across threads.
    """

    object_ids: tuple[str, ...]
    attribute_names: tuple[str, ...]
    rows: tuple[int, ...]
    columns: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.object_ids)) != len(self.object_ids):
            raise DimensionError("duplicate object ids")
        if len(set(self.attribute_names)) != len(self.attribute_names):
            raise DimensionError("duplicate attribute names")
        if len(self.rows) != len(self.object_ids):
            raise DimensionError(
                f"{len(self.rows)} rows for {len(self.object_ids)} objects")
        full = self.full_attribute_mask
        for oid, row in zip(self.object_ids, self.rows):
            if row < 0 or row & ~full:
                raise DimensionError(f"row for {oid!r} exceeds attribute count")
        cols = [0] * len(self.attribute_names)
        for o, row in enumerate(self.rows):
            bit = 1 << o
            for a in bit_indices(row):
                cols[a] |= bit
        object.__setattr__(self, "columns", tuple(cols))

    @classmethod
    def from_matrix(cls, object_ids: Sequence[str], attribute_names: Sequence[str],
                    matrix: Sequence[Sequence[int]]) -> "FormalContext":
        """Build from a row-major 0/1 matrix."""
        rows = tuple(list_to_bits(r) for r in matrix)
        for i, r in enumerate(matrix):
            if len(r) != len(attribute_names):
                raise DimensionError(f"row {i} has {len(r)} cells, "
                                     f"expected {len(attribute_names)}")
        return cls(tuple(object_ids), tuple(attribute_names), rows)

    @property
    def n_objects(self) -> int:
        return len(self.object_ids)

    @property
    def n_attributes(self) -> int:
        return len(self.attribute_names)

    @property
    def full_object_mask(self) -> int:
        return (1 << self.n_objects) - 1

    @property
    def full_attribute_mask(self) -> int:
        return (1 << self.n_attributes) - 1

    @property
    def incidence(self) -> list[list[int]]:
        """The table as a row-major 0/1 matrix."""
        return [bits_to_list(r, self.n_attributes) for r in self.rows]

    def object_mask(self, ids: Iterable[str]) -> int:
        index = {oid: i for i, oid in enumerate(self.object_ids)}
        return mask_from_indices(index[i] for i in ids)

    def attribute_mask(self, names: Iterable[str]) -> int:
        index = {name: i for i, name in enumerate(self.attribute_names)}
        return mask_from_indices(index[n] for n in names)

    def object_names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.object_ids[i] for i in bit_indices(mask))

    def attribute_labels(self, mask: int) -> tuple[str, ...]:
        return tuple(self.attribute_names[i] for i in bit_indices(mask))


def _check_mask(mask: int, size: int, what: str) -> None:
    if mask < 0 or mask >> size:
        raise DimensionError(f"{what} mask does not fit {size} bits")


def derive_intent(ctx: FormalContext, objects: int) -> int:
    """Attributes shared by every object in the mask (all attributes for 0)."""
    _check_mask(objects, ctx.n_objects, "object")
    intent = ctx.full_attribute_mask
    m = objects
    while m and intent:
        low = m & -m
        intent &= ctx.rows[low.bit_length() - 1]
        m ^= low
    return intent


def derive_extent(ctx: FormalContext, attributes: int) -> int:
    """Objects carrying every attribute in the mask (all objects for 0)."""
    _check_mask(attributes, ctx.n_attributes, "attribute")
    extent = ctx.full_object_mask
    m = attributes
    while m and extent:
        low = m & -m
        extent &= ctx.columns[low.bit_length() - 1]
        m ^= low
    return extent


def close_objects(ctx: FormalContext, objects: int) -> Concept:
    """Smallest concept whose extent contains the given objects."""
    intent = derive_intent(ctx, objects)
    return Concept(derive_extent(ctx, intent), intent)


def is_subconcept(c1: Concept, c2: Concept) -> bool:
    """True iff c1 <= c2, i.e. extent(c1) is a subset of extent(c2).

    Both concepts must come from the same context.
    """
    return c1.extent | c2.extent == c2.extent


def is_closed(ctx: FormalContext, concept: Concept) -> bool:
    """True iff extent and intent derive each other in ``ctx``."""
    return (derive_intent(ctx, concept.extent) == concept.intent
            and derive_extent(ctx, concept.intent) == concept.extent)


def canonical_key(concept: Concept) -> tuple[int, tuple[int, ...]]:
    """Sort key: extent cardinality ascending, then lexicographic extent."""
    return concept.extent.bit_count(), bit_indices(concept.extent)


def enumerate_concepts_naive(ctx: FormalContext) -> list[Concept]:
    """Brute-force oracle: close every attribute subset.

    Exponential in the attribute count; guarded at NAIVE_ATTRIBUTE_LIMIT.
    Returns each concept exactly once, in canonical order.
    """
    if ctx.n_attributes > NAIVE_ATTRIBUTE_LIMIT:
        raise CapacityError(
            f"naive enumeration refuses {ctx.n_attributes} attributes "
            f"(limit {NAIVE_ATTRIBUTE_LIMIT})")
    seen: dict[int, int] = {}
    for subset in range(1 << ctx.n_attributes):
        extent = derive_extent(ctx, subset)
        if extent not in seen:
            seen[extent] = derive_intent(ctx, extent)
    concepts = [Concept(e, i) for e, i in seen.items()]
    concepts.sort(key=canonical_key)
    return concepts


def load_context_csv(path: str | Path) -> FormalContext:
    """Read a context from CSV: header = attribute names, first column = id."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 1:
            raise FormatError(f"{path}: missing header row")
        attributes = tuple(header[1:])
        object_ids: list[str] = []
        rows: list[int] = []
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(attributes) + 1:
                raise FormatError(f"{path}: row {lineno}: expected "
                                  f"{len(attributes) + 1} cells, got {len(record)}")
            mask = 0
            for col, cell in enumerate(record[1:]):
                if cell == "1":
                    mask |= 1 << col
                elif cell != "0":
                    raise FormatError(
                        f"{path}: row {lineno}, column {col + 2}: "
                        f"cell must be '0' or '1', got {cell!r}")
            object_ids.append(record[0])
            rows.append(mask)
    return FormalContext(tuple(object_ids), attributes, tuple(rows))


def save_context_csv(ctx: FormalContext, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", *ctx.attribute_names])
        for oid, row in zip(ctx.object_ids, ctx.rows):
            writer.writerow([oid, *bits_to_list(row, ctx.n_attributes)])
