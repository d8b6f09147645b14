"""Concept lattice construction by divide-and-conquer assembly.

The builder splits the context's attribute list in half, recursively
builds the two partial lattices, and merges them: every pairwise extent
intersection of the halves is a closed extent of the combined context, and
collecting the distinct intersections with unioned intents yields exactly
its concept set. Cover edges (the Hasse diagram) are computed afterwards
over the finished concept list.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from . import backend
from .context import Concept, FormalContext, canonical_key
from .errors import DimensionError, FormatError, NotSplittableError


@dataclass(frozen=True)
class ConceptLattice:
    """All concepts of a context, canonically ordered, plus cover edges.

    ``covers`` holds (child, parent) index pairs forming the transitive
    reduction of the subconcept order. Immutable and shareable.
    """

    context: FormalContext
    concepts: tuple[Concept, ...]
    covers: frozenset[tuple[int, int]]
    top_index: int
    bottom_index: int

    @property
    def top(self) -> Concept:
        return self.concepts[self.top_index]

    @property
    def bottom(self) -> Concept:
        return self.concepts[self.bottom_index]


def split_context(ctx: FormalContext) -> tuple[FormalContext, FormalContext]:
    """Partition the attributes at the midpoint (left half rounds up)."""
    if ctx.n_attributes < 2:
        raise NotSplittableError(
            f"cannot split a context with {ctx.n_attributes} attribute(s)")
    k = (ctx.n_attributes + 1) // 2
    low = (1 << k) - 1
    left = FormalContext(ctx.object_ids, ctx.attribute_names[:k],
                         tuple(r & low for r in ctx.rows))
    right = FormalContext(ctx.object_ids, ctx.attribute_names[k:],
                          tuple(r >> k for r in ctx.rows))
    return left, right


def find_psi(extent: int, registry: Mapping[int, Concept]) -> Concept | None:
    """Look up the concept already created for this exact extent, if any.

    The assembly loop keys its registry by extent: when a concept pair
    regenerates a known extent, the new intent is merged into the stored
    concept instead of creating a duplicate.
    """
    return registry.get(extent)


def _base_concept_masks(ctx: FormalContext) -> tuple[list[int], list[int]]:
    """Concepts of a context with at most one attribute."""
    full = ctx.full_object_mask
    if ctx.n_attributes == 0:
        return [full], [0]
    col = ctx.columns[0]
    if col == full:
        return [full], [1]
    return [full, col], [0, 1]


def _concept_masks(ctx: FormalContext) -> tuple[list[int], list[int]]:
    if ctx.n_attributes <= 1:
        return _base_concept_masks(ctx)
    left, right = split_context(ctx)
    ext1, int1 = _concept_masks(left)
    ext2, int2 = _concept_masks(right)
    shift = left.n_attributes
    return backend.merge_concept_pairs(
        ext1, int1, ext2, [m << shift for m in int2])


def _finish(ctx: FormalContext, extents: Sequence[int],
            intents: Sequence[int]) -> ConceptLattice:
    concepts = sorted((Concept(e, i) for e, i in zip(extents, intents)),
                      key=canonical_key)
    covers = find_lower_covers(concepts)
    # canonical order is extent-cardinality ascending: the unique minimal
    # extent sorts first and the full-extent top sorts last
    return ConceptLattice(ctx, tuple(concepts), covers,
                          top_index=len(concepts) - 1, bottom_index=0)


def build_lattice(ctx: FormalContext) -> ConceptLattice:
    """Full lattice of ``ctx``: concept set plus Hasse cover edges.

    A context with no attributes yields the single concept (all objects, {}).
    """
    extents, intents = _concept_masks(ctx)
    return _finish(ctx, extents, intents)


def appose(ctx1: FormalContext, ctx2: FormalContext) -> FormalContext:
    """Side-by-side combination of two contexts over the same objects."""
    if ctx1.object_ids != ctx2.object_ids:
        raise DimensionError("contexts must share the same object list")
    k = ctx1.n_attributes
    return FormalContext(ctx1.object_ids,
                         ctx1.attribute_names + ctx2.attribute_names,
                         tuple(a | (b << k) for a, b in zip(ctx1.rows, ctx2.rows)))


def assemble(l1: ConceptLattice, l2: ConceptLattice) -> ConceptLattice:
    """Merge two partial lattices built over an attribute partition.

    Walks every concept pair in canonical order, intersecting extents and
    unioning intents; duplicate extents are folded together. The result is
    the lattice of the apposed context.
    """
    ctx = appose(l1.context, l2.context)
    shift = l1.context.n_attributes
    extents, intents = backend.merge_concept_pairs(
        [c.extent for c in l1.concepts], [c.intent for c in l1.concepts],
        [c.extent for c in l2.concepts],
        [c.intent << shift for c in l2.concepts])
    return _finish(ctx, extents, intents)


def find_lower_covers(concepts: Sequence[Concept]) -> frozenset[tuple[int, int]]:
    """Cover edges (child, parent): strict extent inclusion with nothing between.

    The transitive reduction of a partial order is unique, so both kernel
    backends return the same edge set.
    """
    return frozenset(backend.lower_covers([c.extent for c in concepts]))


def lattice_to_dict(lattice: ConceptLattice) -> dict:
    ctx = lattice.context
    return {
        "objects": list(ctx.object_ids),
        "attributes": list(ctx.attribute_names),
        "concepts": [
            {"extent": list(ctx.object_names(c.extent)),
             "intent": list(ctx.attribute_labels(c.intent))}
            for c in lattice.concepts
        ],
        "covers": sorted(list(e) for e in lattice.covers),
        "top": lattice.top_index,
        "bottom": lattice.bottom_index,
    }


def lattice_from_dict(data: dict) -> ConceptLattice:
    try:
        object_ids = tuple(data["objects"])
        attributes = tuple(data["attributes"])
        raw = data["concepts"]
        covers = frozenset((int(a), int(b)) for a, b in data["covers"])
        top = int(data["top"])
        bottom = int(data["bottom"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed lattice document: {exc}") from exc
    oidx = {o: i for i, o in enumerate(object_ids)}
    aidx = {a: i for i, a in enumerate(attributes)}
    # Incidence is recoverable: o has a iff some concept holds both.
    rows = [0] * len(object_ids)
    concepts = []
    for entry in raw:
        extent = 0
        intent = 0
        for o in entry["extent"]:
            extent |= 1 << oidx[o]
        for a in entry["intent"]:
            intent |= 1 << aidx[a]
        concepts.append(Concept(extent, intent))
        for o in entry["extent"]:
            rows[oidx[o]] |= intent
    ctx = FormalContext(object_ids, attributes, tuple(rows))
    return ConceptLattice(ctx, tuple(concepts), covers, top, bottom)


def save_lattice(lattice: ConceptLattice, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(lattice_to_dict(lattice), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")


def load_lattice(path: str | Path) -> ConceptLattice:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return lattice_from_dict(data)


def lattice_to_dot(lattice: ConceptLattice) -> str:
    """Hasse diagram in DOT form, children drawn below their parents."""
    ctx = lattice.context
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for i, c in enumerate(lattice.concepts):
        extent = ", ".join(ctx.object_names(c.extent)) or "{}"
        intent = ", ".join(ctx.attribute_labels(c.intent)) or "{}"
        lines.append(f'  n{i} [label="{extent}\\n{intent}" shape=box];')
    for child, parent in sorted(lattice.covers):
        lines.append(f"  n{child} -> n{parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def verify_against_naive(lattice: ConceptLattice) -> bool:
    """True iff the concept set equals the brute-force enumeration."""
    from .context import enumerate_concepts_naive

    return list(lattice.concepts) == enumerate_concepts_naive(lattice.context)


__all__ = [
    "ConceptLattice", "appose", "assemble", "build_lattice",
    "find_lower_covers", "find_psi", "lattice_from_dict", "lattice_to_dict",
    "lattice_to_dot", "load_lattice", "save_lattice", "split_context",
    "verify_against_naive",
]
