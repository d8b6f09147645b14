"""Shared test utilities: fixtures, generators, and independent oracles.

The oracles here are deliberately written in the dumbest workable style
(worklist loops, triple loops) so they share no code path with the
implementations they check.
"""

from importlib.resources import files

import random

from latticecell import (Concept, DocumentVector, FormalContext,
                         load_context_csv)

DATA = files("latticecell") / "data"

# Per-object categories for the bundled 9-document context, aligned with
# its object order (Doc 1 .. Doc 9).
DEMO_LABELS = ("Sport", "Sport", "Television", "Television", "Economie",
               "Economie", "Sport", "Economie", "Television")
DEMO_CATEGORIES = ("Sport", "Economie", "Television")


def demo_context() -> FormalContext:
    return load_context_csv(DATA / "context.csv")


def demo_labels_map() -> dict[str, str]:
    ctx = demo_context()
    return dict(zip(ctx.object_ids, DEMO_LABELS))


def query_vector() -> DocumentVector:
    """The worked-example query: Ministre and Puissance present."""
    return DocumentVector((1 << 3) | (1 << 4), 6, "Economie", "query")


def random_context(rnd: random.Random, max_objects: int = 12,
                   max_attributes: int = 10) -> FormalContext:
    n_obj = rnd.randint(1, max_objects)
    n_attr = rnd.randint(1, max_attributes)
    # mix densities: AND-ing random masks thins the incidence
    layers = rnd.choice((1, 1, 2, 3))
    rows = []
    for _ in range(n_obj):
        row = (1 << n_attr) - 1
        for _ in range(layers):
            row &= rnd.getrandbits(n_attr)
        rows.append(row)
    return FormalContext(tuple(f"o{i}" for i in range(n_obj)),
                         tuple(f"a{j}" for j in range(n_attr)),
                         tuple(rows))


def naive_forward_chain(n_facts, premises, conclusions, initial,
                        fact_if=None, rule_ir=None) -> int:
    """Worklist forward chainer over mask-encoded rules; returns final facts."""
    if fact_if is None:
        fact_if = (1 << n_facts) - 1
    if rule_ir is None:
        rule_ir = (1 << len(premises)) - 1
    facts = initial & fact_if
    changed = True
    while changed:
        changed = False
        for j, (prem, concl) in enumerate(zip(premises, conclusions)):
            if not (rule_ir >> j) & 1 or prem == 0:
                continue
            if prem & ~facts == 0:
                add = concl & fact_if & ~facts
                if add:
                    facts |= add
                    changed = True
    return facts


def brute_transitive_reduction(concepts: list[Concept]) -> frozenset[tuple[int, int]]:
    """Cover edges by triple loop over the full strict-inclusion relation."""
    n = len(concepts)
    less = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            ei, ej = concepts[i].extent, concepts[j].extent
            less[i][j] = ei != ej and ei | ej == ej
    edges = set()
    for i in range(n):
        for j in range(n):
            if not less[i][j]:
                continue
            if not any(less[i][k] and less[k][j] for k in range(n)):
                edges.add((i, j))
    return frozenset(edges)


def concept_set(concepts) -> set[tuple[int, int]]:
    return {(c.extent, c.intent) for c in concepts}
