"""Similarity-driven activation, inference, and majority vote.

A document vector is scored against every intent fact of the model; the
most similar intents are activated (EF = 1), the engine runs to its
fixpoint, and the class distributions of the established extent facts are
averaged. The argmax category wins, ties broken by category order. No
activation or no established extent yields an explicitly unclassifiable
prediction.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .compiler import CellularModel, ClassDistribution
from .engine import run_inference, set_facts
from .errors import DimensionError, EmptyInputError
from .textprep import DocumentVector

MEASURES = ("jaccard", "cosine", "dice", "inner")


def similarity(v1: Sequence[int], v2: Sequence[int], measure: str = "inner"):
    """Binary-set similarity of two equal-length 0/1 vectors.

    jaccard = |∩| / |∪|, dice = 2|∩| / (|v1| + |v2|),
    cosine = |∩| / sqrt(|v1| |v2|), inner = |∩|. Measures with an empty
    denominator score 0. Inner returns an int, the rest floats in [0, 1].
    """
    if len(v1) != len(v2):
        raise DimensionError(f"vector lengths differ: {len(v1)} vs {len(v2)}")
    inter = sum(1 for a, b in zip(v1, v2) if a and b)
    n1 = sum(1 for a in v1 if a)
    n2 = sum(1 for b in v2 if b)
    return _score_value(inter, n1, n2, measure)


def _score_value(inter: int, n1: int, n2: int, measure: str):
    if measure == "inner":
        return inter
    if measure == "jaccard":
        union = n1 + n2 - inter
        return inter / union if union else 0.0
    if measure == "dice":
        denom = n1 + n2
        return 2 * inter / denom if denom else 0.0
    if measure == "cosine":
        denom = n1 * n2
        return inter / math.sqrt(denom) if denom else 0.0
    raise ValueError(f"unknown similarity measure {measure!r}")


def _score_key(inter: int, n1: int, n2: int, measure: str):
    """Exact, order-preserving ranking key (cosine is compared squared)."""
    if measure == "inner":
        return inter
    if measure == "jaccard":
        union = n1 + n2 - inter
        return Fraction(inter, union) if union else Fraction(0)
    if measure == "dice":
        denom = n1 + n2
        return Fraction(2 * inter, denom) if denom else Fraction(0)
    if measure == "cosine":
        denom = n1 * n2
        return Fraction(inter * inter, denom) if denom else Fraction(0)
    raise ValueError(f"unknown similarity measure {measure!r}")


def parse_activation(policy: str) -> tuple[str, int | float | None]:
    """Parse 'max', 'topk:K', or 'threshold:T'."""
    if policy == "max":
        return "max", None
    kind, sep, arg = policy.partition(":")
    if kind == "topk" and sep:
        k = int(arg)
        if k < 1:
            raise ValueError("topk needs K >= 1")
        return "topk", k
    if kind == "threshold" and sep:
        return "threshold", float(arg)
    raise ValueError(f"unknown activation policy {policy!r}; "
                     "expected max, topk:K, or threshold:T")


def _scores(model: CellularModel, doc: DocumentVector, measure: str):
    if doc.size != len(model.vocabulary):
        raise DimensionError(f"document vector has {doc.size} bits, model "
                             f"vocabulary has {len(model.vocabulary)} terms")
    bits = doc.bits
    n1 = bits.bit_count()
    return [(fact_idx, (bits & mask).bit_count(), n1, mask.bit_count())
            for fact_idx, mask in model.intent_facts]


def activate(model: CellularModel, doc: DocumentVector, measure: str = "inner",
             policy: str = "max") -> tuple[int, ...]:
    """Intent fact indices to establish, per the activation policy.

    max: every intent achieving the (positive) maximal score. topk:K: the K
    best by (score desc, intent order), positive scores only. threshold:T:
    every intent scoring at least T (and above zero). May be empty.
    """
    kind, arg = parse_activation(policy)
    scored = [(fact_idx, _score_key(inter, n1, n2, measure), inter, n1, n2)
              for fact_idx, inter, n1, n2 in _scores(model, doc, measure)]
    positive = [(f, key) for f, key, inter, _, _ in scored if inter > 0]
    if not positive:
        return ()
    if kind == "max":
        best = max(key for _, key in positive)
        return tuple(f for f, key in positive if key == best)
    if kind == "topk":
        ranked = sorted(positive, key=lambda fk: (-fk[1], fk[0]))
        return tuple(sorted(f for f, _ in ranked[:arg]))
    # threshold compares against the true measure value
    chosen = [f for f, _, inter, n1, n2 in scored
              if inter > 0 and _score_value(inter, n1, n2, measure) >= arg]
    return tuple(chosen)


@dataclass(frozen=True)
class Prediction:
    """Outcome of classifying one document vector.

    ``category`` is None when the document is unclassifiable (no intent
    activated, or no extent fact established).
    """

    category: str | None
    distribution: ClassDistribution | None
    fired_vertices: tuple[int, ...]
    activated_intents: tuple[int, ...]

    @property
    def unclassifiable(self) -> bool:
        return self.category is None


def vote(distributions: Sequence[ClassDistribution],
         categories: Sequence[str]) -> tuple[str, ClassDistribution]:
    """Componentwise mean; argmax category, ties by category order."""
    if not distributions:
        raise EmptyInputError("vote over zero distributions")
    mean = ClassDistribution.mean(distributions)
    if len(mean.fractions) != len(categories):
        raise DimensionError("distribution width does not match categories")
    return categories[mean.argmax()], mean


def classify(model: CellularModel, doc: DocumentVector, measure: str = "inner",
             policy: str = "max",
             trace: list[str] | None = None) -> Prediction:
    """Activate, run the engine to fixpoint, and vote.

    Deterministic for identical inputs; the shared model is never mutated.
    """
    activated = activate(model, doc, measure, policy)
    if not activated:
        return Prediction(None, None, (), ())
    engine = model.fresh_engine()
    set_facts(engine, activated)
    run_inference(engine, trace)
    fired = tuple(fact_idx for fact_idx, _ in model.extent_facts
                  if (engine.ef >> fact_idx) & 1)
    if not fired:
        return Prediction(None, None, (), activated)
    by_idx = dict(model.extent_facts)
    category, mean = vote([by_idx[f] for f in fired], model.categories)
    return Prediction(category, mean, fired, activated)
