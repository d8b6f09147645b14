"""Metrics, reference baselines, and the end-to-end experiment runner.

The runner loads a labeled corpus, splits it, builds the vocabulary and
lattice from the training half only, compiles the cellular model, and
classifies the test half once per configured similarity measure plus once
per baseline. Every classifier consumes the same binary vectors, so the
comparison isolates the classification method. Precision and recall are
macro-averaged over categories; unclassifiable documents count as wrong
for accuracy and as misses for recall.
"""

from __future__ import annotations

import math
import random
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .classify import MEASURES, Prediction, _score_key, classify, parse_activation
from .compiler import compile_model
from .errors import (CorpusError, DimensionError, EmptyInputError,
                     LabelingError)
from .lattice import build_lattice
from .textprep import (DEFAULT_FEATURE_COUNT, Document, DocumentVector,
                       build_context, build_vocabulary, default_stopwords,
                       load_corpus, load_stopwords, vectorize)

BASELINES = ("nb", "knn")


@dataclass
class ConfusionMatrix:
    """Counts indexed [true][predicted], plus per-true unclassified counts."""

    categories: tuple[str, ...]
    counts: list[list[int]]
    unclassified: list[int]

    @classmethod
    def empty(cls, categories: Sequence[str]) -> "ConfusionMatrix":
        n = len(categories)
        return cls(tuple(categories), [[0] * n for _ in range(n)], [0] * n)

    def record(self, true_category: str, predicted: str | None) -> None:
        t = self.categories.index(true_category)
        if predicted is None:
            self.unclassified[t] += 1
        else:
            self.counts[t][self.categories.index(predicted)] += 1

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts)) + sum(self.unclassified)


@dataclass(frozen=True)
class MetricsReport:
    """Macro-averaged metrics as exact rationals in [0, 1]."""

    precision: Fraction
    recall: Fraction
    accuracy: Fraction
    error: Fraction
    f_measure: Fraction

    def as_floats(self) -> dict[str, float]:
        return {name: float(getattr(self, name))
                for name in ("precision", "recall", "accuracy", "error",
                             "f_measure")}


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Macro precision/recall, accuracy = trace/total, F = 2PR/(P+R)."""
    total = cm.total
    if total == 0:
        raise EmptyInputError("metrics over an empty confusion matrix")
    n = len(cm.categories)
    precisions = []
    recalls = []
    for c in range(n):
        tp = cm.counts[c][c]
        col = sum(cm.counts[r][c] for r in range(n))
        row = sum(cm.counts[c]) + cm.unclassified[c]
        precisions.append(Fraction(tp, col) if col else Fraction(0))
        recalls.append(Fraction(tp, row) if row else Fraction(0))
    precision = sum(precisions) / n
    recall = sum(recalls) / n
    accuracy = Fraction(sum(cm.counts[c][c] for c in range(n)), total)
    f = (2 * precision * recall / (precision + recall)
         if precision + recall else Fraction(0))
    return MetricsReport(precision, recall, accuracy, 1 - accuracy, f)


def _categories_of(train: Sequence[DocumentVector]) -> list[str]:
    seen: list[str] = []
    for v in train:
        if v.category is None:
            raise LabelingError(f"training vector {v.doc_id!r} is unlabeled")
        if v.category not in seen:
            seen.append(v.category)
    return seen


def baseline_naive_bayes(train: Sequence[DocumentVector], doc: DocumentVector,
                         categories: Sequence[str] | None = None) -> str:
    """Bernoulli naive Bayes with add-one smoothing; ties by category order."""
    if not train:
        raise EmptyInputError("naive Bayes needs a nonempty training set")
    cats = list(categories) if categories is not None else _categories_of(train)
    size = train[0].size
    if doc.size != size:
        raise DimensionError("query vector size does not match training vectors")
    best_cat = None
    best_score = -math.inf
    n_total = len(train)
    for cat in cats:
        members = [v for v in train if v.category == cat]
        n_c = len(members)
        if n_c == 0:
            continue
        score = math.log(n_c / n_total)
        for i in range(size):
            df = sum(1 for v in members if (v.bits >> i) & 1)
            p = (df + 1) / (n_c + 2)
            score += math.log(p if (doc.bits >> i) & 1 else 1.0 - p)
        if score > best_score:
            best_score = score
            best_cat = cat
    return best_cat


def baseline_knn(train: Sequence[DocumentVector], doc: DocumentVector,
                 k: int = 3, measure: str = "cosine",
                 categories: Sequence[str] | None = None) -> str:
    """Majority label of the k most similar training vectors.

    Similarity ties keep training order; label ties fall back to category
    order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not train:
        raise EmptyInputError("k-NN needs a nonempty training set")
    cats = list(categories) if categories is not None else _categories_of(train)
    if doc.size != train[0].size:
        raise DimensionError("query vector size does not match training vectors")
    n1 = doc.bits.bit_count()
    ranked = sorted(
        range(len(train)),
        key=lambda i: (-_score_key((doc.bits & train[i].bits).bit_count(),
                                   n1, train[i].bits.bit_count(), measure), i))
    votes: dict[str, int] = {}
    for i in ranked[:k]:
        votes[train[i].category] = votes.get(train[i].category, 0) + 1
    return max(cats, key=lambda c: (votes.get(c, 0), -cats.index(c)))


@dataclass(frozen=True)
class PipelineConfig:
    """Everything an experiment run needs, with the stock defaults."""

    measures: tuple[str, ...] = MEASURES
    activation: str = "max"
    features: int = DEFAULT_FEATURE_COUNT
    stopwords_path: Path | None = None
    split: float = 2 / 3
    seed: int = 0
    baselines: tuple[str, ...] = ()
    knn_k: int = 3
    knn_measure: str = "cosine"
    jobs: int = 1

    def __post_init__(self):
        if self.features < 1:
            raise ValueError("feature count must be >= 1")
        for m in self.measures:
            if m not in MEASURES:
                raise ValueError(f"unknown similarity measure {m!r}")
        for b in self.baselines:
            if b not in BASELINES:
                raise ValueError(f"unknown baseline {b!r}")
        if not 0 < self.split < 1:
            raise ValueError("split ratio must be in (0, 1)")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        parse_activation(self.activation)


@dataclass
class ReportRow:
    name: str
    metrics: MetricsReport
    unclassified: int


@dataclass
class ExperimentReport:
    categories: tuple[str, ...]
    n_train: int
    n_test: int
    config: PipelineConfig
    rows: list[ReportRow] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        """Deterministic report payload; timings are deliberately excluded."""
        return {
            "averaging": "macro",
            "categories": list(self.categories),
            "documents": {"train": self.n_train, "test": self.n_test},
            "config": {
                "measures": list(self.config.measures),
                "activation": self.config.activation,
                "features": self.config.features,
                "split": self.config.split,
                "seed": self.config.seed,
                "baselines": list(self.config.baselines),
                "knn_k": self.config.knn_k,
                "knn_measure": self.config.knn_measure,
            },
            "rows": [
                {
                    "name": row.name,
                    **{k: round(v, 12) for k, v in row.metrics.as_floats().items()},
                    "exact": {
                        name: [getattr(row.metrics, name).numerator,
                               getattr(row.metrics, name).denominator]
                        for name in ("precision", "recall", "accuracy",
                                     "error", "f_measure")
                    },
                    "unclassified": row.unclassified,
                }
                for row in self.rows
            ],
        }

    def to_text(self) -> str:
        """Aligned table: Precision Recall Accuracy Error F-Measure."""
        header = ["Configuration", "Precision", "Recall", "Accuracy", "Error",
                  "F-Measure"]
        body = []
        for row in self.rows:
            vals = row.metrics.as_floats()
            body.append([row.name] + [f"{vals[k]:.4f}" for k in
                                      ("precision", "recall", "accuracy",
                                       "error", "f_measure")])
        width0 = max(len(header[0]), *(len(r[0]) for r in body)) if body else len(header[0])
        widths = [width0] + [max(len(h), 6) for h in header[1:]]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
                 "  ".join("-" * w for w in widths)]
        for r in body:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        lines.append("")
        lines.append("averaging: macro; unclassified documents count as errors")
        return "\n".join(lines) + "\n"

    def timings_dict(self) -> dict:
        return dict(self.timings)


def split_corpus(docs: Sequence[Document], ratio: float,
                 seed: int) -> tuple[list[Document], list[Document]]:
    """Seeded per-category (stratified) shuffle split; train share = ratio."""
    rnd = random.Random(seed)
    by_cat: dict[str, list[Document]] = {}
    for doc in docs:
        by_cat.setdefault(doc.category, []).append(doc)
    train: list[Document] = []
    test: list[Document] = []
    for cat in sorted(by_cat):
        members = list(by_cat[cat])
        rnd.shuffle(members)
        n = len(members)
        n_train = min(max(int(n * ratio + 0.5), 1), n - 1) if n > 1 else 1
        train.extend(members[:n_train])
        test.extend(members[n_train:])
    train.sort(key=lambda d: (d.category, d.id))
    test.sort(key=lambda d: (d.category, d.id))
    return train, test


def _load_split(corpus_root: Path, config: PipelineConfig):
    train_dir = corpus_root / "train"
    test_dir = corpus_root / "test"
    if train_dir.is_dir() and test_dir.is_dir():
        return load_corpus(train_dir), load_corpus(test_dir)
    docs = load_corpus(corpus_root)
    return split_corpus(docs, config.split, config.seed)


def _classify_chunk(payload):
    model, vectors, measure, policy = payload
    return [classify(model, v, measure, policy) for v in vectors]


def _classify_all(model, vectors, measure, policy, jobs) -> list[Prediction]:
    if jobs <= 1 or len(vectors) < 2:
        return [classify(model, v, measure, policy) for v in vectors]
    chunk = (len(vectors) + jobs - 1) // jobs
    payloads = [(model, vectors[i:i + chunk], measure, policy)
                for i in range(0, len(vectors), chunk)]
    out: list[Prediction] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_classify_chunk, payloads):
            out.extend(part)
    return out


def run_experiment(corpus_root: str | Path,
                   config: PipelineConfig = PipelineConfig()) -> ExperimentReport:
    """Train, compile, classify, and score; returns the full report.

    Wall-clock timings for the lattice build, the compilation, and each
    configuration's classification pass land in ``report.timings``.
    """
    corpus_root = Path(corpus_root)
    train_docs, test_docs = _load_split(corpus_root, config)
    if not train_docs:
        raise CorpusError("training split is empty")
    if not test_docs:
        raise CorpusError("test split is empty")
    stopwords = (load_stopwords(config.stopwords_path)
                 if config.stopwords_path else default_stopwords())

    t0 = time.perf_counter()
    vocab = build_vocabulary(train_docs, config.features, stopwords=stopwords)
    vocabulary_s = time.perf_counter() - t0

    train_vectors = [vectorize(d, vocab, stopwords=stopwords) for d in train_docs]
    test_vectors = [vectorize(d, vocab, stopwords=stopwords) for d in test_docs]
    categories = tuple(sorted({d.category for d in train_docs}))
    for d in test_docs:
        if d.category not in categories:
            raise LabelingError(f"test document {d.id!r} has category "
                                f"{d.category!r} absent from training data")

    ctx = build_context(train_vectors, vocab)
    t0 = time.perf_counter()
    lattice = build_lattice(ctx)
    lattice_build_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    model = compile_model(lattice, {d.id: d.category for d in train_docs},
                          categories)
    compile_s = time.perf_counter() - t0

    report = ExperimentReport(categories, len(train_docs), len(test_docs), config)
    report.timings = {
        "vocabulary_s": vocabulary_s,
        "lattice_build_s": lattice_build_s,
        "compile_s": compile_s,
        "rows": {},
    }

    for measure in config.measures:
        cm = ConfusionMatrix.empty(categories)
        t0 = time.perf_counter()
        predictions = _classify_all(model, test_vectors, measure,
                                    config.activation, config.jobs)
        elapsed = time.perf_counter() - t0
        for v, pred in zip(test_vectors, predictions):
            cm.record(v.category, pred.category)
        report.rows.append(ReportRow(measure, metrics(cm),
                                     sum(cm.unclassified)))
        report.timings["rows"][measure] = {
            "classify_total_s": elapsed,
            "per_document_s": elapsed / len(test_vectors),
        }

    for baseline in config.baselines:
        cm = ConfusionMatrix.empty(categories)
        t0 = time.perf_counter()
        for v in test_vectors:
            if baseline == "nb":
                predicted = baseline_naive_bayes(train_vectors, v, categories)
            else:
                predicted = baseline_knn(train_vectors, v, config.knn_k,
                                         config.knn_measure, categories)
            cm.record(v.category, predicted)
        elapsed = time.perf_counter() - t0
        name = "naive-bayes" if baseline == "nb" else "knn"
        report.rows.append(ReportRow(name, metrics(cm), sum(cm.unclassified)))
        report.timings["rows"][name] = {
            "classify_total_s": elapsed,
            "per_document_s": elapsed / len(test_vectors),
        }
    return report
