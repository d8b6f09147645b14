"""Command-line interface.

Subcommands wire the pipeline together: ``build`` turns a context CSV (or
a labeled corpus directory) into a lattice file, ``compile`` turns a
lattice plus labels into a model file, ``classify`` scores documents or
vector rows against a model, ``evaluate`` runs the end-to-end experiment,
and ``inspect`` summarizes any of the produced files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .classify import MEASURES, classify
from .compiler import (compile_model, load_fixture_model, load_model,
                       save_model)
from .errors import LatticeCellError
from .evaluate import BASELINES, PipelineConfig, run_experiment
from .lattice import build_lattice, lattice_to_dot, load_lattice, save_lattice
from .textprep import (DEFAULT_FEATURE_COUNT, DocumentVector, build_context,
                       build_vocabulary, default_stopwords, load_corpus,
                       load_documents, load_stopwords, vectorize)

UNCLASSIFIABLE = "UNCLASSIFIABLE"


def _stopwords(args) -> frozenset[str]:
    if getattr(args, "stopwords", None):
        return load_stopwords(args.stopwords)
    return default_stopwords()


def _labels_from_csv(path: Path) -> dict[str, str]:
    labels: dict[str, str] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) != 2:
                raise LatticeCellError(
                    f"{path}: row {lineno}: expected 'object_id,category'")
            labels[row[0]] = row[1]
    return labels


def cmd_build(args) -> int:
    source = Path(args.input)
    if source.is_dir():
        docs = load_corpus(source)
        stopwords = _stopwords(args)
        vocab = build_vocabulary(docs, args.features, stopwords=stopwords)
        vectors = [vectorize(d, vocab, stopwords=stopwords) for d in docs]
        ctx = build_context(vectors, vocab)
    else:
        from .context import load_context_csv

        ctx = load_context_csv(source)
    lattice = build_lattice(ctx)
    save_lattice(lattice, args.output)
    if args.dot:
        Path(args.dot).write_text(lattice_to_dot(lattice), encoding="utf-8")
    n, e = len(lattice.concepts), len(lattice.covers)
    print(f"{n} concept{'s' * (n != 1)}, {e} edge{'s' * (e != 1)}")
    return 0


def cmd_compile(args) -> int:
    if args.paper_fixture:
        model = load_fixture_model()
    else:
        if not args.lattice or not args.labels:
            raise LatticeCellError("compile needs LATTICE and LABELS "
                                   "(or --paper-fixture)")
        lattice = load_lattice(Path(args.lattice))
        labels = _labels_from_csv(Path(args.labels))
        missing = [o for o in lattice.context.object_ids if o not in labels]
        if missing:
            raise LatticeCellError(f"{missing[0]} unlabeled")
        categories = sorted(set(labels[o] for o in lattice.context.object_ids))
        model = compile_model(lattice, labels, categories)
    save_model(model, args.output)
    print(f"{model.engine_template.n_facts} facts, "
          f"{model.engine_template.n_rules} rules")
    return 0


def _vectors_from_csv(path: Path, vocabulary) -> list[DocumentVector]:
    """Rows of precomputed bits; header must carry the model vocabulary."""
    from .context import load_context_csv

    ctx = load_context_csv(path)
    if ctx.attribute_names != tuple(vocabulary):
        raise LatticeCellError(
            f"{path}: columns do not match the model vocabulary")
    return [DocumentVector(row, ctx.n_attributes, None, oid)
            for oid, row in zip(ctx.object_ids, ctx.rows)]


def _input_vectors(args, model) -> list[DocumentVector]:
    vectors: list[DocumentVector] = []
    stopwords = _stopwords(args)
    for item in args.inputs:
        path = Path(item)
        if path.suffix.lower() == ".csv":
            vectors.extend(_vectors_from_csv(path, model.vocabulary))
        else:
            for doc in load_documents(path):
                vectors.append(vectorize(doc, model.vocabulary,
                                         stopwords=stopwords))
    return vectors


def cmd_classify(args) -> int:
    model = load_fixture_model() if args.paper_fixture else load_model(args.model)
    vectors = _input_vectors(args, model)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for v in vectors:
            trace: list[str] | None = [] if args.trace else None
            pred = classify(model, v, args.similarity, args.activation, trace)
            record = {
                "id": v.doc_id,
                "category": pred.category if pred.category else UNCLASSIFIABLE,
                "distribution": ([round(float(f), 12)
                                  for f in pred.distribution.fractions]
                                 if pred.distribution else None),
                "activated_intents": list(pred.activated_intents),
                "fired_vertices": list(pred.fired_vertices),
            }
            print(json.dumps(record, ensure_ascii=False), file=out)
            if args.trace and trace:
                for cycle, snap in enumerate(trace):
                    head = "initial state" if cycle == 0 else f"after cycle {cycle}"
                    print(f"# --- {v.doc_id or 'document'}: {head} ---",
                          file=sys.stderr)
                    print(snap, file=sys.stderr)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_evaluate(args) -> int:
    measures = tuple(MEASURES) if args.similarity == "all" else tuple(
        m.strip() for m in args.similarity.split(",") if m.strip())
    baselines = tuple(b.strip() for b in (args.baselines or "").split(",")
                      if b.strip())
    config = PipelineConfig(
        measures=measures,
        activation=args.activation,
        features=args.features,
        stopwords_path=Path(args.stopwords) if args.stopwords else None,
        split=args.split,
        seed=args.seed,
        baselines=baselines,
        jobs=args.jobs,
    )
    report = run_experiment(Path(args.corpus), config)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_text(
        json.dumps(report.to_json_dict(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    (outdir / "report.txt").write_text(report.to_text(), encoding="utf-8")
    (outdir / "timings.json").write_text(
        json.dumps(report.timings_dict(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    print(report.to_text())
    t = report.timings
    print(f"lattice build: {t['lattice_build_s']:.6f}s  "
          f"compile: {t['compile_s']:.6f}s")
    for name, row in t["rows"].items():
        print(f"classify[{name}]: total {row['classify_total_s']:.6f}s, "
              f"per document {row['per_document_s']:.6f}s")
    return 0


def cmd_inspect(args) -> int:
    path = Path(args.file)
    if path.suffix.lower() == ".csv":
        from .context import load_context_csv

        ctx = load_context_csv(path)
        print(f"context: {ctx.n_objects} objects x {ctx.n_attributes} attributes")
        density = sum(r.bit_count() for r in ctx.rows)
        print(f"incidence ones: {density}")
        return 0
    data = json.loads(path.read_text(encoding="utf-8"))
    if "concepts" in data:
        print(f"lattice: {len(data['concepts'])} concepts, "
              f"{len(data['covers'])} edges, "
              f"{len(data['objects'])} objects x {len(data['attributes'])} attributes")
    elif "facts" in data:
        print(f"model: {len(data['facts'])} facts, {len(data['rules'])} rules, "
              f"categories: {', '.join(data['categories'])}, "
              f"{len(data['vocabulary'])} vocabulary terms")
    elif "rows" in data:
        print(f"report: {len(data['rows'])} configurations, "
              f"categories: {', '.join(data['categories'])}")
    else:
        print("unrecognized file")
        return 1
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stopwords", metavar="FILE",
                        help="stopword list, one term per line "
                             "(default: bundled French list)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticecell",
        description="Concept-lattice text categorization with a Boolean "
                    "cellular rule engine")
    parser.add_argument("--version", action="version", version="latticecell 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a concept lattice")
    p.add_argument("input", help="context CSV or labeled corpus directory")
    p.add_argument("-o", "--output", required=True, help="lattice JSON path")
    p.add_argument("--dot", metavar="FILE", help="also write a DOT diagram")
    p.add_argument("--features", type=int, default=DEFAULT_FEATURE_COUNT,
                   help="vocabulary size when building from a corpus")
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("compile", help="compile a lattice into a model")
    p.add_argument("lattice", nargs="?", help="lattice JSON path")
    p.add_argument("labels", nargs="?",
                   help="CSV mapping object_id,category")
    p.add_argument("-o", "--output", required=True, help="model JSON path")
    p.add_argument("--paper-fixture", action="store_true",
                   help="emit the bundled reference model instead")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("classify", help="classify documents against a model")
    p.add_argument("model", nargs="?", help="model JSON path")
    p.add_argument("inputs", nargs="+",
                   help="text files, directories, or vector CSVs")
    p.add_argument("--paper-fixture", action="store_true",
                   help="use the bundled reference model")
    p.add_argument("--similarity", choices=MEASURES, default="inner")
    p.add_argument("--activation", default="max",
                   help="max, topk:K, or threshold:T")
    p.add_argument("--trace", action="store_true",
                   help="dump per-cycle engine snapshots to stderr")
    p.add_argument("-o", "--output", help="write JSON lines here instead of stdout")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="run the end-to-end experiment")
    p.add_argument("corpus", help="corpus root (category dirs, or train/ + test/)")
    p.add_argument("-o", "--output", required=True, help="report directory")
    p.add_argument("--similarity", default="all",
                   help="comma list of measures, or 'all'")
    p.add_argument("--activation", default="max")
    p.add_argument("--features", type=int, default=DEFAULT_FEATURE_COUNT)
    p.add_argument("--baselines", default="",
                   help=f"comma list from: {', '.join(BASELINES)}")
    p.add_argument("--split", type=float, default=2 / 3,
                   help="train fraction for the seeded random split")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel classification processes")
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inspect", help="summarize a context/lattice/model file")
    p.add_argument("file")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "classify" and not args.paper_fixture:
        if args.model is None:
            parser.error("classify needs MODEL (or --paper-fixture)")
    elif getattr(args, "command", None) == "classify" and args.paper_fixture:
        # with --paper-fixture the positional MODEL slot is really an input
        if args.model is not None:
            args.inputs = [args.model, *args.inputs]
            args.model = None
    try:
        return args.func(args)
    except LatticeCellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
