"""Command-line surface: build, compile, classify, evaluate, inspect."""

import json
import re

import pytest

from helpers import DATA
from latticecell.cli import main

QUERY_CSV = ("id,Stade,Pays,Personnage,Ministre,Puissance,Visage\n"
             "query,0,0,0,1,1,0\n")


@pytest.fixture()
def query_csv(tmp_path):
    path = tmp_path / "query.csv"
    path.write_text(QUERY_CSV, encoding="utf-8")
    return path


def test_build_from_context_csv(tmp_path, capsys):
    out = tmp_path / "lattice.json"
    rc = main(["build", str(DATA / "context.csv"), "-o", str(out),
               "--dot", str(tmp_path / "hasse.dot")])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "9 concepts, 12 edges"
    data = json.loads(out.read_text(encoding="utf-8"))
    assert len(data["concepts"]) == 9
    assert (tmp_path / "hasse.dot").read_text(encoding="utf-8").startswith("digraph")


def test_build_from_corpus(tmp_path, capsys):
    out = tmp_path / "lattice.json"
    rc = main(["build", str(DATA / "corpus"), "-o", str(out), "--features", "6"])
    assert rc == 0
    assert "concepts" in capsys.readouterr().out


def test_build_empty_incidence(tmp_path, capsys):
    src = tmp_path / "empty.csv"
    src.write_text("id,a,b\nx,0,0\ny,0,0\n", encoding="utf-8")
    rc = main(["build", str(src), "-o", str(tmp_path / "l.json")])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "2 concepts, 1 edge"


def test_build_malformed_cell(tmp_path, capsys):
    src = tmp_path / "bad.csv"
    src.write_text("id,a\nx,2\n", encoding="utf-8")
    rc = main(["build", str(src), "-o", str(tmp_path / "l.json")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "row 2" in err and "column 2" in err


def test_compile_demo(tmp_path, capsys):
    lattice = tmp_path / "lattice.json"
    main(["build", str(DATA / "context.csv"), "-o", str(lattice)])
    capsys.readouterr()
    model = tmp_path / "model.json"
    rc = main(["compile", str(lattice), str(DATA / "labels.csv"),
               "-o", str(model)])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "14 facts, 7 rules"


def test_compile_paper_fixture(tmp_path, capsys):
    model = tmp_path / "model.json"
    rc = main(["compile", "--paper-fixture", "-o", str(model)])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "12 facts, 6 rules"
    data = json.loads(model.read_text(encoding="utf-8"))
    assert len(data["facts"]) == 12 and len(data["rules"]) == 6


def test_compile_missing_label(tmp_path, capsys):
    lattice = tmp_path / "lattice.json"
    main(["build", str(DATA / "context.csv"), "-o", str(lattice)])
    capsys.readouterr()
    labels = tmp_path / "labels.csv"
    rows = (DATA / "labels.csv").read_text(encoding="utf-8").splitlines()
    labels.write_text("\n".join(r for r in rows if not r.startswith("Doc 4")) + "\n",
                      encoding="utf-8")
    rc = main(["compile", str(lattice), str(labels), "-o", str(tmp_path / "m.json")])
    assert rc == 2
    assert "Doc 4 unlabeled" in capsys.readouterr().err


def test_classify_worked_example(query_csv, capsys):
    rc = main(["classify", "--paper-fixture", str(query_csv),
               "--similarity", "inner"])
    assert rc == 0
    line = capsys.readouterr().out.strip()
    record = json.loads(line)
    assert record["id"] == "query"
    assert record["category"] == "Economie"
    assert record["distribution"] == [0, 0.835, 0.165]
    assert record["activated_intents"] == [4, 6]
    assert record["fired_vertices"] == [5, 7]


def test_classify_cosine_single_activation(query_csv, capsys):
    rc = main(["classify", "--paper-fixture", str(query_csv),
               "--similarity", "cosine"])
    assert rc == 0
    record = json.loads(capsys.readouterr().out.strip())
    assert record["activated_intents"] == [4]
    assert record["category"] == "Economie"


def test_classify_text_document(tmp_path, capsys):
    doc = tmp_path / "article.txt"
    doc.write_text("Le ministre de la puissance.", encoding="utf-8")
    rc = main(["classify", "--paper-fixture", str(doc)])
    assert rc == 0
    record = json.loads(capsys.readouterr().out.strip())
    assert record["category"] == "Economie"


def test_classify_empty_document_unclassifiable(tmp_path, capsys):
    doc = tmp_path / "blank.txt"
    doc.write_text("", encoding="utf-8")
    rc = main(["classify", "--paper-fixture", str(doc)])
    assert rc == 0  # unclassifiable documents are flagged, not fatal
    record = json.loads(capsys.readouterr().out.strip())
    assert record["category"] == "UNCLASSIFIABLE"
    assert record["distribution"] is None


def test_classify_model_file_round_trip(tmp_path, query_csv, capsys):
    model = tmp_path / "model.json"
    main(["compile", "--paper-fixture", "-o", str(model)])
    capsys.readouterr()
    rc = main(["classify", str(model), str(query_csv)])
    assert rc == 0
    record = json.loads(capsys.readouterr().out.strip())
    assert record["category"] == "Economie"


def test_classify_vocabulary_mismatch(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,x,y\nq,1,0\n", encoding="utf-8")
    rc = main(["classify", "--paper-fixture", str(bad)])
    assert rc == 2
    assert "vocabulary" in capsys.readouterr().err


REFERENCE_INITIAL_FACTS = [
    ("[Pays, Stade]", 0, 1, 0),
    ("[S0 (100% S), (0% E), (0% T)]", 0, 1, 0),
    ("[Visage]", 0, 1, 0),
    ("[S3 (50% S), (50% E), (0% T)]", 0, 1, 0),
    ("[Puissance, Ministre]", 1, 1, 0),
    ("[S4 (0% S), (67% E), (33% T)]", 0, 1, 0),
    ("[Visage, Puissance, Ministre]", 1, 1, 0),
    ("[S5 (0% S), (100% E), (0% T)]", 0, 1, 0),
    ("[Stade]", 0, 1, 0),
    ("[S6 (67% S), (0% E), (33% T)]", 0, 1, 0),
    ("[Personnage]", 0, 1, 0),
    ("[S7 (0% S), (0% E), (100% T)]", 0, 1, 0),
]


def _parse_fact_rows(snapshot):
    lines = snapshot.splitlines()
    start = next(i for i, line in enumerate(lines) if line.startswith("Facts"))
    rows = []
    for line in lines[start + 1:]:
        if not line.strip():
            break
        label, ef, if_, sf = line.rsplit(None, 3)
        rows.append((label.rstrip(), int(ef), int(if_), int(sf)))
    return rows


def test_classify_trace_snapshots(query_csv, capsys):
    rc = main(["classify", "--paper-fixture", str(query_csv), "--trace"])
    assert rc == 0
    err = capsys.readouterr().err
    blocks = [b for b in err.split("# ---") if "Facts" in b]
    assert len(blocks) >= 2
    first = _parse_fact_rows(blocks[0].split("---", 1)[1])
    assert first == REFERENCE_INITIAL_FACTS
    # final snapshot: established extent facts are exactly S4 and S5;
    # the activated intent cells stay established (EF never shrinks)
    last = _parse_fact_rows(blocks[-1].split("---", 1)[1])
    is_extent = lambda label: re.match(r"\[S\d", label) is not None
    established_extents = [label.split(" ")[0].lstrip("[")
                           for (label, ef, _, _) in last
                           if ef and is_extent(label)]
    assert established_extents == ["S4", "S5"]
    established_intents = [label for (label, ef, _, _) in last
                           if ef and not is_extent(label)]
    assert established_intents == ["[Puissance, Ministre]",
                                   "[Visage, Puissance, Ministre]"]


def test_evaluate_bundled_corpus(tmp_path, capsys):
    out1 = tmp_path / "run1"
    rc = main(["evaluate", str(DATA / "corpus"), "-o", str(out1),
               "--baselines", "nb,knn", "--seed", "7"])
    assert rc == 0
    report = json.loads((out1 / "report.json").read_text(encoding="utf-8"))
    assert [r["name"] for r in report["rows"]] == \
        ["jaccard", "cosine", "dice", "inner", "naive-bayes", "knn"]
    timings = json.loads((out1 / "timings.json").read_text(encoding="utf-8"))
    assert "lattice_build_s" in timings
    out = capsys.readouterr().out
    assert "lattice build" in out and "per document" in out

    # repeated seeded run produces byte-identical reports
    out2 = tmp_path / "run2"
    main(["evaluate", str(DATA / "corpus"), "-o", str(out2),
          "--baselines", "nb,knn", "--seed", "7"])
    capsys.readouterr()
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
    assert (out1 / "report.txt").read_bytes() == (out2 / "report.txt").read_bytes()


def test_evaluate_measure_subset(tmp_path, capsys):
    out = tmp_path / "rep"
    rc = main(["evaluate", str(DATA / "corpus"), "-o", str(out),
               "--similarity", "cosine,inner"])
    assert rc == 0
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert [r["name"] for r in report["rows"]] == ["cosine", "inner"]


def test_evaluate_missing_corpus(tmp_path, capsys):
    rc = main(["evaluate", str(tmp_path / "nowhere"), "-o", str(tmp_path / "r")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_inspect_files(tmp_path, capsys):
    main(["inspect", str(DATA / "context.csv")])
    assert "9 objects x 6 attributes" in capsys.readouterr().out
    lattice = tmp_path / "lattice.json"
    main(["build", str(DATA / "context.csv"), "-o", str(lattice)])
    capsys.readouterr()
    main(["inspect", str(lattice)])
    assert "9 concepts" in capsys.readouterr().out
    model = tmp_path / "model.json"
    main(["compile", "--paper-fixture", "-o", str(model)])
    capsys.readouterr()
    main(["inspect", str(model)])
    out = capsys.readouterr().out
    assert "12 facts" in out and "6 rules" in out
