import json

import pytest

from pastewatch.candidates import is_extractable
from pastewatch.dataset import (
    DatasetError,
    DatasetRecord,
    ORIGIN_NEGATIVE,
    ORIGIN_POSITIVE,
    POSITIVES_FORMAT,
    balance,
    excluded_count,
    ingest_positives,
    mine_negatives,
    rank_candidates,
    read_dataset,
    write_dataset,
)
from pastewatch.syntax import fragment_at

from conftest import load_corpus

CORPUS = load_corpus()

HEADER = json.dumps({"format": POSITIVES_FORMAT, "version": 1})

GOOD_ROW = json.dumps(
    {
        "fragment": "int s = 0;\ns += x;",
        "method": "void m(int x) {\n    int s = 0;\n    s += x;\n    use(s);\n}",
        "path": "Sample.java",
    }
)
BAD_FRAGMENT_ROW = json.dumps(
    {"fragment": "this is not java", "method": "void m() { a(); }", "path": "Bad.java"}
)


def test_excluded_count_rules():
    assert excluded_count(100) == 5
    assert excluded_count(3) == 1
    assert excluded_count(0) == 0
    assert excluded_count(20) == 1


def test_mine_negatives_deterministic_and_labeled():
    a = mine_negatives(CORPUS, 12, seed=9)
    b = mine_negatives(CORPUS, 12, seed=9)
    assert len(a) == 12
    assert [r.span for r in a] == [r.span for r in b]
    assert [r.features for r in a] == [r.features for r in b]
    assert all(r.label == 0 and r.origin == ORIGIN_NEGATIVE for r in a)
    c = mine_negatives(CORPUS, 12, seed=10)
    assert [r.span for r in c] != [r.span for r in a]


def test_mined_negatives_avoid_top_ranked_candidates():
    ranked = rank_candidates(CORPUS)
    excluded = {(c.fragment.path, c.fragment.start, c.fragment.end)
                for c in ranked[: excluded_count(len(ranked))]}
    mined = mine_negatives(CORPUS, 25, seed=3)
    for r in mined:
        assert (r.path, r.span[0], r.span[1]) not in excluded


def test_mined_negative_fragments_are_extractable():
    by_path = {t.path: t for t in CORPUS}
    for r in mine_negatives(CORPUS, 20, seed=1):
        tree = by_path[r.path]
        frag = fragment_at(tree, r.span[0], r.span[1])
        assert frag is not None and frag.method is not None
        assert is_extractable(frag, frag.method)


def test_per_method_cap():
    from collections import Counter

    mined = mine_negatives(CORPUS, 40, seed=2)
    per_method = Counter((r.path, r.method) for r in mined)
    assert max(per_method.values()) <= 3


def test_mine_shortfall_is_an_explicit_error():
    with pytest.raises(DatasetError) as err:
        mine_negatives(CORPUS, 100000, seed=0)
    assert "needed 100000" in str(err.value)


def test_ingest_two_valid_rows(tmp_path):
    p = tmp_path / "pos.ndjson"
    p.write_text(HEADER + "\n" + GOOD_ROW + "\n" + GOOD_ROW + "\n")
    records, report = ingest_positives(str(p))
    assert len(records) == 2
    assert all(r.label == 1 and r.origin == ORIGIN_POSITIVE for r in records)
    assert report.ingested == 2 and report.skipped == []
    assert all(len(r.features) == 78 for r in records)


def test_ingest_skips_bad_fragment_rows(tmp_path):
    p = tmp_path / "pos.ndjson"
    p.write_text(HEADER + "\n" + BAD_FRAGMENT_ROW + "\n" + GOOD_ROW + "\n")
    records, report = ingest_positives(str(p))
    assert len(records) == 1
    assert report.skipped == [(2, "fragment-not-parseable")]


def test_ingest_empty_file_with_header(tmp_path):
    p = tmp_path / "pos.ndjson"
    p.write_text(HEADER + "\n")
    records, report = ingest_positives(str(p))
    assert records == [] and report.total_rows == 0


def test_ingest_malformed_header(tmp_path):
    p = tmp_path / "pos.ndjson"
    p.write_text('{"format": "something-else"}\n' + GOOD_ROW + "\n")
    with pytest.raises(DatasetError, match="header"):
        ingest_positives(str(p))
    p2 = tmp_path / "empty.ndjson"
    p2.write_text("")
    with pytest.raises(DatasetError, match="header"):
        ingest_positives(str(p2))


def test_ingest_unreadable_file(tmp_path):
    with pytest.raises(DatasetError, match="cannot read"):
        ingest_positives(str(tmp_path / "missing.ndjson"))


def test_balance_truncates_larger_class():
    pos = [DatasetRecord(features=[float(i)] * 78, label=1) for i in range(3)]
    neg = [DatasetRecord(features=[float(i)] * 78, label=0) for i in range(7)]
    merged = balance(pos, neg)
    assert len(merged) == 6
    assert [r.label for r in merged] == [1, 1, 1, 0, 0, 0]


def test_dataset_round_trip(tmp_path):
    mined = mine_negatives(CORPUS, 8, seed=4)
    path = tmp_path / "data.csv"
    write_dataset(str(path), mined)
    back = read_dataset(str(path))
    assert [r.features for r in back] == [r.features for r in mined]
    assert [r.label for r in back] == [r.label for r in mined]
    assert [r.origin for r in back] == [r.origin for r in mined]


def test_dataset_header_is_validated(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("# not a dataset\n")
    with pytest.raises(DatasetError):
        read_dataset(str(path))
    path.write_text("# pastewatch-dataset v1 catalog=other/v9 weights=w\n")
    with pytest.raises(DatasetError, match="catalog"):
        read_dataset(str(path))
