"""Training-data plumbing: negative mining, positive ingestion, file IO.

Positives file: one JSON header line, then one JSON object per line with
"fragment", "method", and "path" source-text fields. Dataset file: one
header line naming the feature-catalog version and scoring weights, then
one record per line as 78 comma-separated numbers, the label, and the
record origin.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .candidates import DEFAULT_WEIGHTS, Candidate, ScoreWeights, enumerate_candidates
from .metrics import CATALOG_VERSION, N_FEATURES, extract_features
from .syntax import SyntaxTree, fragment_at, methods_of, parse_compilation_unit, parse_fragment

ORIGIN_POSITIVE = "mined-positive"
ORIGIN_NEGATIVE = "sampled-negative"

POSITIVES_FORMAT = "pastewatch-positives"
DATASET_MAGIC = "# pastewatch-dataset v1"

PER_METHOD_CAP = 3


@dataclass
class DatasetRecord:
    features: list[float]
    label: int
    path: str = ""
    method: str = ""
    span: tuple[int, int] = (0, 0)
    origin: str = ""


@dataclass
class IngestReport:
    total_rows: int = 0
    ingested: int = 0
    skipped: list[tuple[int, str]] = field(default_factory=list)  # (line number, reason)


class DatasetError(ValueError):
    pass


def excluded_count(n_candidates: int, top_fraction: float = 0.05) -> int:
    """How many top-ranked candidates negative mining sets aside."""
    return math.ceil(top_fraction * n_candidates)


def rank_candidates(corpus: list[SyntaxTree],
                    weights: ScoreWeights = DEFAULT_WEIGHTS) -> list[Candidate]:
    """All eligible candidates corpus-wide, best score first (stable ties)."""
    ranked: list[Candidate] = []
    for tree in corpus:
        for method in methods_of(tree):
            ranked.extend(enumerate_candidates(method, weights))
    ranked.sort(key=lambda c: (-c.score, c.fragment.path, c.fragment.method.start,
                               c.fragment.start, c.fragment.end))
    return ranked


def mine_negatives(corpus: list[SyntaxTree], n: int, seed: int,
                   weights: ScoreWeights = DEFAULT_WEIGHTS) -> list[DatasetRecord]:
    """Sample *n* low-ranked candidates as negatives: rank corpus-wide by
    score, drop the top 5%, then draw uniformly without replacement with
    at most three picks per method."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ranked = rank_candidates(corpus, weights)
    pool = ranked[excluded_count(len(ranked)):]
    order = list(range(len(pool)))
    random.Random(seed).shuffle(order)
    picked: list[Candidate] = []
    per_method: dict[tuple[str, int], int] = {}
    for idx in order:
        cand = pool[idx]
        key = (cand.fragment.path, cand.fragment.method.start)
        if per_method.get(key, 0) >= PER_METHOD_CAP:
            continue
        per_method[key] = per_method.get(key, 0) + 1
        picked.append(cand)
        if len(picked) == n:
            break
    if len(picked) < n:
        raise DatasetError(
            f"insufficient candidates: needed {n}, only {len(picked)} available "
            f"after excluding the top {excluded_count(len(ranked))} of {len(ranked)} "
            f"and capping {PER_METHOD_CAP} per method"
        )
    return [
        DatasetRecord(
            features=extract_features(c.fragment, c.fragment.method),
            label=0,
            path=c.fragment.path,
            method=c.fragment.method.name,
            span=(c.fragment.start, c.fragment.end),
            origin=ORIGIN_NEGATIVE,
        )
        for c in picked
    ]


def ingest_positives(path: str) -> tuple[list[DatasetRecord], IngestReport]:
    """Read a positives file; unparseable rows are skipped and reported."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise DatasetError(f"cannot read positives file: {e}") from e
    if not lines:
        raise DatasetError("malformed positives header: empty file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise DatasetError(f"malformed positives header: {e}") from e
    if not isinstance(header, dict) or header.get("format") != POSITIVES_FORMAT:
        raise DatasetError("malformed positives header: wrong or missing format field")

    report = IngestReport()
    records: list[DatasetRecord] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        report.total_rows += 1
        try:
            row = json.loads(line)
            frag_text = row["fragment"]
            method_text = row["method"]
            row_path = row.get("path", "")
        except (json.JSONDecodeError, KeyError, TypeError):
            report.skipped.append((lineno, "malformed-row"))
            continue
        if not parse_fragment(frag_text).ok:
            report.skipped.append((lineno, "fragment-not-parseable"))
            continue
        record = _positive_record(frag_text, method_text, row_path)
        if record is None:
            report.skipped.append((lineno, "fragment-not-in-method"))
            continue
        records.append(record)
        report.ingested += 1
    return records, report


def _positive_record(frag_text: str, method_text: str, row_path: str) -> DatasetRecord | None:
    wrapped = "class __P {\n" + method_text + "\n}\n"
    try:
        tree = parse_compilation_unit(wrapped, path=row_path or "<positive>")
    except ValueError:
        return None
    methods = methods_of(tree)
    if not methods:
        return None
    span = _locate(wrapped, tree, frag_text)
    if span is None:
        return None
    fragment = fragment_at(tree, span[0], span[1])
    if fragment is None or fragment.method is None:
        return None
    return DatasetRecord(
        features=extract_features(fragment, fragment.method),
        label=1,
        path=row_path,
        method=fragment.method.name,
        span=(fragment.start, fragment.end),
        origin=ORIGIN_POSITIVE,
    )


def _locate(wrapped: str, tree, frag_text: str) -> tuple[int, int] | None:
    """Find the fragment inside the wrapped method source: exact text first,
    then a whitespace-insensitive concrete token-sequence match."""
    from .tokens import non_comment, tokenize

    stripped = frag_text.strip()
    at = wrapped.find(stripped)
    if at != -1:
        return at, at + len(stripped)
    try:
        frag_texts = [t.text for t in non_comment(tokenize(frag_text))]
    except ValueError:
        return None
    if not frag_texts:
        return None
    toks = tree.tokens
    texts = [t.text for t in toks]
    k = len(frag_texts)
    for i in range(len(texts) - k + 1):
        if texts[i : i + k] == frag_texts:
            return toks[i].start, toks[i + k - 1].end
    return None


def balance(positives: list[DatasetRecord], negatives: list[DatasetRecord]) -> list[DatasetRecord]:
    """Truncate the larger class to the smaller; positives come first."""
    k = min(len(positives), len(negatives))
    return positives[:k] + negatives[:k]


def _weights_text(weights: ScoreWeights) -> str:
    return (
        f"w_length={weights.w_length!r},w_depth={weights.w_depth!r},"
        f"w_live_in={weights.w_live_in!r},w_live_out={weights.w_live_out!r}"
    )


def write_dataset(path: str, records: list[DatasetRecord],
                  weights: ScoreWeights = DEFAULT_WEIGHTS) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{DATASET_MAGIC} catalog={CATALOG_VERSION} weights={_weights_text(weights)}\n")
        for r in records:
            nums = ",".join(repr(float(v)) for v in r.features)
            fh.write(f"{nums},{r.label},{r.origin}\n")


def read_dataset(path: str) -> list[DatasetRecord]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise DatasetError(f"cannot read dataset: {e}") from e
    if not lines or not lines[0].startswith(DATASET_MAGIC):
        raise DatasetError("not a pastewatch dataset file")
    header = lines[0]
    if f"catalog={CATALOG_VERSION}" not in header:
        raise DatasetError(
            f"dataset catalog does not match this build ({CATALOG_VERSION}); header: {header}"
        )
    records: list[DatasetRecord] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != N_FEATURES + 2:
            raise DatasetError(f"line {lineno}: expected {N_FEATURES + 2} fields, got {len(parts)}")
        features = [float(v) for v in parts[:N_FEATURES]]
        label = int(parts[N_FEATURES])
        origin = parts[N_FEATURES + 1]
        records.append(DatasetRecord(features=features, label=label, origin=origin))
    return records
