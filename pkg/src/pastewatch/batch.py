"""Desk-scale corpus analysis: rank extraction opportunities per file."""

from __future__ import annotations

import os

from .candidates import DEFAULT_WEIGHTS, ScoreWeights, enumerate_candidates
from .learning import Model, predict_proba
from .metrics import extract_features
from .syntax import methods_of, parse_compilation_unit


def java_files(root: str) -> list[str]:
    out = []
    for dirpath, _, names in os.walk(root):
        for name in sorted(names):
            if name.endswith(".java"):
                out.append(os.path.join(dirpath, name))
    return sorted(out)


def run_batch(root: str, model: Model, weights: ScoreWeights = DEFAULT_WEIGHTS) -> dict:
    """Classify every eligible candidate of every method under *root*.

    Unparseable files are listed, not fatal. The report is deterministic
    for a fixed tree and model.
    """
    files = []
    errors = []
    for path in java_files(root):
        try:
            with open(path, encoding="utf-8") as fh:
                source = fh.read()
            tree = parse_compilation_unit(source, path=path)
        except (OSError, ValueError) as e:
            errors.append({"path": path, "error": str(e)})
            continue
        opportunities = []
        for method in methods_of(tree):
            for cand in enumerate_candidates(method, weights):
                features = extract_features(cand.fragment, method)
                probability = predict_proba(model, features)
                opportunities.append(
                    {
                        "method": method.name,
                        "span": {"start": cand.fragment.start, "end": cand.fragment.end},
                        "statements": cand.s_f,
                        "score": cand.score,
                        "probability": probability,
                    }
                )
        opportunities.sort(key=lambda o: (-o["probability"], -o["score"],
                                          o["span"]["start"], o["span"]["end"]))
        files.append({"path": path, "opportunities": opportunities})
    return {"files": files, "errors": errors}


def summarize(report: dict) -> list[str]:
    lines = []
    for entry in report["files"]:
        ops = entry["opportunities"]
        lines.append(f"{entry['path']}: {len(ops)} candidate(s)")
        for op in ops[:5]:
            lines.append(
                f"  {op['method']} [{op['span']['start']}..{op['span']['end']})"
                f" p={op['probability']:.3f} score={op['score']:.3f}"
            )
    for err in report["errors"]:
        lines.append(f"{err['path']}: PARSE ERROR {err['error']}")
    if not report["files"] and not report["errors"]:
        lines.append("no .java files found")
    return lines
