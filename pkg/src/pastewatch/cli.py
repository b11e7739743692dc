"""Command-line entry points: serve, analyze, train, eval, mine, catalog."""

from __future__ import annotations

import argparse
import json
import sys

from . import batch, dataset, engine, learning, metrics
from .syntax import parse_compilation_unit


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="pastewatch")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the stdio engine")
    p.add_argument("--config", default=None)
    p.add_argument("--virtual-time", action="store_true")

    p = sub.add_parser("analyze", help="rank extraction opportunities under a directory")
    p.add_argument("root")
    p.add_argument("--model", required=True)
    p.add_argument("--json", dest="json_out", default=None)

    p = sub.add_parser("train", help="train a classifier on a dataset file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--kind", required=True, choices=sorted(learning.TRAINERS))
    p.add_argument("--model-out", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("eval", help="evaluate a model on a dataset file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--bootstrap", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("mine", help="build a balanced dataset from positives and a corpus")
    p.add_argument("--root", required=True)
    p.add_argument("--positives", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    sub.add_parser("catalog", help="print the 78-slot feature catalog")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "serve":
        config = engine.load_config(args.config)
        if args.virtual_time:
            from dataclasses import replace

            config = replace(config, virtual_time=True)
        return engine.serve(config)

    if args.command == "analyze":
        model = learning.load_model(args.model)
        report = batch.run_batch(args.root, model)
        if args.json_out:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                json.dump(report, fh, sort_keys=True, indent=2)
                fh.write("\n")
        for line in batch.summarize(report):
            print(line)
        return 0

    if args.command == "train":
        records = dataset.read_dataset(args.dataset)
        trainer = learning.trainer_for(args.kind, seed=args.seed)
        model = trainer(records)
        learning.save_model(model, args.model_out)
        report = learning.evaluate(model, records)
        print(json.dumps(_report_dict(report, extra={"kind": args.kind, "seed": args.seed}),
                         sort_keys=True))
        return 0

    if args.command == "eval":
        records = dataset.read_dataset(args.dataset)
        model = learning.load_model(args.model)
        if args.bootstrap > 0:
            trainer = learning.trainer_for(model.kind, seed=int(model.hyper.get("seed", args.seed)))
            boot = learning.bootstrap_eval(trainer, records, iterations=args.bootstrap,
                                           seed=args.seed)
            doc = boot.as_dict()
            doc["kind"] = model.kind
            doc["bootstrap"] = args.bootstrap
            print(json.dumps(doc, sort_keys=True))
        else:
            report = learning.evaluate(model, records)
            print(json.dumps(_report_dict(report, extra={"kind": model.kind}), sort_keys=True))
        return 0

    if args.command == "mine":
        positives, ingest_report = dataset.ingest_positives(args.positives)
        for lineno, reason in ingest_report.skipped:
            print(f"skipped row at line {lineno}: {reason}", file=sys.stderr)
        corpus = []
        for path in batch.java_files(args.root):
            with open(path, encoding="utf-8") as fh:
                source = fh.read()
            try:
                corpus.append(parse_compilation_unit(source, path=path))
            except ValueError as e:
                print(f"skipping unparseable {path}: {e}", file=sys.stderr)
        n = args.n if args.n is not None else len(positives)
        negatives = dataset.mine_negatives(corpus, n, args.seed)
        records = dataset.balance(positives, negatives)
        dataset.write_dataset(args.out, records)
        print(json.dumps(
            {
                "positives": len(positives),
                "negatives": len(negatives),
                "written": len(records),
                "skipped_rows": len(ingest_report.skipped),
                "seed": args.seed,
            },
            sort_keys=True,
        ))
        return 0

    if args.command == "catalog":
        for line in metrics.catalog_lines():
            print(line)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def _report_dict(report: learning.EvalReport, extra: dict | None = None) -> dict:
    doc = {
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "pr_auc": report.pr_auc,
        "tp": report.tp,
        "fp": report.fp,
        "tn": report.tn,
        "fn": report.fn,
        "undefined": list(report.undefined),
    }
    doc.update(extra or {})
    return doc


if __name__ == "__main__":
    raise SystemExit(main())
