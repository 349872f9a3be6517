"""Command-line entry points.

Subcommands:
  insights      analyze one CSV and print scored insight candidates
  build-corpus  turn webpage instances into matched pairs, splits, and prompts
  priors        estimate per-segment type priors from a pair corpus
  eval          score predictions against references (BLEU/TER/chrF++/PARENT)
  serve         run the REST service
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import (
    WebpageInstance,
    build_augmentation_prompts,
    build_pairs,
    candidate_triple_sets,
    pair_from_record,
    pair_record,
    render_prompt,
    split_dataset,
    type_distribution,
)
from .errors import InsightError, ValidationError
from .metrics import evaluate, load_records
from .pipeline import generate_candidates
from .realization import RealizerEndpoint
from .rdf import is_title
from .recommend import (
    SegmentKey,
    estimate_priors,
    priors_to_json,
    recommend_naive,
)
from .service import StoreConfig, candidate_to_dict, create_app
from .table import ChartKind, DataTable, TableContext, detect_shape, normalize_subject, parse_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tableinsights")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("insights", help="analyze a CSV file and print insights")
    p.add_argument("csv", type=Path)
    p.add_argument("--context", help="table title (default: file stem)")
    p.add_argument("--subject", default="other")
    p.add_argument("--chart", default="none", choices=[k.value for k in ChartKind])
    p.add_argument("--realizer", help="remote realizer URL (default: templates)")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("build-corpus", help="build matched pairs from instances")
    p.add_argument("instances", type=Path)
    p.add_argument("outdir", type=Path)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("priors", help="estimate segment priors from pairs")
    p.add_argument("pairs", type=Path)
    p.add_argument("--out", type=Path, help="write JSON here instead of stdout")

    p = sub.add_parser("eval", help="score predictions against references")
    p.add_argument("records", type=Path)

    p = sub.add_parser("serve", help="run the REST service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", type=Path)

    return parser


def _cmd_insights(args) -> int:
    table = parse_csv(args.csv.read_text(encoding="utf-8"))
    ctx = TableContext(
        title=args.context or args.csv.stem,
        subject=normalize_subject(args.subject),
        chart_kind=ChartKind(args.chart),
    )
    endpoint = RealizerEndpoint(url=args.realizer) if args.realizer else None
    candidates = recommend_naive(generate_candidates(table, ctx, endpoint))
    if args.as_json:
        print(json.dumps([candidate_to_dict(c) for c in candidates], indent=2))
    else:
        for c in candidates:
            kind = c.insight_type.value if c.insight_type else "-"
            print(f"{kind:<12} faith={c.faithfulness:.2f} score={c.rec_score:.3f}  {c.text}")
    return 0


def _read_instances(path: Path) -> list[WebpageInstance]:
    instances = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        instances.append(WebpageInstance(
            table=DataTable.from_json(json.dumps(raw["table"])),
            ctx=TableContext(
                title=raw["title"],
                subject=normalize_subject(raw.get("subject", "other")),
            ),
            summary=raw["summary"],
        ))
    return instances


def _write_jsonl(path: Path, records) -> None:
    path.write_text(
        "".join(json.dumps(r) + "\n" for r in records), encoding="utf-8"
    )


def _cmd_build_corpus(args) -> int:
    instances = _read_instances(args.instances)
    args.outdir.mkdir(parents=True, exist_ok=True)

    all_pairs = []
    enriched = []
    unlabeled = []
    for instance in instances:
        pairs = build_pairs(instance)
        shape = detect_shape(instance.table)
        for pair in pairs:
            enriched.append(pair_record(
                pair,
                time_series=shape.is_time_series,
                multi_column=shape.is_multi_column,
                subject=instance.ctx.subject,
            ))
        all_pairs.extend(pairs)
        matched = {t for p in pairs for t in p.triples.triples if not is_title(t)}
        unlabeled.extend(
            ts for ts in candidate_triple_sets(instance)
            if not any(t in matched for t in ts.triples if not is_title(t))
        )

    _write_jsonl(args.outdir / "pairs.jsonl", enriched)

    train, test, validation = split_dataset(all_pairs, seed=args.seed)
    for name, chunk in (("train", train), ("test", test), ("validation", validation)):
        _write_jsonl(args.outdir / f"{name}.jsonl", [pair_record(p) for p in chunk])

    distribution = {k.value: v for k, v in type_distribution(all_pairs).items()}
    (args.outdir / "distribution.json").write_text(
        json.dumps(distribution, indent=2), encoding="utf-8"
    )

    prompts = build_augmentation_prompts(all_pairs, unlabeled, seed=args.seed)
    _write_jsonl(args.outdir / "prompts.jsonl", (
        {"prompt": render_prompt(p), "target_linearized": p.target, "type": p.target_type.value}
        for p in prompts
    ))

    print(f"pairs={len(all_pairs)} train={len(train)} test={len(test)} "
          f"validation={len(validation)} prompts={len(prompts)}")
    return 0


def _cmd_priors(args) -> int:
    keyed = []
    for i, line in enumerate(args.pairs.read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        raw = json.loads(line)
        if not {"time_series", "multi_column", "subject"} <= raw.keys():
            raise ValidationError(f"pair record {i} lacks segment fields")
        segment = SegmentKey(
            bool(raw["time_series"]),
            bool(raw["multi_column"]),
            normalize_subject(raw["subject"]),
        )
        keyed.append((pair_from_record(raw), segment))
    payload = json.dumps(priors_to_json(estimate_priors(keyed)), indent=2)
    if args.out:
        args.out.write_text(payload + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(payload)
    return 0


def _cmd_eval(args) -> int:
    report = evaluate(load_records(args.records))
    parent = f"{report.parent:.3f}" if report.parent is not None else "-"
    print(f"{'n':>6} {'BLEU':>8} {'TER':>8} {'chrF++':>8} {'PARENT':>8}")
    print(f"{report.n:>6} {report.bleu:>8.2f} {report.ter:>8.3f} "
          f"{report.chrf_pp:>8.2f} {parent:>8}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    config = StoreConfig.from_env()
    if args.data_dir:
        config.data_dir = args.data_dir
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def cli_main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "insights": _cmd_insights,
        "build-corpus": _cmd_build_corpus,
        "priors": _cmd_priors,
        "eval": _cmd_eval,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except InsightError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
