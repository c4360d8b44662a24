"""Command-line interface.

Subcommands cover the full pipeline: ``stats`` turns story files into the
canonical score matrix, ``ideality`` and ``weighted-ideality`` score models
against the human reference row, ``ranks`` aggregates evaluator ballots and
``report`` renders a styled table from any score matrix.  Outputs are
deterministic: rows are ordered by model name, all randomness flows from an
explicit ``--seed``, and rerunning a command reproduces its output byte for
byte.  Diagnostics go to stderr; exit code 2 means the command was
misconfigured, 1 means the input data was malformed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corpus import (
    ConfigError,
    DataError,
    load_rankings,
    load_score_matrix,
    load_stories,
)
from .ideality import ideality, monte_carlo
from .postag import RuleTagger, load_lexicon, pos_profile
from .ranks import mean_ranks, mean_ranks_by_source
from .report import (
    ReportSpec,
    emit_mc_distribution,
    matrix_from_stats,
    render,
    render_rank_csv,
    render_rank_json,
    render_rank_markdown,
)
from .textstats import corpus_stats

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_CONFIG_ERROR = 2


def _write_output(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _sidecar_path(out: str, suffix: str) -> Path:
    path = Path(out)
    return path.with_name(path.stem + suffix)


def _cmd_stats(args: argparse.Namespace) -> int:
    corpora = sorted(load_stories(args.input), key=lambda c: c.model)
    tagger = None
    if args.tagger_lexicon:
        tagger = RuleTagger(lexicon=load_lexicon(args.tagger_lexicon))
    lex = [corpus_stats(corpus) for corpus in corpora]
    pos = [pos_profile(corpus, tagger) for corpus in corpora]
    matrix = matrix_from_stats(lex, pos, human_row=args.human_row)
    spec = ReportSpec(formats=(args.format,))
    documents = render(matrix, spec)
    _write_output(args.out, documents[args.format])
    return EXIT_OK


def _cmd_ideality(args: argparse.Namespace) -> int:
    matrix = load_score_matrix(
        args.scores, human_row=args.human_row, directions=args.metrics
    )
    scores = [
        ideality(matrix, model, standardize_gaps=args.standardize_gaps)
        for model in matrix.machine_models
    ]
    key = (lambda s: s.normalized) if args.normalize else (lambda s: s.raw)
    scores.sort(key=lambda s: (-key(s), s.model))
    if args.format == "json":
        payload = {
            "sorted_by": "normalized" if args.normalize else "raw",
            "scores": [
                {
                    "model": s.model,
                    "evaluated_metrics": s.evaluated_metrics,
                    "raw": s.raw,
                    "normalized": s.normalized,
                }
                for s in scores
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif args.format == "md":
        lines = [
            "| model | evaluated_metrics | raw | normalized |",
            "| --- | --- | --- | --- |",
        ]
        lines += [
            f"| {s.model} | {s.evaluated_metrics} | {s.raw!r} | {s.normalized!r} |"
            for s in scores
        ]
        text = "\n".join(lines) + "\n"
    else:
        lines = ["model,evaluated_metrics,raw,normalized"]
        lines += [
            f"{s.model},{s.evaluated_metrics},{s.raw!r},{s.normalized!r}"
            for s in scores
        ]
        text = "\n".join(lines) + "\n"
    _write_output(args.out, text)
    return EXIT_OK


def _cmd_weighted_ideality(args: argparse.Namespace) -> int:
    matrix = load_score_matrix(
        args.scores, human_row=args.human_row, directions=args.metrics
    )
    if args.models:
        models = [m.strip() for m in args.models.split(",") if m.strip()]
    else:
        models = sorted(matrix.machine_models)
    runs = monte_carlo(
        matrix,
        runs=args.runs,
        norm_kind=args.norm,
        seed=args.seed,
        models=models,
        standardize_gaps=args.standardize_gaps,
    )
    csv_text, summary = emit_mc_distribution(runs)
    _write_output(args.out, csv_text)
    if args.out is not None:
        summary_path = _sidecar_path(args.out, ".summary.json")
        summary_path.write_text(
            json.dumps(summary, indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK


def _cmd_ranks(args: argparse.Namespace) -> int:
    records = load_rankings(args.input)
    if args.split_by == "evaluator_source":
        tables = mean_ranks_by_source(records)
        if args.format == "md":
            sections = [
                f"## {source}\n\n" + render_rank_markdown(table)
                for source, table in tables.items()
            ]
            text = "\n".join(sections)
        elif args.format == "csv":
            text = render_rank_csv(tables)
        else:
            text = render_rank_json(tables)
    else:
        table = mean_ranks(records)
        if args.format == "md":
            text = render_rank_markdown(table)
        elif args.format == "csv":
            text = render_rank_csv(table)
        else:
            text = render_rank_json(table)
    _write_output(args.out, text)
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    matrix = load_score_matrix(
        args.scores, human_row=args.human_row, directions=args.metrics
    )
    columns = None
    if args.columns:
        columns = tuple(c.strip() for c in args.columns.split(",") if c.strip())
    spec = ReportSpec(
        columns=columns,
        formats=(args.format,),
        mark_closest=matrix.human_row is not None,
    )
    documents = render(matrix, spec)
    _write_output(args.out, documents[args.format])
    if args.format == "csv" and args.out is not None:
        sidecar = _sidecar_path(args.out, ".highlights.json")
        sidecar.write_text(documents["highlights"], encoding="utf-8")
    return EXIT_OK


def _add_scores_flags(sub: argparse.ArgumentParser, human_required: bool) -> None:
    sub.add_argument("--scores", required=True, help="score matrix CSV or JSON")
    sub.add_argument(
        "--human-row",
        required=human_required,
        default=None,
        help="name of the human reference row",
    )
    sub.add_argument(
        "--metrics",
        default=None,
        help="JSON file mapping metric name to direction (higher/lower)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="storyeval",
        description="Corpus-level lexical statistics and human-likeness "
        "scoring for generated stories.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    stats = subparsers.add_parser(
        "stats", help="compute the lexical/POS score matrix from stories"
    )
    stats.add_argument("--input", required=True, help="stories JSONL file")
    stats.add_argument(
        "--human-row", default=None, help="model name holding reference stories"
    )
    stats.add_argument(
        "--tagger-lexicon",
        default=None,
        help="word<TAB>tag file overriding the built-in POS lexicon",
    )
    stats.add_argument("--out", default=None)
    stats.add_argument("--format", choices=["md", "csv", "json"], default="csv")
    stats.set_defaults(handler=_cmd_stats)

    ideality_cmd = subparsers.add_parser(
        "ideality", help="score models by closeness to the human row"
    )
    _add_scores_flags(ideality_cmd, human_required=True)
    ideality_cmd.add_argument(
        "--normalize",
        action="store_true",
        help="sort by the per-metric normalized score",
    )
    ideality_cmd.add_argument(
        "--standardize-gaps",
        action="store_true",
        help="divide gaps by each metric's standard deviation first",
    )
    ideality_cmd.add_argument("--out", default=None)
    ideality_cmd.add_argument(
        "--format", choices=["md", "csv", "json"], default="csv"
    )
    ideality_cmd.set_defaults(handler=_cmd_ideality)

    weighted = subparsers.add_parser(
        "weighted-ideality",
        help="Monte-Carlo weighted scoring under sampled metric weights",
    )
    _add_scores_flags(weighted, human_required=True)
    weighted.add_argument("--runs", type=int, default=1000)
    weighted.add_argument("--norm", choices=["l1", "l2"], default="l1")
    weighted.add_argument(
        "--seed", type=int, required=True, help="base seed for weight sampling"
    )
    weighted.add_argument(
        "--models", default=None, help="comma-separated subset of models"
    )
    weighted.add_argument(
        "--standardize-gaps",
        action="store_true",
        help="divide gaps by each metric's standard deviation first",
    )
    weighted.add_argument(
        "--out",
        default=None,
        help="per-run CSV path; a .summary.json lands next to it",
    )
    weighted.set_defaults(handler=_cmd_weighted_ideality)

    ranks_cmd = subparsers.add_parser(
        "ranks", help="mean ranks per criterion from evaluator ballots"
    )
    ranks_cmd.add_argument("--input", required=True, help="rankings CSV file")
    ranks_cmd.add_argument(
        "--split-by",
        choices=["evaluator_source"],
        default=None,
        help="aggregate separately per evaluator population",
    )
    ranks_cmd.add_argument("--out", default=None)
    ranks_cmd.add_argument(
        "--format", choices=["md", "csv", "json"], default="md"
    )
    ranks_cmd.set_defaults(handler=_cmd_ranks)

    report_cmd = subparsers.add_parser(
        "report", help="render a score matrix with best/second/[ch] marks"
    )
    _add_scores_flags(report_cmd, human_required=False)
    report_cmd.add_argument(
        "--columns", default=None, help="comma-separated column subset/order"
    )
    report_cmd.add_argument("--out", default=None)
    report_cmd.add_argument(
        "--format", choices=["md", "csv", "json"], default="md"
    )
    report_cmd.set_defaults(handler=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (DataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
