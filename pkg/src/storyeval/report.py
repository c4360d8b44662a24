"""Rendering of score matrices and rank tables with deterministic styling.

Markdown output marks the best value per metric in bold, the second best
with underscores, and suffixes the machine value closest to the human row
with ``[ch]``.  CSV output stays machine-readable: no styling, blank cells
for missing values, and a parallel JSON highlights document.  JSON output
carries the full numeric table; re-parsing it reproduces every float bit
for bit.  All orderings are fixed (row order of the matrix, column order of
the report), so equal inputs render byte-identical documents.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import ConfigError, MetricSpec, ScoreMatrix, TABLE_COLUMNS
from .ideality import McRun, MetricExcludedError, UndefinedScoreError, ch_score
from .postag import PosProfile
from .ranks import RankTable
from .textstats import CorpusLexStats

logger = logging.getLogger(__name__)

FORMATS = ("md", "csv", "json")


@dataclass(frozen=True)
class Highlight:
    """Winners for one metric column: best, runner-up, closest to human."""

    best: str | None
    second: str | None
    closest: str | None


@dataclass(frozen=True)
class ReportSpec:
    """What to render: column subset/order, styling toggles and formats."""

    columns: tuple[str, ...] | None = None
    formats: tuple[str, ...] = ("md",)
    mark_best: bool = True
    mark_closest: bool = True

    def __post_init__(self) -> None:
        for fmt in self.formats:
            if fmt not in FORMATS:
                raise ConfigError(
                    f"unknown format {fmt!r}; expected one of {FORMATS}"
                )


def _fmt(value: float) -> str:
    """Shortest round-trip representation; integers stay integral-looking."""
    return repr(value)


def compute_highlights(
    matrix: ScoreMatrix,
    columns: Sequence[str] | None = None,
    mark_closest: bool = True,
) -> dict[str, Highlight]:
    """Per-metric winners over the full matrix, human row included.

    Best and second-best respect the metric's direction and are ordered by
    (value, model name) so exact ties resolve deterministically.  The
    closest-to-human marker never goes to the human row itself and is absent
    when the matrix has no human row or the human cell is missing.
    """
    chosen = columns if columns is not None else matrix.metric_names
    out: dict[str, Highlight] = {}
    for name in chosen:
        direction = matrix.direction(name)
        present = [
            (cells[name], model)
            for model, cells in matrix.rows.items()
            if name in cells
        ]
        if not present:
            continue
        present.sort(key=lambda pair: (pair[0], pair[1]))
        if direction == "higher":
            ordered = sorted(present, key=lambda pair: (-pair[0], pair[1]))
        else:
            ordered = present
        best = ordered[0][1]
        second = ordered[1][1] if len(ordered) > 1 else None
        closest = None
        if mark_closest and matrix.human_row is not None:
            try:
                closest = ch_score(matrix, name).model
            except (MetricExcludedError, UndefinedScoreError):
                closest = None
        out[name] = Highlight(best=best, second=second, closest=closest)
    return out


def _usable_columns(
    matrix: ScoreMatrix, requested: Sequence[str] | None
) -> list[str]:
    names = list(requested) if requested is not None else list(matrix.metric_names)
    known = set(matrix.metric_names)
    for name in names:
        if name not in known:
            raise ConfigError(f"unknown report column {name!r}")
    usable = []
    for name in names:
        if any(name in cells for cells in matrix.rows.values()):
            usable.append(name)
        else:
            logger.warning("column %r has no values; omitted from report", name)
    if not usable:
        raise ConfigError("no report columns left after dropping empty ones")
    return usable


def render_markdown(
    matrix: ScoreMatrix,
    columns: Sequence[str] | None = None,
    highlights: Mapping[str, Highlight] | None = None,
) -> str:
    """Render a pipe table; missing cells show as '-'."""
    cols = _usable_columns(matrix, columns)
    if highlights is None:
        highlights = {}
    lines = ["| model | " + " | ".join(cols) + " |"]
    lines.append("| --- |" + " --- |" * len(cols))
    for model, cells in matrix.rows.items():
        rendered = [model]
        for name in cols:
            if name not in cells:
                rendered.append("-")
                continue
            text = _fmt(cells[name])
            mark = highlights.get(name)
            if mark is not None:
                if mark.best == model:
                    text = f"**{text}**"
                elif mark.second == model:
                    text = f"_{text}_"
                if mark.closest == model:
                    text = f"{text} [ch]"
            rendered.append(text)
        lines.append("| " + " | ".join(rendered) + " |")
    return "\n".join(lines) + "\n"


def render_csv(matrix: ScoreMatrix, columns: Sequence[str] | None = None) -> str:
    """Unstyled CSV, loadable back through load_score_matrix()."""
    cols = _usable_columns(matrix, columns)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["model"] + cols)
    for model, cells in matrix.rows.items():
        writer.writerow(
            [model] + [_fmt(cells[name]) if name in cells else "" for name in cols]
        )
    return out.getvalue()


def highlights_document(highlights: Mapping[str, Highlight]) -> str:
    """JSON sidecar naming each column's winners."""
    payload = {
        name: {
            "best": mark.best,
            "second": mark.second,
            "closest_to_human": mark.closest,
        }
        for name, mark in highlights.items()
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_json(
    matrix: ScoreMatrix,
    columns: Sequence[str] | None = None,
    highlights: Mapping[str, Highlight] | None = None,
) -> str:
    """Full numeric document; floats survive a JSON round trip bit-exactly."""
    cols = _usable_columns(matrix, columns)
    document = {
        "metrics": [
            {"name": name, "direction": matrix.direction(name)}
            for name in cols
        ],
        "human_row": matrix.human_row,
        "rows": {
            model: {name: cells[name] for name in cols if name in cells}
            for model, cells in matrix.rows.items()
        },
    }
    if highlights is not None:
        document["highlights"] = {
            name: {
                "best": mark.best,
                "second": mark.second,
                "closest_to_human": mark.closest,
            }
            for name, mark in highlights.items()
        }
    return json.dumps(document, indent=2) + "\n"


def render(matrix: ScoreMatrix, spec: ReportSpec) -> dict[str, str]:
    """Render every requested format; CSV brings a 'highlights' sidecar."""
    cols = _usable_columns(matrix, spec.columns)
    highlights = (
        compute_highlights(matrix, cols, mark_closest=spec.mark_closest)
        if spec.mark_best or spec.mark_closest
        else {}
    )
    if not spec.mark_best:
        highlights = {
            name: Highlight(best=None, second=None, closest=mark.closest)
            for name, mark in highlights.items()
        }
    documents: dict[str, str] = {}
    for fmt in spec.formats:
        if fmt == "md":
            documents["md"] = render_markdown(matrix, cols, highlights)
        elif fmt == "csv":
            documents["csv"] = render_csv(matrix, cols)
            documents["highlights"] = highlights_document(highlights)
        else:
            documents["json"] = render_json(matrix, cols, highlights)
    return documents


def matrix_from_stats(
    lex_stats: Iterable[CorpusLexStats],
    pos_profiles: Iterable[PosProfile],
    human_row: str | None = None,
    directions: Mapping[str, str] | None = None,
) -> ScoreMatrix:
    """Join lexical and POS statistics into the canonical 16-column matrix.

    Both inputs must cover the same models.  Metrics a corpus could not
    define stay missing rather than zero.
    """
    pos_by_model = {profile.model: profile for profile in pos_profiles}
    rows: dict[str, dict[str, float]] = {}
    for stats in lex_stats:
        if stats.model not in pos_by_model:
            raise ConfigError(f"no POS profile for model {stats.model!r}")
        row: dict[str, float] = {}
        row.update(
            {k: v for k, v in stats.as_row().items() if v is not None}
        )
        row.update(pos_by_model[stats.model].as_row())
        rows[stats.model] = row
    missing = set(pos_by_model) - set(rows)
    if missing:
        raise ConfigError(f"POS profiles without statistics: {sorted(missing)}")
    from .corpus import LOWER_BETTER_DEFAULT

    overrides = dict(directions or {})
    metrics = tuple(
        MetricSpec(
            name,
            overrides.get(
                name, "lower" if name in LOWER_BETTER_DEFAULT else "higher"
            ),
        )
        for name in TABLE_COLUMNS
    )
    return ScoreMatrix(metrics=metrics, rows=rows, human_row=human_row)


def emit_mc_distribution(
    runs: Sequence[McRun],
) -> tuple[str, dict[str, dict[str, float]]]:
    """Long-form CSV of Monte-Carlo scores plus a five-number summary.

    CSV rows are (run, model, score) ordered by run index then model name.
    The summary reports count, mean, min, quartiles (linear interpolation)
    and max per model; recomputing it from the CSV gives identical floats.
    """
    if not runs:
        raise ValueError("no Monte-Carlo runs to emit")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["run", "model", "score"])
    per_model: dict[str, list[float]] = {}
    for run in sorted(runs, key=lambda r: r.run_index):
        for model in sorted(run.scores):
            score = run.scores[model]
            writer.writerow([run.run_index, model, _fmt(score)])
            per_model.setdefault(model, []).append(score)
    summary: dict[str, dict[str, float]] = {}
    for model in sorted(per_model):
        scores = per_model[model]
        q1, median, q3 = (
            float(q) for q in np.percentile(scores, [25.0, 50.0, 75.0])
        )
        summary[model] = {
            "count": len(scores),
            "mean": math.fsum(scores) / len(scores),
            "min": min(scores),
            "q1": q1,
            "median": median,
            "q3": q3,
            "max": max(scores),
        }
    return out.getvalue(), summary


def render_rank_markdown(table: RankTable) -> str:
    """Models x criteria table of mean ranks; lower is better.

    The best mean per criterion is bold, the second best underlined.
    """
    criteria = table.criteria
    models = table.models
    winners: dict[str, tuple[str | None, str | None]] = {}
    for criterion in criteria:
        cells = table.cells[criterion]
        ordered = sorted(cells, key=lambda m: (cells[m].mean, m))
        best = ordered[0] if ordered else None
        second = ordered[1] if len(ordered) > 1 else None
        winners[criterion] = (best, second)
    lines = ["| model | " + " | ".join(criteria) + " |"]
    lines.append("| --- |" + " --- |" * len(criteria))
    for model in models:
        rendered = [model]
        for criterion in criteria:
            cell = table.cells[criterion].get(model)
            if cell is None:
                rendered.append("-")
                continue
            text = _fmt(cell.mean)
            best, second = winners[criterion]
            if model == best:
                text = f"**{text}**"
            elif model == second:
                text = f"_{text}_"
            rendered.append(text)
        lines.append("| " + " | ".join(rendered) + " |")
    return "\n".join(lines) + "\n"


def render_rank_csv(
    tables: Mapping[str, RankTable] | RankTable,
) -> str:
    """Long-form CSV; grouped tables get a leading 'source' column."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if isinstance(tables, RankTable):
        writer.writerow(["criterion", "model", "mean_rank", "count"])
        for criterion in tables.criteria:
            for model, cell in tables.cells[criterion].items():
                writer.writerow([criterion, model, _fmt(cell.mean), cell.count])
        return out.getvalue()
    writer.writerow(["source", "criterion", "model", "mean_rank", "count"])
    for source in tables:
        table = tables[source]
        for criterion in table.criteria:
            for model, cell in table.cells[criterion].items():
                writer.writerow(
                    [source, criterion, model, _fmt(cell.mean), cell.count]
                )
    return out.getvalue()


def render_rank_json(
    tables: Mapping[str, RankTable] | RankTable,
) -> str:
    def table_payload(table: RankTable) -> dict:
        return {
            criterion: {
                model: {"mean": cell.mean, "count": cell.count}
                for model, cell in table.cells[criterion].items()
            }
            for criterion in table.criteria
        }

    if isinstance(tables, RankTable):
        payload: dict = table_payload(tables)
    else:
        payload = {source: table_payload(t) for source, t in tables.items()}
    return json.dumps(payload, indent=2) + "\n"
