"""Data model and loaders for story files, score matrices and ranking sheets.

Three on-disk formats are understood:

* stories: JSON Lines, one story per line with ``story_id``, ``model`` and
  either ``sentences`` (list of strings) or ``raw_text``.
* scores: CSV whose first column is ``model`` and whose remaining columns
  are metric values (blank cell = missing), or the JSON document written by
  :mod:`storyeval.report`.  Metric direction comes from an optional
  ``metrics.json`` sidecar mapping metric name to ``"higher"``/``"lower"``;
  unlisted metrics fall back to the built-in defaults.
* rankings: CSV with columns ``evaluator_id,item_id,criterion,model,rank``
  where every (evaluator, item, criterion) group must rank its models with
  a permutation of 1..k.

Loaded objects are plain frozen dataclasses, safe to share between
computations; loaders never mutate them afterwards.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .textstats import split_sentences

# Canonical column order for full lexical score tables.
TABLE_COLUMNS = (
    "avg_story_length",
    "avg_sentence_length",
    "vocab_per_story",
    "tokens_per_story",
    "ttr",
    "pct_nouns",
    "pct_verbs",
    "pct_pronouns",
    "pct_adj",
    "rep_1",
    "rep_2",
    "rep_3",
    "rep_4",
    "diversity",
    "yules_k",
    "entropy",
)

# Metrics where a smaller value is better; everything else defaults to
# higher-is-better.
LOWER_BETTER_DEFAULT = frozenset({"rep_1", "rep_2", "rep_3", "rep_4", "yules_k"})

DIRECTIONS = ("higher", "lower")


class DataError(ValueError):
    """Malformed or inconsistent input data (CLI exit code 1)."""


class ParseError(DataError):
    """A line or cell could not be parsed; the message names the location."""


class EmptyCorpusError(DataError):
    """A story file contained no stories."""


class IntegrityError(DataError):
    """Structurally valid input that violates a cross-record constraint."""


class ConfigError(ValueError):
    """Invalid configuration, e.g. an unknown row or column (CLI exit code 2)."""


@dataclass(frozen=True)
class Story:
    """One story, as a sentence list plus its canonical joined text."""

    story_id: str
    model: str
    sentences: tuple[str, ...]
    raw_text: str

    @classmethod
    def build(cls, story_id: str, model: str, sentences: list[str]) -> "Story":
        return cls(
            story_id=story_id,
            model=model,
            sentences=tuple(sentences),
            raw_text=" ".join(sentences),
        )


@dataclass(frozen=True)
class ModelCorpus:
    """All stories attributed to one model, in file order."""

    model: str
    stories: tuple[Story, ...]

    @property
    def story_count(self) -> int:
        return len(self.stories)


@dataclass(frozen=True)
class MetricSpec:
    """A metric column: its name and which direction counts as better."""

    name: str
    direction: str = "higher"

    def __post_init__(self) -> None:
        if self.direction not in DIRECTIONS:
            raise ConfigError(
                f"metric {self.name!r}: direction must be one of {DIRECTIONS},"
                f" got {self.direction!r}"
            )


@dataclass(frozen=True)
class ScoreMatrix:
    """Models x metrics score table with optional missing cells.

    ``rows`` maps model name to a metric->value dict; a metric absent from a
    model's dict is a missing cell.  ``human_row`` names the reference row
    used for human-likeness scoring; it may be None for tables that carry no
    reference corpus.
    """

    metrics: tuple[MetricSpec, ...]
    rows: dict[str, dict[str, float]]
    human_row: str | None = None

    def __post_init__(self) -> None:
        names = [m.name for m in self.metrics]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate metric names in score matrix")
        if not self.rows:
            raise ConfigError("score matrix has no rows")
        if self.human_row is not None and self.human_row not in self.rows:
            raise ConfigError(
                f"human row {self.human_row!r} not found; rows are "
                f"{sorted(self.rows)}"
            )
        known = set(names)
        for model, cells in self.rows.items():
            for metric, value in cells.items():
                if metric not in known:
                    raise ConfigError(
                        f"row {model!r} has value for unknown metric {metric!r}"
                    )
                if not (isinstance(value, (int, float)) and math.isfinite(value)):
                    raise ConfigError(
                        f"row {model!r}, metric {metric!r}: non-finite value"
                        f" {value!r}"
                    )

    @property
    def metric_names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.metrics)

    @property
    def models(self) -> tuple[str, ...]:
        return tuple(self.rows)

    @property
    def machine_models(self) -> tuple[str, ...]:
        return tuple(m for m in self.rows if m != self.human_row)

    def value(self, model: str, metric: str) -> float | None:
        if model not in self.rows:
            raise ConfigError(f"unknown model {model!r}")
        return self.rows[model].get(metric)

    def direction(self, metric: str) -> str:
        for spec in self.metrics:
            if spec.name == metric:
                return spec.direction
        raise ConfigError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class RankingRecord:
    """One evaluator's rank for one model on one item and criterion."""

    evaluator_id: str
    item_id: str
    criterion: str
    model: str
    rank: int

    @property
    def source(self) -> str:
        """Evaluator population, the ``evaluator_id`` prefix before ':'."""
        head, _, _ = self.evaluator_id.partition(":")
        return head


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def load_stories(path: str | Path) -> list[ModelCorpus]:
    """Load a JSON Lines story file, grouped by model in first-seen order.

    Every line needs ``story_id``, ``model`` and at least one of
    ``sentences``/``raw_text``.  When both are present ``sentences`` wins and
    ``raw_text`` is recomputed as their space-join; a bare ``raw_text`` is
    sentence-split first.  ``story_id`` must be unique within one model.
    """
    path = Path(path)
    grouped: dict[str, list[Story]] = {}
    seen_ids: set[tuple[str, str]] = set()
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            where = f"{path.name} line {lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{where}: invalid JSON ({exc.msg})") from exc
            _require(isinstance(record, dict), f"{where}: expected an object")
            story_id = record.get("story_id")
            model = record.get("model")
            _require(
                isinstance(story_id, str) and bool(story_id),
                f"{where}: missing or empty 'story_id'",
            )
            _require(
                isinstance(model, str) and bool(model),
                f"{where}: missing or empty 'model'",
            )
            sentences = record.get("sentences")
            raw_text = record.get("raw_text")
            if sentences is not None:
                _require(
                    isinstance(sentences, list)
                    and all(isinstance(s, str) and s.strip() for s in sentences),
                    f"{where}: 'sentences' must be a list of non-empty strings",
                )
                _require(bool(sentences), f"{where}: 'sentences' is empty")
                sentence_list = [s.strip() for s in sentences]
            else:
                _require(
                    isinstance(raw_text, str) and bool(raw_text.strip()),
                    f"{where}: need 'sentences' or non-empty 'raw_text'",
                )
                sentence_list = split_sentences(raw_text)
                _require(
                    bool(sentence_list),
                    f"{where}: 'raw_text' contains no sentences",
                )
            key = (model, story_id)
            if key in seen_ids:
                raise IntegrityError(
                    f"{where}: duplicate story_id {story_id!r} for model"
                    f" {model!r}"
                )
            seen_ids.add(key)
            grouped.setdefault(model, []).append(
                Story.build(story_id, model, sentence_list)
            )
    if not grouped:
        raise EmptyCorpusError(f"{path.name}: no stories found")
    return [
        ModelCorpus(model=model, stories=tuple(stories))
        for model, stories in grouped.items()
    ]


def dump_stories(corpora: list[ModelCorpus], path: str | Path) -> None:
    """Write corpora back to JSON Lines; load_stories() round-trips exactly."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for corpus in corpora:
            for story in corpus.stories:
                record = {
                    "story_id": story.story_id,
                    "model": story.model,
                    "sentences": list(story.sentences),
                    "raw_text": story.raw_text,
                }
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def _resolve_directions(
    path: Path,
    directions: dict[str, str] | str | Path | None,
) -> dict[str, str]:
    """Resolve per-metric directions: explicit arg, else sidecar, else {}."""
    if directions is None:
        sidecar = path.parent / "metrics.json"
        if sidecar.is_file():
            directions = sidecar
        else:
            return {}
    if isinstance(directions, (str, Path)):
        sidecar_path = Path(directions)
        try:
            loaded = json.loads(sidecar_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"{sidecar_path.name}: invalid JSON ({exc.msg})"
            ) from exc
        if not isinstance(loaded, dict):
            raise ParseError(
                f"{sidecar_path.name}: expected an object mapping metric"
                " name to direction"
            )
        directions = loaded
    for name, direction in directions.items():
        if direction not in DIRECTIONS:
            raise ConfigError(
                f"metric {name!r}: direction must be one of {DIRECTIONS},"
                f" got {direction!r}"
            )
    return dict(directions)


def _direction_for(name: str, overrides: dict[str, str]) -> str:
    if name in overrides:
        return overrides[name]
    return "lower" if name in LOWER_BETTER_DEFAULT else "higher"


def load_score_matrix(
    path: str | Path,
    human_row: str | None = None,
    directions: dict[str, str] | str | Path | None = None,
) -> ScoreMatrix:
    """Load a score matrix from CSV (or a JSON report document).

    Blank CSV cells become missing values; any other non-numeric cell is a
    parse error naming its location.  ``human_row``, when given, must name an
    existing row.  ``directions`` may be a mapping or a path to a sidecar
    JSON file; by default a ``metrics.json`` next to the CSV is used if
    present, and unlisted metrics get the built-in defaults.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        return _load_score_json(path, human_row, directions)
    overrides = _resolve_directions(path, directions)
    rows: dict[str, dict[str, float]] = {}
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyCorpusError(f"{path.name}: empty score file") from None
        _require(
            bool(header) and header[0] == "model",
            f"{path.name}: first column must be 'model', got {header[:1]!r}",
        )
        metric_names = header[1:]
        _require(bool(metric_names), f"{path.name}: no metric columns")
        for lineno, cells in enumerate(reader, start=2):
            if not cells:
                continue
            where = f"{path.name} line {lineno}"
            _require(
                len(cells) == len(header),
                f"{where}: expected {len(header)} cells, got {len(cells)}",
            )
            model = cells[0].strip()
            _require(bool(model), f"{where}: empty model name")
            if model in rows:
                raise IntegrityError(f"{where}: duplicate model {model!r}")
            row: dict[str, float] = {}
            for name, cell in zip(metric_names, cells[1:]):
                cell = cell.strip()
                if not cell:
                    continue
                try:
                    row[name] = float(cell)
                except ValueError:
                    raise ParseError(
                        f"{where}: metric {name!r}: non-numeric cell {cell!r}"
                    ) from None
            rows[model] = row
    if not rows:
        raise EmptyCorpusError(f"{path.name}: no score rows")
    metrics = tuple(
        MetricSpec(name, _direction_for(name, overrides))
        for name in metric_names
    )
    return ScoreMatrix(metrics=metrics, rows=rows, human_row=human_row)


def _load_score_json(
    path: Path,
    human_row: str | None,
    directions: dict[str, str] | str | Path | None,
) -> ScoreMatrix:
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path.name}: invalid JSON ({exc.msg})") from exc
    _require(
        isinstance(document, dict) and "metrics" in document and "rows" in document,
        f"{path.name}: expected an object with 'metrics' and 'rows'",
    )
    overrides = _resolve_directions(path, directions) if directions else {}
    metrics = []
    for entry in document["metrics"]:
        _require(
            isinstance(entry, dict) and "name" in entry,
            f"{path.name}: each metric needs a 'name'",
        )
        name = entry["name"]
        direction = overrides.get(name, entry.get("direction", "higher"))
        metrics.append(MetricSpec(name, direction))
    rows = {}
    for model, cells in document["rows"].items():
        _require(
            isinstance(cells, dict),
            f"{path.name}: row {model!r} must be an object",
        )
        row = {}
        for metric, value in cells.items():
            _require(
                isinstance(value, (int, float)),
                f"{path.name}: row {model!r}, metric {metric!r}:"
                f" non-numeric value {value!r}",
            )
            row[metric] = float(value)
        rows[model] = row
    if human_row is None:
        human_row = document.get("human_row")
    return ScoreMatrix(metrics=tuple(metrics), rows=rows, human_row=human_row)


_RANKING_COLUMNS = ("evaluator_id", "item_id", "criterion", "model", "rank")


def load_rankings(path: str | Path) -> list[RankingRecord]:
    """Load a ranking sheet and check every ballot is a permutation of 1..k.

    A ballot is the set of rows sharing (evaluator_id, item_id, criterion).
    Duplicate or out-of-range ranks raise IntegrityError; an empty file is an
    empty list.
    """
    path = Path(path)
    records: list[RankingRecord] = []
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            return []
        missing = [c for c in _RANKING_COLUMNS if c not in reader.fieldnames]
        _require(
            not missing,
            f"{path.name}: missing columns {missing}",
        )
        for lineno, row in enumerate(reader, start=2):
            where = f"{path.name} line {lineno}"
            values = {c: (row.get(c) or "").strip() for c in _RANKING_COLUMNS}
            for column in _RANKING_COLUMNS:
                _require(bool(values[column]), f"{where}: empty {column!r}")
            try:
                rank = int(values["rank"])
            except ValueError:
                raise ParseError(
                    f"{where}: rank must be an integer,"
                    f" got {values['rank']!r}"
                ) from None
            records.append(
                RankingRecord(
                    evaluator_id=values["evaluator_id"],
                    item_id=values["item_id"],
                    criterion=values["criterion"],
                    model=values["model"],
                    rank=rank,
                )
            )
    _check_ballots(records, path.name)
    return records


def _check_ballots(records: list[RankingRecord], filename: str) -> None:
    ballots: dict[tuple[str, str, str], list[RankingRecord]] = {}
    for record in records:
        key = (record.evaluator_id, record.item_id, record.criterion)
        ballots.setdefault(key, []).append(record)
    for (evaluator, item, criterion), group in ballots.items():
        where = f"{filename}: ballot ({evaluator!r}, {item!r}, {criterion!r})"
        models = [r.model for r in group]
        if len(set(models)) != len(models):
            raise IntegrityError(f"{where}: a model appears twice")
        k = len(group)
        ranks = sorted(r.rank for r in group)
        if ranks != list(range(1, k + 1)):
            raise IntegrityError(
                f"{where}: ranks {ranks} are not a permutation of 1..{k}"
            )
