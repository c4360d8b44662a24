"""Unit tests for table rendering, highlights, and distribution output."""
from __future__ import annotations

import csv
import io
import json
import logging
import random

import pytest

import oracles
from storyeval.corpus import (
    ConfigError,
    MetricSpec,
    ModelCorpus,
    ScoreMatrix,
    Story,
    TABLE_COLUMNS,
    load_score_matrix,
)
from storyeval.ideality import monte_carlo
from storyeval.postag import pos_profile
from storyeval.ranks import mean_ranks, mean_ranks_by_source
from storyeval.report import (
    Highlight,
    ReportSpec,
    compute_highlights,
    emit_mc_distribution,
    highlights_document,
    matrix_from_stats,
    render,
    render_csv,
    render_json,
    render_markdown,
    render_rank_csv,
    render_rank_json,
    render_rank_markdown,
)
from storyeval.textstats import corpus_stats

from conftest import HUMAN_ROW
from test_ranks import record


def small_matrix(directions=None):
    rows = {
        "H": {"up": 10.0, "down": 5.0},
        "alpha": {"up": 12.0, "down": 9.0},
        "beta": {"up": 9.0, "down": 4.0},
    }
    directions = directions or {"up": "higher", "down": "lower"}
    metrics = tuple(MetricSpec(n, directions[n]) for n in ("up", "down"))
    return ScoreMatrix(metrics=metrics, rows=rows, human_row="H")


class TestComputeHighlights:
    def test_direction_aware_best_and_second(self):
        marks = compute_highlights(small_matrix())
        assert marks["up"].best == "alpha"      # higher is better
        assert marks["up"].second == "H"
        assert marks["down"].best == "beta"     # lower is better
        assert marks["down"].second == "H"

    def test_closest_excludes_human_row(self):
        marks = compute_highlights(small_matrix())
        assert marks["up"].closest == "beta"    # |9-10| < |12-10|
        assert marks["down"].closest == "beta"

    def test_reference_story_length_winners(self, reference_matrix):
        marks = compute_highlights(reference_matrix)
        cell = marks["avg_story_length"]
        assert cell.best == "StoryLLaVA"        # 160.7 is the longest
        assert cell.second == "Transf.+BART"
        assert cell.closest == "Transf.+BART"

    def test_reference_vocab_richness_winners(self, reference_matrix):
        cell = compute_highlights(reference_matrix)["yules_k"]
        assert cell.best == "Humans"            # lower-better column
        assert cell.closest == "StoryLLaVA"

    def test_matches_brute_force_scan(self, reference_matrix):
        marks = compute_highlights(reference_matrix)
        for spec in reference_matrix.metrics:
            values = {
                m: v for m in reference_matrix.models
                if (v := reference_matrix.value(m, spec.name)) is not None
            }
            best, second = oracles.best_and_second(
                values, lower_is_better=spec.direction == "lower"
            )
            assert marks[spec.name].best == best
            assert marks[spec.name].second == second

    def test_random_matrices_match_oracle(self):
        rng = random.Random(20240817)
        for _ in range(200):
            models = ["H"] + [f"m{i}" for i in range(rng.randint(1, 5))]
            names = [f"g{i}" for i in range(rng.randint(1, 4))]
            metrics = tuple(
                MetricSpec(n, rng.choice(("higher", "lower"))) for n in names
            )
            rows = {}
            for model in models:
                row = {
                    n: round(rng.uniform(-20, 20), 3)
                    for n in names if rng.random() > 0.2
                }
                rows[model] = row
            if not any(rows.values()):
                continue
            matrix = ScoreMatrix(metrics=metrics, rows=rows, human_row="H")
            marks = compute_highlights(matrix)
            for spec in metrics:
                values = {
                    m: v for m in models
                    if (v := matrix.value(m, spec.name)) is not None
                }
                if not values:
                    assert spec.name not in marks  # empty columns are dropped
                    continue
                best, second = oracles.best_and_second(
                    values, lower_is_better=spec.direction == "lower"
                )
                assert marks[spec.name].best == best
                assert marks[spec.name].second == second

    def test_single_row_has_no_second(self):
        matrix = ScoreMatrix(
            metrics=(MetricSpec("up", "higher"),),
            rows={"only": {"up": 1.0}},
        )
        cell = compute_highlights(matrix)["up"]
        assert cell.best == "only"
        assert cell.second is None
        assert cell.closest is None

    def test_no_human_row_means_no_closest(self):
        matrix = ScoreMatrix(
            metrics=(MetricSpec("up", "higher"),),
            rows={"a": {"up": 1.0}, "b": {"up": 2.0}},
        )
        assert compute_highlights(matrix)["up"].closest is None

    def test_mark_closest_disabled(self):
        marks = compute_highlights(small_matrix(), mark_closest=False)
        assert marks["up"].closest is None


class TestRenderMarkdown:
    def test_styling_and_closest_marker(self, reference_matrix):
        spec = ReportSpec(columns=("avg_story_length",), formats=("md",))
        text = render(reference_matrix, spec)["md"]
        assert "**160.7**" in text            # best is bold
        assert "_60.2_ [ch]" in text          # runner-up doubles as closest

    def test_missing_cells_render_dash(self, reference_matrix):
        text = render_markdown(reference_matrix, columns=["yules_k"])
        row = next(line for line in text.splitlines() if "ReCo-RL" in line)
        assert "| - |" in row

    def test_header_matches_column_order(self):
        text = render_markdown(small_matrix(), columns=["down", "up"])
        header = text.splitlines()[0]
        assert header.index("down") < header.index("up")

    def test_unstyled_when_marking_disabled(self):
        spec = ReportSpec(formats=("md",), mark_best=False, mark_closest=False)
        text = render(small_matrix(), spec)["md"]
        assert "**" not in text
        assert "[ch]" not in text


class TestRenderCsv:
    def test_round_trips_through_loader(self, reference_matrix, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text(render_csv(reference_matrix), encoding="utf-8")
        reloaded = load_score_matrix(path, human_row=HUMAN_ROW)
        assert reloaded.rows == reference_matrix.rows
        assert reloaded.metric_names == reference_matrix.metric_names

    def test_no_markdown_styling_leaks(self, reference_matrix):
        text = render_csv(reference_matrix)
        assert "**" not in text
        assert "[ch]" not in text

    def test_missing_cells_are_blank_fields(self):
        matrix = ScoreMatrix(
            metrics=(MetricSpec("up", "higher"), MetricSpec("down", "lower")),
            rows={"m": {"up": 1.5}, "n": {"up": 2.0, "down": 3.5}},
        )
        rows = list(csv.reader(io.StringIO(render_csv(matrix))))
        assert rows[0] == ["model", "up", "down"]
        assert rows[1] == ["m", "1.5", ""]


class TestRenderJson:
    def test_round_trip_is_bit_exact(self, reference_matrix):
        payload = json.loads(render_json(reference_matrix))
        for model, row in reference_matrix.rows.items():
            assert payload["rows"][model] == row
        assert payload["human_row"] == HUMAN_ROW
        assert [m["name"] for m in payload["metrics"]] == list(
            reference_matrix.metric_names
        )

    def test_highlights_included_via_render(self, reference_matrix):
        documents = render(reference_matrix, ReportSpec(formats=("json",)))
        payload = json.loads(documents["json"])
        assert payload["highlights"]["avg_story_length"]["best"] == "StoryLLaVA"

    def test_highlights_document_shape(self, reference_matrix):
        marks = compute_highlights(reference_matrix)
        payload = json.loads(highlights_document(marks))
        assert payload["yules_k"] == {
            "best": "Humans",
            "second": "StoryLLaVA",
            "closest_to_human": "StoryLLaVA",
        }


class TestRender:
    def test_formats_validated_eagerly(self):
        with pytest.raises(ConfigError):
            ReportSpec(formats=("pdf",))

    def test_unknown_column_rejected(self, reference_matrix):
        spec = ReportSpec(columns=("bogus",), formats=("md",))
        with pytest.raises(ConfigError):
            render(reference_matrix, spec)

    def test_column_subset_and_order_respected(self, reference_matrix):
        spec = ReportSpec(columns=("entropy", "ttr"), formats=("csv",))
        documents = render(reference_matrix, spec)
        header = documents["csv"].splitlines()[0]
        assert header == "model,entropy,ttr"

    def test_csv_request_brings_highlight_sidecar(self, reference_matrix):
        documents = render(reference_matrix, ReportSpec(formats=("csv",)))
        assert set(documents) == {"csv", "highlights"}
        sidecar = json.loads(documents["highlights"])
        assert sidecar["avg_story_length"]["best"] == "StoryLLaVA"

    def test_all_missing_column_omitted_with_warning(self, caplog):
        matrix = ScoreMatrix(
            metrics=(MetricSpec("up", "higher"), MetricSpec("ghost", "higher")),
            rows={"m": {"up": 1.0}, "n": {"up": 2.0}},
        )
        with caplog.at_level(logging.WARNING):
            documents = render(matrix, ReportSpec(formats=("md",)))
        assert "ghost" in caplog.text
        assert "ghost" not in documents["md"].splitlines()[0]

    def test_every_column_missing_rejected(self):
        matrix = ScoreMatrix(
            metrics=(MetricSpec("ghost", "higher"),),
            rows={"m": {}},
        )
        with pytest.raises(ConfigError):
            render(matrix, ReportSpec(formats=("md",)))

    def test_mark_best_false_strips_best_and_second(self, reference_matrix):
        spec = ReportSpec(formats=("json",), mark_best=False)
        payload = json.loads(render(reference_matrix, spec)["json"])
        cell = payload["highlights"]["avg_story_length"]
        assert cell["best"] is None
        assert cell["closest_to_human"] == "Transf.+BART"


class TestMatrixFromStats:
    def build_inputs(self, models=("m1", "m2")):
        lex, pos = [], []
        for i, model in enumerate(models):
            sentences = [f"The dog ran to w{i}.", "She found a happy friend there."]
            stories = tuple(
                Story.build(f"s{j}", model, sentences) for j in range(3)
            )
            corpus = ModelCorpus(model=model, stories=stories)
            lex.append(corpus_stats(corpus))
            pos.append(pos_profile(corpus))
        return lex, pos

    def test_columns_in_canonical_order(self):
        lex, pos = self.build_inputs()
        matrix = matrix_from_stats(lex, pos)
        assert matrix.metric_names == TABLE_COLUMNS

    def test_mismatched_model_sets_rejected(self):
        lex, pos = self.build_inputs()
        with pytest.raises(ConfigError):
            matrix_from_stats(lex, pos[:1])

    def test_human_row_passthrough(self):
        lex, pos = self.build_inputs(models=("ref", "m"))
        matrix = matrix_from_stats(lex, pos, human_row="ref")
        assert matrix.human_row == "ref"

    def test_undefined_metrics_left_missing(self):
        story = Story.build("s", "m", ["Hi there."])  # two tokens, no 4-grams
        corpus = ModelCorpus(model="m", stories=(story,))
        matrix = matrix_from_stats([corpus_stats(corpus)], [pos_profile(corpus)])
        assert matrix.value("m", "rep_4") is None
        assert matrix.value("m", "diversity") is None
        assert matrix.value("m", "rep_1") is not None

    def test_default_directions_apply(self):
        lex, pos = self.build_inputs()
        matrix = matrix_from_stats(lex, pos)
        assert matrix.direction("rep_2") == "lower"
        assert matrix.direction("diversity") == "higher"


class TestEmitMcDistribution:
    def test_rows_ordered_by_run_then_model(self, reference_matrix):
        runs = monte_carlo(reference_matrix, runs=3, norm_kind="l1", seed=1,
                           models=["GLACNet", "AREL"])
        text, _ = emit_mc_distribution(runs)
        rows = list(csv.DictReader(io.StringIO(text)))
        assert [(r["run"], r["model"]) for r in rows] == [
            ("0", "AREL"), ("0", "GLACNet"),
            ("1", "AREL"), ("1", "GLACNet"),
            ("2", "AREL"), ("2", "GLACNet"),
        ]

    def test_summary_recomputes_from_csv(self, reference_matrix):
        import numpy as np

        runs = monte_carlo(reference_matrix, runs=50, norm_kind="l2", seed=3)
        text, summary = emit_mc_distribution(runs)
        scores: dict[str, list[float]] = {}
        for row in csv.DictReader(io.StringIO(text)):
            scores.setdefault(row["model"], []).append(float(row["score"]))
        for model, values in scores.items():
            stats = summary[model]
            assert stats["count"] == len(values) == 50
            assert stats["min"] == min(values)
            assert stats["max"] == max(values)
            assert stats["median"] == np.percentile(values, 50)
            assert stats["q1"] == np.percentile(values, 25)
            assert stats["q3"] == np.percentile(values, 75)

    def test_constant_scores_give_flat_summary(self, reference_matrix):
        from storyeval.ideality import WeightVector

        dim = len(reference_matrix.metric_names)
        runs = monte_carlo(
            reference_matrix, runs=4, norm_kind="l1", seed=0,
            models=["AREL"], sampler=lambda i: WeightVector.ones(dim),
        )
        _, summary = emit_mc_distribution(runs)
        stats = summary["AREL"]
        assert stats["min"] == stats["q1"] == stats["median"]
        assert stats["median"] == stats["q3"] == stats["max"]

    def test_empty_runs_rejected(self):
        with pytest.raises(ValueError):
            emit_mc_distribution([])


class TestRankRendering:
    def make_table(self):
        records = [
            record("e1", "i", "fluency", "good", 1),
            record("e1", "i", "fluency", "bad", 2),
            record("e2", "i", "fluency", "good", 1),
            record("e2", "i", "fluency", "bad", 2),
        ]
        return mean_ranks(records)

    def test_markdown_bolds_lowest_mean(self):
        text = render_rank_markdown(self.make_table())
        lines = text.splitlines()
        assert "fluency" in lines[0]  # criteria are the columns
        good = next(line for line in lines if "good" in line)
        bad = next(line for line in lines if "bad" in line)
        assert "**1.0**" in good
        assert "_2.0_" in bad

    def test_csv_long_form(self):
        text = render_rank_csv(self.make_table())
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["criterion", "model", "mean_rank", "count"]
        assert ["fluency", "good", "1.0", "2"] in rows

    def test_csv_grouped_tables_add_source_column(self):
        records = [
            record("human:1", "i", "c", "m", 1),
            record("llm:1", "i", "c", "m", 2),
        ]
        text = render_rank_csv(mean_ranks_by_source(records))
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0][0] == "source"
        assert {r[0] for r in rows[1:]} == {"human", "llm"}

    def test_json_nested_payload(self):
        payload = json.loads(render_rank_json(self.make_table()))
        assert payload["fluency"]["good"] == {"mean": 1.0, "count": 2}
