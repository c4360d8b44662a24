"""Aggregation of rank ballots into mean ranks per criterion and model.

A ballot ranks k models from 1 (best) to k on one criterion for one item.
Mean ranks only average those integers, so they are invariant to record
order, and over complete ballots the per-criterion means always sum to
k(k+1)/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import RankingRecord


@dataclass(frozen=True)
class MeanRank:
    """Average rank of one model on one criterion, lower is better."""

    mean: float
    count: int


@dataclass(frozen=True)
class RankTable:
    """Mean ranks as criterion -> model -> MeanRank, keys sorted."""

    cells: Mapping[str, Mapping[str, MeanRank]]

    @property
    def criteria(self) -> tuple[str, ...]:
        return tuple(self.cells)

    @property
    def models(self) -> tuple[str, ...]:
        names = {model for row in self.cells.values() for model in row}
        return tuple(sorted(names))


def mean_ranks(records: Iterable[RankingRecord]) -> RankTable:
    """Average raw ranks per (criterion, model), sorted for stable output."""
    sums: dict[tuple[str, str], list[float]] = {}
    for record in records:
        sums.setdefault((record.criterion, record.model), []).append(
            float(record.rank)
        )
    cells: dict[str, dict[str, MeanRank]] = {}
    for criterion, model in sorted(sums):
        ranks = sums[(criterion, model)]
        cells.setdefault(criterion, {})[model] = MeanRank(
            mean=math.fsum(ranks) / len(ranks),
            count=len(ranks),
        )
    return RankTable(cells=cells)


def mean_ranks_by_source(
    records: Iterable[RankingRecord],
) -> dict[str, RankTable]:
    """Split records by evaluator source and aggregate each group.

    The source is the ``evaluator_id`` prefix before ':' (the whole id when
    there is no colon), so mixed human/LLM sheets separate into one table
    per evaluator population.
    """
    by_source: dict[str, list[RankingRecord]] = {}
    for record in records:
        by_source.setdefault(record.source, []).append(record)
    return {
        source: mean_ranks(group)
        for source, group in sorted(by_source.items())
    }
