"""Human-likeness scoring of a model's metric profile.

Every metric where both the model and the human reference have values
produces a gap ``|model - human|``.  A gap of g contributes
``1/sigmoid(g) = 1 + exp(-g)`` to the model's score, a value in (1, 2] that
is largest for a perfect match and decays toward 1 as the gap grows, so a
raw score over m metrics lives in (m, 2m] and its normalized form in
(1, 2].  Direction metadata is irrelevant here: only distance to the human
value matters.

The weighted variant replaces the implicit all-ones weights with a sampled
nonnegative vector, either summing to the metric count (L1 mode) or with
Euclidean norm equal to the metric count (L2 mode).  Both samplers draw
uniformly from their constraint surface and are fully determined by the
seed.  Summation always runs in metric-column order with math.fsum, so the
all-ones weight vector reproduces the unweighted raw score bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .corpus import ConfigError, ScoreMatrix

NORM_KINDS = ("l1", "l2")

_CONSTRAINT_TOL = 1e-9


class MetricExcludedError(ValueError):
    """The human reference has no value for the requested metric."""


class UndefinedScoreError(ValueError):
    """A model shares no metrics with the human reference."""


def closeness(gap: float) -> float:
    """Per-metric credit for an absolute gap: 1 + exp(-gap), in (1, 2].

    Strictly decreasing in the gap; 2.0 for an exact match.  For gaps beyond
    float exp() range the credit saturates at 1.0.
    """
    if gap < 0:
        raise ValueError(f"gap must be nonnegative, got {gap}")
    return 1.0 + math.exp(-gap)


def _require_human(matrix: ScoreMatrix) -> str:
    if matrix.human_row is None:
        raise ConfigError("score matrix has no human reference row")
    return matrix.human_row


def _metric_scales(matrix: ScoreMatrix) -> dict[str, float]:
    """Population standard deviation of each metric over all present rows."""
    scales: dict[str, float] = {}
    for name in matrix.metric_names:
        values = [
            row[name] for row in matrix.rows.values() if name in row
        ]
        if len(values) < 2:
            scales[name] = 0.0
            continue
        mean = math.fsum(values) / len(values)
        var = math.fsum((v - mean) ** 2 for v in values) / len(values)
        scales[name] = math.sqrt(var)
    return scales


def metric_gaps(
    matrix: ScoreMatrix,
    model: str,
    standardize: bool = False,
) -> dict[str, float]:
    """Absolute gaps to the human row, keyed by metric in column order.

    Metrics missing on either side are left out.  With ``standardize`` each
    gap is divided by the metric's population standard deviation across all
    rows (gaps on a constant column stay 0).
    """
    human = _require_human(matrix)
    if model not in matrix.rows:
        raise ConfigError(f"unknown model {model!r}")
    scales = _metric_scales(matrix) if standardize else None
    human_cells = matrix.rows[human]
    model_cells = matrix.rows[model]
    gaps: dict[str, float] = {}
    for name in matrix.metric_names:
        if name not in human_cells or name not in model_cells:
            continue
        gap = abs(model_cells[name] - human_cells[name])
        if scales is not None and scales[name] > 0.0:
            gap /= scales[name]
        gaps[name] = gap
    return gaps


@dataclass(frozen=True)
class ChScore:
    """The machine model closest to the human value on one metric."""

    metric: str
    model: str
    gap: float
    tied: tuple[str, ...] = ()


def ch_score(matrix: ScoreMatrix, metric: str) -> ChScore:
    """Find the machine model minimizing |model - human| on ``metric``.

    The human row never competes.  Exact ties are broken toward the
    lexicographically smallest model name and reported in ``tied``.

    Raises:
        MetricExcludedError: if the human row has no value for the metric.
        UndefinedScoreError: if no machine model has a value for it.
    """
    human = _require_human(matrix)
    if metric not in matrix.metric_names:
        raise ConfigError(f"unknown metric {metric!r}")
    human_value = matrix.rows[human].get(metric)
    if human_value is None:
        raise MetricExcludedError(
            f"human row has no value for metric {metric!r}"
        )
    candidates = [
        (abs(cells[metric] - human_value), model)
        for model, cells in matrix.rows.items()
        if model != human and metric in cells
    ]
    if not candidates:
        raise UndefinedScoreError(
            f"no machine model has a value for metric {metric!r}"
        )
    best_gap = min(gap for gap, _ in candidates)
    tied = tuple(sorted(model for gap, model in candidates if gap == best_gap))
    return ChScore(metric=metric, model=tied[0], gap=best_gap, tied=tied)


def closest_to_human(matrix: ScoreMatrix) -> dict[str, ChScore]:
    """ch_score for every metric the human row covers, in column order."""
    human = _require_human(matrix)
    out: dict[str, ChScore] = {}
    for name in matrix.metric_names:
        if name not in matrix.rows[human]:
            continue
        try:
            out[name] = ch_score(matrix, name)
        except UndefinedScoreError:
            continue
    return out


@dataclass(frozen=True)
class IdealityScore:
    """Raw and normalized human-likeness of one model.

    ``raw`` sums the per-metric closeness credits over the
    ``evaluated_metrics`` shared with the human row; ``normalized`` divides
    by that count, so models with different metric coverage are comparable.
    """

    model: str
    evaluated_metrics: int
    raw: float
    normalized: float


def ideality(
    matrix: ScoreMatrix,
    model: str,
    standardize_gaps: bool = False,
) -> IdealityScore:
    """Score ``model`` against the human row over their shared metrics.

    Raises:
        UndefinedScoreError: if the model shares no metrics with the human
            row.
    """
    gaps = metric_gaps(matrix, model, standardize=standardize_gaps)
    if not gaps:
        raise UndefinedScoreError(
            f"model {model!r} shares no metrics with the human row"
        )
    raw = math.fsum(closeness(gap) for gap in gaps.values())
    count = len(gaps)
    assert count <= raw <= 2.0 * count, "closeness credits out of range"
    return IdealityScore(
        model=model,
        evaluated_metrics=count,
        raw=raw,
        normalized=raw / count,
    )


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative metric weights satisfying one norm constraint.

    L1 mode: the weights sum to the metric count.  L2 mode: their Euclidean
    norm equals the metric count.  Either way an average entry sits near
    the all-ones vector that reproduces unweighted scoring.
    """

    weights: tuple[float, ...]
    norm_kind: str

    def __post_init__(self) -> None:
        if self.norm_kind not in NORM_KINDS:
            raise ConfigError(
                f"norm_kind must be one of {NORM_KINDS}, got {self.norm_kind!r}"
            )
        if not self.weights:
            raise ValueError("weight vector is empty")
        if any(w < 0.0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        dim = len(self.weights)
        if self.norm_kind == "l1":
            actual = math.fsum(self.weights)
        else:
            actual = math.sqrt(math.fsum(w * w for w in self.weights))
        if abs(actual - dim) > _CONSTRAINT_TOL:
            raise ValueError(
                f"{self.norm_kind} constraint violated: expected {dim},"
                f" got {actual!r}"
            )

    @classmethod
    def ones(cls, dim: int) -> "WeightVector":
        """The all-ones vector; weighted scoring with it is unweighted."""
        return cls(weights=(1.0,) * dim, norm_kind="l1")


def sample_weights(
    seed: int | Sequence[int] | np.random.Generator,
    norm_kind: str,
    dim: int,
) -> WeightVector:
    """Draw one weight vector uniformly from the chosen constraint surface.

    L1 mode normalizes unit-exponential variates (uniform on the scaled
    simplex); L2 mode normalizes absolute standard normals (uniform on the
    positive orthant of the scaled sphere).  The same seed always yields the
    same vector.
    """
    if norm_kind not in NORM_KINDS:
        raise ConfigError(
            f"norm_kind must be one of {NORM_KINDS}, got {norm_kind!r}"
        )
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    rng = (
        seed
        if isinstance(seed, np.random.Generator)
        else np.random.default_rng(seed)
    )
    while True:
        if norm_kind == "l1":
            draw = rng.standard_exponential(dim)
            scale = draw.sum()
        else:
            draw = np.abs(rng.standard_normal(dim))
            scale = math.sqrt(float(np.dot(draw, draw)))
        if scale > 0.0:
            break
    weights = tuple(float(w) for w in draw * (dim / scale))
    return WeightVector(weights=weights, norm_kind=norm_kind)


def weighted_ideality(
    matrix: ScoreMatrix,
    model: str,
    weights: WeightVector,
    standardize_gaps: bool = False,
) -> float:
    """Weighted sum of closeness credits, weights aligned to metric columns.

    Metrics missing for the model or the human row drop out together with
    their weights.  The vector length must match the matrix's column count.
    """
    if len(weights.weights) != len(matrix.metrics):
        raise ValueError(
            f"weight vector has {len(weights.weights)} entries but the"
            f" matrix has {len(matrix.metrics)} metrics"
        )
    gaps = metric_gaps(matrix, model, standardize=standardize_gaps)
    if not gaps:
        raise UndefinedScoreError(
            f"model {model!r} shares no metrics with the human row"
        )
    by_name = dict(zip(matrix.metric_names, weights.weights))
    return math.fsum(
        by_name[name] * closeness(gap) for name, gap in gaps.items()
    )


@dataclass(frozen=True)
class McRun:
    """One Monte-Carlo run: a weight draw and every model's score under it."""

    run_index: int
    norm_kind: str
    seed: int
    weights: WeightVector
    scores: dict[str, float]


def monte_carlo(
    matrix: ScoreMatrix,
    runs: int,
    norm_kind: str,
    seed: int,
    models: Sequence[str] | None = None,
    sampler: Callable[[int], WeightVector] | None = None,
    standardize_gaps: bool = False,
) -> list[McRun]:
    """Score models under ``runs`` independently sampled weight vectors.

    Run i draws its weights from a stream derived from (seed, i), so any
    run is reproducible in isolation and the full list is reproducible from
    the seed alone.  All models within a run share that run's weights.
    ``sampler`` replaces the default draw (e.g. to force a fixed vector)
    and maps a run index to a WeightVector.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if seed < 0:
        raise ConfigError(f"seed must be nonnegative, got {seed}")
    chosen = list(models) if models is not None else list(matrix.machine_models)
    for model in chosen:
        if model not in matrix.rows:
            raise ConfigError(f"unknown model {model!r}")
    dim = len(matrix.metrics)
    out: list[McRun] = []
    for run_index in range(runs):
        if sampler is not None:
            weights = sampler(run_index)
        else:
            weights = sample_weights([seed, run_index], norm_kind, dim)
        scores = {
            model: weighted_ideality(
                matrix, model, weights, standardize_gaps=standardize_gaps
            )
            for model in chosen
        }
        out.append(
            McRun(
                run_index=run_index,
                norm_kind=weights.norm_kind,
                seed=seed,
                weights=weights,
                scores=scores,
            )
        )
    return out
