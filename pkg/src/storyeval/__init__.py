"""Corpus-level story evaluation: lexical statistics, POS profiles and
human-likeness scoring for machine-generated story corpora."""

__version__ = "0.1.0"

from .corpus import (
    ConfigError,
    DataError,
    EmptyCorpusError,
    IntegrityError,
    MetricSpec,
    ModelCorpus,
    ParseError,
    RankingRecord,
    ScoreMatrix,
    Story,
    load_rankings,
    load_score_matrix,
    load_stories,
)
from .ideality import (
    ChScore,
    IdealityScore,
    McRun,
    WeightVector,
    ch_score,
    closeness,
    closest_to_human,
    ideality,
    monte_carlo,
    sample_weights,
    weighted_ideality,
)
from .postag import PosProfile, PosTag, RuleTagger, pos_profile, tag
from .ranks import MeanRank, RankTable, mean_ranks, mean_ranks_by_source
from .report import (
    ReportSpec,
    compute_highlights,
    emit_mc_distribution,
    matrix_from_stats,
    render,
)
from .textstats import (
    CorpusLexStats,
    StoryTokenStats,
    UndefinedMetricError,
    corpus_stats,
    diversity,
    rep_n,
    shannon_entropy,
    split_sentences,
    story_stats,
    tokenize,
    yules_k,
)

__all__ = [
    "ChScore",
    "ConfigError",
    "CorpusLexStats",
    "DataError",
    "EmptyCorpusError",
    "IdealityScore",
    "IntegrityError",
    "McRun",
    "MeanRank",
    "MetricSpec",
    "ModelCorpus",
    "ParseError",
    "PosProfile",
    "PosTag",
    "RankTable",
    "RankingRecord",
    "ReportSpec",
    "RuleTagger",
    "ScoreMatrix",
    "Story",
    "StoryTokenStats",
    "UndefinedMetricError",
    "WeightVector",
    "ch_score",
    "closeness",
    "closest_to_human",
    "compute_highlights",
    "corpus_stats",
    "diversity",
    "emit_mc_distribution",
    "ideality",
    "load_rankings",
    "load_score_matrix",
    "load_stories",
    "matrix_from_stats",
    "mean_ranks",
    "mean_ranks_by_source",
    "monte_carlo",
    "pos_profile",
    "rep_n",
    "render",
    "sample_weights",
    "shannon_entropy",
    "split_sentences",
    "story_stats",
    "tag",
    "tokenize",
    "weighted_ideality",
    "yules_k",
]
