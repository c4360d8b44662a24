"""Lexical statistics for story corpora.

All metrics work on word tokens: lowercased maximal runs of letters and
digits, with internal apostrophes kept ("don't" is one token) and all other
punctuation dropped.  Sentence splitting is intentionally naive: a run of
``.!?`` followed by whitespace or end of text closes a sentence, and the
delimiter stays with the sentence.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

if TYPE_CHECKING:
    from .corpus import ModelCorpus, Story

TokenSequence = list[str]

# The n-gram repetition orders reported for every corpus.
REP_ORDERS = (1, 2, 3, 4)

_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*")
_SENT_END_RE = re.compile(r"[.!?]+(?=\s|$)")


class UndefinedMetricError(ValueError):
    """A metric was requested on input too short to define it."""


def tokenize(text: str) -> TokenSequence:
    """Lowercase ``text`` and return its word tokens.

    Tokens are maximal runs of letters/digits; apostrophes between two such
    runs are kept, so "Don't stop!" -> ["don't", "stop"].
    """
    return _TOKEN_RE.findall(text.replace("’", "'").lower())


def split_sentences(text: str) -> list[str]:
    """Split ``text`` into sentences on ``.!?`` runs followed by space or end.

    Delimiters stay attached and empty pieces are dropped:
    "What?! Go." -> ["What?!", "Go."].  Text without a terminator is one
    sentence.
    """
    sentences: list[str] = []
    start = 0
    for match in _SENT_END_RE.finditer(text):
        piece = text[start:match.end()].strip()
        if piece:
            sentences.append(piece)
        start = match.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def rep_n(tokens: TokenSequence, n: int) -> float:
    """Percentage of repeated overlapping n-grams in ``tokens``.

    rep_n = 100 * (1 - unique n-grams / total n-grams).  0 means every
    n-gram is distinct, values approach 100 as the text degenerates into
    repetition.

    Raises:
        UndefinedMetricError: if ``tokens`` is shorter than ``n``.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    total = len(tokens) - n + 1
    if total < 1:
        raise UndefinedMetricError(
            f"rep_{n} undefined for a {len(tokens)}-token story"
        )
    unique = len({tuple(tokens[i:i + n]) for i in range(total)})
    return 100.0 * (1.0 - unique / total)


def diversity(rep_2: float, rep_3: float, rep_4: float) -> float:
    """Aggregate n-gram diversity, reported on a 0..100 scale.

    The product of (1 - rep_n/100) over n = 2..4, scaled by 100.  Equals 100
    when no n-gram repeats and falls toward 0 as repetition accumulates at
    any order.
    """
    product = 1.0
    for rep in (rep_2, rep_3, rep_4):
        product *= 1.0 - rep / 100.0
    return 100.0 * product


@dataclass(frozen=True)
class StoryTokenStats:
    """Token-level profile of a single story.

    ``ngram_rep`` holds rep_n for each order in REP_ORDERS the story is long
    enough to define.
    """

    token_count: int
    freq: Mapping[str, int]
    unique_count: int
    ngram_rep: Mapping[int, float]
    sentence_count: int
    words_per_sentence: float


def story_stats(story: "Story") -> StoryTokenStats:
    """Tokenize ``story`` and compute its per-story statistics."""
    tokens = tokenize(story.raw_text)
    freq = Counter(tokens)
    reps = {}
    for n in REP_ORDERS:
        if len(tokens) >= n:
            reps[n] = rep_n(tokens, n)
    sentence_count = len(story.sentences)
    return StoryTokenStats(
        token_count=len(tokens),
        freq=freq,
        unique_count=len(freq),
        ngram_rep=reps,
        sentence_count=sentence_count,
        words_per_sentence=len(tokens) / sentence_count,
    )


def yules_k(stats: StoryTokenStats) -> float:
    """Yule's characteristic K of one story, from its frequency spectrum.

    K = 10^4 * (sum of squared token frequencies - L) / L^2 for L tokens.
    0 when every token is distinct; grows as the story reuses vocabulary.

    Raises:
        UndefinedMetricError: for an empty story.
    """
    length = stats.token_count
    if length < 1:
        raise UndefinedMetricError("Yule's K undefined for an empty story")
    sum_sq = sum(count * count for count in stats.freq.values())
    return 1e4 * (sum_sq - length) / (length * length)


def shannon_entropy(stats: StoryTokenStats) -> float:
    """Shannon entropy of the story's unigram distribution, in bits.

    Raises:
        UndefinedMetricError: for an empty story.
    """
    length = stats.token_count
    if length < 1:
        raise UndefinedMetricError("entropy undefined for an empty story")
    return -math.fsum(
        (count / length) * math.log2(count / length)
        for count in stats.freq.values()
    )


@dataclass(frozen=True)
class CorpusLexStats:
    """Corpus-level lexical statistics for one model.

    Repetition is averaged per story and diversity is computed from those
    averaged rep_n values, so the reported diversity always satisfies the
    product identity against the reported rep_2..rep_4.  ``vocab_per_story``
    divides the size of the corpus-wide vocabulary union (not a per-story
    average) by the story count.  Averages that no story in the corpus can
    define (for example rep_4 on a corpus of 3-token stories) are None.
    """

    model: str
    story_count: int
    avg_story_len: float
    avg_sent_len: float
    vocab_size: int
    total_tokens: int
    vocab_per_story: float
    tokens_per_story: float
    ttr_pct: float
    rep: Mapping[int, float | None]
    diversity_pct: float | None
    yules_k_avg: float | None
    entropy_avg: float | None

    def as_row(self) -> dict[str, float | None]:
        """Metric-name -> value mapping using the canonical column names."""
        return {
            "avg_story_length": self.avg_story_len,
            "avg_sentence_length": self.avg_sent_len,
            "vocab_per_story": self.vocab_per_story,
            "tokens_per_story": self.tokens_per_story,
            "ttr": self.ttr_pct,
            "rep_1": self.rep.get(1),
            "rep_2": self.rep.get(2),
            "rep_3": self.rep.get(3),
            "rep_4": self.rep.get(4),
            "diversity": self.diversity_pct,
            "yules_k": self.yules_k_avg,
            "entropy": self.entropy_avg,
        }


def corpus_stats(corpus: "ModelCorpus") -> CorpusLexStats:
    """Aggregate per-story statistics over one model's corpus.

    Per-story metrics (rep_n, K, entropy, lengths) are averaged over the
    stories that define them, in file order with fsum, so results are
    reproducible bit for bit.  Stories too short for an n-gram order are
    skipped for that order only.
    """
    if not corpus.stories:
        raise UndefinedMetricError(f"model {corpus.model!r} has no stories")
    per_story = [story_stats(story) for story in corpus.stories]
    n = len(per_story)

    vocab: set[str] = set()
    for stats in per_story:
        vocab.update(stats.freq)
    total_tokens = sum(stats.token_count for stats in per_story)

    avg_story_len = math.fsum(s.token_count for s in per_story) / n
    avg_sent_len = math.fsum(s.words_per_sentence for s in per_story) / n

    rep_avg: dict[int, float | None] = {}
    for order in REP_ORDERS:
        values = [s.ngram_rep[order] for s in per_story if order in s.ngram_rep]
        rep_avg[order] = math.fsum(values) / len(values) if values else None

    reps_234 = [rep_avg[order] for order in (2, 3, 4)]
    diversity_pct = (
        diversity(*reps_234) if all(v is not None for v in reps_234) else None
    )

    scored = [s for s in per_story if s.token_count > 0]
    yules_avg = (
        math.fsum(yules_k(s) for s in scored) / len(scored) if scored else None
    )
    entropy_avg = (
        math.fsum(shannon_entropy(s) for s in scored) / len(scored)
        if scored else None
    )

    if total_tokens < 1:
        raise UndefinedMetricError(
            f"model {corpus.model!r} has no word tokens"
        )
    return CorpusLexStats(
        model=corpus.model,
        story_count=n,
        avg_story_len=avg_story_len,
        avg_sent_len=avg_sent_len,
        vocab_size=len(vocab),
        total_tokens=total_tokens,
        vocab_per_story=len(vocab) / n,
        tokens_per_story=total_tokens / n,
        ttr_pct=100.0 * len(vocab) / total_tokens,
        rep=rep_avg,
        diversity_pct=diversity_pct,
        yules_k_avg=yules_avg,
        entropy_avg=entropy_avg,
    )
