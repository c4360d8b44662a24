"""Unit tests for the rule-based part-of-speech tagger and corpus profiles."""
from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from storyeval.corpus import ConfigError, ModelCorpus, Story
from storyeval.postag import (
    PosProfile,
    PosTag,
    RuleTagger,
    default_tagger,
    load_lexicon,
    pos_profile,
    tag,
)


class TestRuleTagger:
    def test_basic_sentence(self):
        assert tag(["she", "runs", "fast"]) == [PosTag.PRON, PosTag.VERB, PosTag.ADJ]

    def test_lexicon_words(self):
        tagger = default_tagger()
        assert tagger.tag_token("dog") is PosTag.NOUN
        assert tagger.tag_token("they") is PosTag.PRON
        assert tagger.tag_token("went") is PosTag.VERB
        assert tagger.tag_token("happy") is PosTag.ADJ
        assert tagger.tag_token("the") is PosTag.OTHER

    def test_unknown_word_defaults_to_noun(self):
        assert default_tagger().tag_token("zorblat") is PosTag.NOUN

    def test_uppercase_input_is_normalized(self):
        assert default_tagger().tag_token("She") is PosTag.PRON

    def test_digit_tokens_are_other(self):
        tagger = default_tagger()
        assert tagger.tag_token("42") is PosTag.OTHER
        assert tagger.tag_token("3rd") is PosTag.OTHER

    def test_possessive_is_noun(self):
        assert default_tagger().tag_token("farmer's") is PosTag.NOUN

    def test_suffix_rules(self):
        tagger = default_tagger()
        assert tagger.tag_token("quickly") is PosTag.OTHER
        assert tagger.tag_token("jumped") is PosTag.VERB
        assert tagger.tag_token("glowing") is PosTag.VERB
        assert tagger.tag_token("memorize") is PosTag.VERB
        assert tagger.tag_token("joyous") is PosTag.ADJ
        assert tagger.tag_token("hopeful") is PosTag.ADJ
        assert tagger.tag_token("washable") is PosTag.ADJ
        assert tagger.tag_token("brightest") is PosTag.ADJ
        assert tagger.tag_token("darkness") is PosTag.NOUN
        assert tagger.tag_token("payment") is PosTag.NOUN
        assert tagger.tag_token("celebration") is PosTag.NOUN

    def test_lexicon_beats_suffix_rules(self):
        # "lovely" ends in -ly but the embedded lexicon marks it ADJ
        assert default_tagger().tag_token("lovely") is PosTag.ADJ

    @given(st.lists(st.text(alphabet="abcdefgh'", min_size=1, max_size=10)))
    def test_output_length_matches_input(self, tokens):
        assert len(tag(tokens)) == len(tokens)

    def test_callable_protocol(self):
        tagger = default_tagger()
        assert tagger(["dog"]) == [PosTag.NOUN]


class TestLoadLexicon:
    def test_override_wins_over_embedded(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("dog\tVERB\n", encoding="utf-8")
        tagger = RuleTagger(lexicon=load_lexicon(path))
        assert tagger.tag_token("dog") is PosTag.VERB
        assert tagger.tag_token("cat") is PosTag.NOUN  # embedded entries kept

    def test_without_embedded_merge(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("she\tNOUN\n", encoding="utf-8")
        tagger = RuleTagger(lexicon=load_lexicon(path, merge_embedded=False))
        assert tagger.tag_token("she") is PosTag.NOUN
        # embedded entry gone, suffix default applies
        assert tagger.tag_token("the") is PosTag.NOUN

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("# comment\n\nrock\tVERB\n", encoding="utf-8")
        assert load_lexicon(path)["rock"] is PosTag.VERB

    def test_unknown_tag_raises(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("dog\tGERUND\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_lexicon(path)

    def test_malformed_line_raises(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("just-one-field\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_lexicon(path)


def corpus_from_text(*sentence_lists: list[str]) -> ModelCorpus:
    stories = tuple(
        Story.build(f"s{i}", "m", sentences)
        for i, sentences in enumerate(sentence_lists)
    )
    return ModelCorpus(model="m", stories=stories)


class TestPosProfile:
    def test_share_of_each_class(self):
        profile = pos_profile(corpus_from_text(["The dog ran."]))
        assert profile.token_count == 3
        assert profile.pct_noun == pytest.approx(100 / 3)
        assert profile.pct_verb == pytest.approx(100 / 3)
        assert profile.pct_pron == 0.0
        assert profile.pct_adj == 0.0

    def test_percentages_sum_within_hundred(self):
        profile = pos_profile(corpus_from_text(["She quickly found a happy dog."]))
        total = profile.pct_noun + profile.pct_verb + profile.pct_pron + profile.pct_adj
        assert 0.0 < total <= 100.0 + 1e-9

    def test_all_function_words(self):
        profile = pos_profile(corpus_from_text(["The of and."]))
        assert (profile.pct_noun, profile.pct_verb, profile.pct_pron, profile.pct_adj) == (
            0.0, 0.0, 0.0, 0.0,
        )

    def test_zero_token_corpus_reports_zeros(self):
        profile = pos_profile(corpus_from_text(["?!"]))
        assert profile.token_count == 0
        assert profile.pct_noun == 0.0

    def test_story_order_does_not_matter(self):
        a = ["She ran home."]
        b = ["The bright kite flew."]
        forward = pos_profile(corpus_from_text(a, b))
        backward = pos_profile(corpus_from_text(b, a))
        assert forward == backward

    def test_custom_tagger_is_used(self):
        def all_adj(tokens):
            return [PosTag.ADJ] * len(tokens)

        profile = pos_profile(corpus_from_text(["The dog ran."]), tagger=all_adj)
        assert profile.pct_adj == 100.0
        assert profile.pct_noun == 0.0

    def test_as_row_uses_canonical_names(self):
        row = pos_profile(corpus_from_text(["The dog ran."])).as_row()
        assert set(row) == {"pct_nouns", "pct_verbs", "pct_pronouns", "pct_adj"}

    def test_profile_type_and_model(self):
        profile = pos_profile(corpus_from_text(["A dog."]))
        assert isinstance(profile, PosProfile)
        assert profile.model == "m"
