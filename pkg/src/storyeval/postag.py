"""Deterministic part-of-speech profiling with a five-tag tagset.

The default tagger is a closed lexicon plus ordered suffix rules, with NOUN
as the open-class fallback.  It needs no trained model, gives the same
answer on every run, and is meant for corpus-level percentages rather than
token-perfect annotation.  Any callable mapping a token list to a tag list
can replace it, and the embedded lexicon can be overridden from a
tab-separated word/tag file.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Callable, Mapping, Sequence

from .corpus import ConfigError

if TYPE_CHECKING:
    from .corpus import ModelCorpus


class PosTag(enum.Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    PRON = "PRON"
    ADJ = "ADJ"
    OTHER = "OTHER"


Tagger = Callable[[Sequence[str]], "list[PosTag]"]

_PRONOUNS = """
i me my mine myself we us our ours ourselves you your yours yourself
yourselves he him his himself she her hers herself it its itself they them
their theirs themselves who whom whose this these those everyone everybody
everything someone somebody something anyone anybody anything nobody nothing
none it's that's i'm i've i'll i'd we're we've we'll you're you've you'll
they're they've they'll he's she's he'd she'd he'll she'll
""".split()

_VERBS = """
am is are was were be been being have has had having do does did doing done
will would can could shall should may might must go goes went gone get gets
got gotten make makes made take takes took taken come comes came see sees
saw seen say says said know knows knew known think thinks thought find finds
found give gives gave given tell tells told become became becomes leave
leaves left feel feels felt put puts keep keeps kept let lets begin begins
began begun show shows hear hears heard run runs ran move moves bring brings
brought sit sits sat stand stands stood lose loses lost meet meets met pay
pays paid set sets eat eats ate eaten drink drinks drank buy buys bought
wear wears wore worn win wins won send sends sent build builds built fall
falls fell fallen catch catches caught draw draws drew drawn choose chooses
chose chosen speak speaks spoke spoken spend spends spent teach teaches
taught throw throws threw thrown fly flies flew flown grow grows grew grown
hold holds held ride rides rode ridden sing sings sang sung swim swims swam
swum write writes wrote written read reads sleep sleeps slept wake wakes
woke want wants like likes love loves enjoy enjoys play plays look looks
seem seems try tries decide decides start starts stop stops visit visits
arrive arrives smile smiles laugh laughs watch watches walk walks talk talks
help helps live lives stay stays turn turns open opens wave waves pose poses
gather gathers celebrate celebrates don't didn't doesn't wasn't weren't
isn't aren't couldn't wouldn't shouldn't can't won't haven't hasn't hadn't
let's
""".split()

_ADJECTIVES = """
good better best bad worse worst big bigger biggest small smaller little
great new old young long short tall high low happy sad excited beautiful
pretty nice fun funny favorite amazing wonderful awesome delicious tasty hot
cold warm cool sunny rainy bright dark hard easy ready busy tired proud
special perfect huge tiny full empty clean dirty fresh sweet red blue green
yellow black white orange purple pink brown gray grey fast slow early late
many few several other same different important interesting close own real
whole final last first second third next able glad lovely friendly silly
crazy scary gorgeous cute adorable festive crowded quiet loud colorful
""".split()

_NOUNS = """
day time people family friends friend house home dog cat man woman men
women kid kids child children boy girl group photo picture pictures party
wedding morning evening night year years water food cake beach city town
park car trip vacation game team school work fire camera flowers tree trees
bride groom dinner lunch birthday
""".split()

_CLOSED_OTHER = """
the a an and or but so because if when while before after until since as of
in on at by for with about against between into through during without
within along across behind beyond under over above below up down out off to
from then than too also very really just now here there where why how not
no yes never always often sometimes soon still even again once twice
together around away back well all both each some any much more most less
least every another that one two three four five six seven eight nine ten
there's
""".split()


def _embedded_lexicon() -> dict[str, PosTag]:
    lexicon: dict[str, PosTag] = {}
    for words, tag in (
        (_CLOSED_OTHER, PosTag.OTHER),
        (_NOUNS, PosTag.NOUN),
        (_ADJECTIVES, PosTag.ADJ),
        (_VERBS, PosTag.VERB),
        (_PRONOUNS, PosTag.PRON),
    ):
        for word in words:
            lexicon[word] = tag
    return lexicon


# Suffix rules tried in order after a lexicon miss; first match wins.
_SUFFIX_RULES: tuple[tuple[tuple[str, ...], PosTag], ...] = (
    (("'s", "s'"), PosTag.NOUN),
    (("ly",), PosTag.OTHER),
    (("ing", "ed"), PosTag.VERB),
    (("ize", "ise", "ify"), PosTag.VERB),
    (("ous", "ful", "ive", "able", "ible", "less", "ish", "est", "ic", "al"),
     PosTag.ADJ),
    (("ness", "ment", "tion", "sion", "ity", "ship", "ism"), PosTag.NOUN),
)


@dataclass(frozen=True)
class RuleTagger:
    """Closed-lexicon tagger with suffix fallbacks and a NOUN default."""

    lexicon: Mapping[str, PosTag] = field(default_factory=_embedded_lexicon)

    def tag_token(self, token: str) -> PosTag:
        token = token.lower()
        hit = self.lexicon.get(token)
        if hit is not None:
            return hit
        if any(ch.isdigit() for ch in token):
            return PosTag.OTHER
        for suffixes, tag in _SUFFIX_RULES:
            if token.endswith(suffixes):
                return tag
        return PosTag.NOUN

    def __call__(self, tokens: Sequence[str]) -> list[PosTag]:
        return [self.tag_token(token) for token in tokens]


_DEFAULT_TAGGER = RuleTagger()


def default_tagger() -> RuleTagger:
    return _DEFAULT_TAGGER


def load_lexicon(path: str | Path, merge_embedded: bool = True) -> dict[str, PosTag]:
    """Read a word<TAB>tag lexicon file, one entry per line.

    Tags must be NOUN, VERB, PRON, ADJ or OTHER.  Blank lines and lines
    starting with '#' are skipped.  With ``merge_embedded`` the file entries
    override the built-in lexicon instead of replacing it.
    """
    path = Path(path)
    entries: dict[str, PosTag] = _embedded_lexicon() if merge_embedded else {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ConfigError(
                f"{path.name} line {lineno}: expected 'word<TAB>tag',"
                f" got {line!r}"
            )
        word, tag_name = parts[0].strip().lower(), parts[1].strip().upper()
        try:
            tag = PosTag[tag_name]
        except KeyError:
            raise ConfigError(
                f"{path.name} line {lineno}: unknown tag {parts[1]!r};"
                f" expected one of {[t.name for t in PosTag]}"
            ) from None
        entries[word] = tag
    return entries


def tag(tokens: Sequence[str], tagger: Tagger | None = None) -> list[PosTag]:
    """Tag a token sequence; one tag per token, in order."""
    return (tagger or _DEFAULT_TAGGER)(tokens)


@dataclass(frozen=True)
class PosProfile:
    """Share of NOUN/VERB/PRON/ADJ tokens in a corpus, in percent."""

    model: str
    token_count: int
    pct_noun: float
    pct_verb: float
    pct_pron: float
    pct_adj: float

    def as_row(self) -> dict[str, float]:
        return {
            "pct_nouns": self.pct_noun,
            "pct_verbs": self.pct_verb,
            "pct_pronouns": self.pct_pron,
            "pct_adj": self.pct_adj,
        }


def pos_profile(corpus: "ModelCorpus", tagger: Tagger | None = None) -> PosProfile:
    """Tag every token of every story and report tag shares in percent.

    A corpus with no word tokens, or none of the four tracked classes,
    profiles as all zeros.
    """
    from .textstats import tokenize

    chosen = tagger or _DEFAULT_TAGGER
    counts = {tag_: 0 for tag_ in PosTag}
    total = 0
    for story in corpus.stories:
        tokens = tokenize(story.raw_text)
        total += len(tokens)
        for tag_ in chosen(tokens):
            counts[tag_] += 1
    if total == 0:
        return PosProfile(corpus.model, 0, 0.0, 0.0, 0.0, 0.0)
    return PosProfile(
        model=corpus.model,
        token_count=total,
        pct_noun=100.0 * counts[PosTag.NOUN] / total,
        pct_verb=100.0 * counts[PosTag.VERB] / total,
        pct_pron=100.0 * counts[PosTag.PRON] / total,
        pct_adj=100.0 * counts[PosTag.ADJ] / total,
    )
