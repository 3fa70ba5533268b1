"""Rule-based English to ASL gloss compiler.

Each clause is split into five slots (time, topic, verb, feelings, wh) plus a
``dropped`` list, the slots are concatenated in that order, and the result is
rendered with gloss conventions: UPPERCASE signs, ``fs-`` fingerspelling and
``#`` lexicalized signs.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .lexicon import Lexicon, WordCategory, default_lexicon
from .textnorm import (
    Clause,
    CleanSentence,
    ContractionTable,
    SplitterTable,
    clean_text,
    default_contractions,
    default_splitters,
    split_into_clauses,
)


class Slot(enum.IntEnum):
    TIME = 0
    TOPIC = 1
    VERB = 2
    FEELINGS = 3
    WH = 4


class TokenKind(enum.Enum):
    SIGN = "sign"
    FINGERSPELL = "fingerspell"
    LEXICALIZED = "lexicalized"


@dataclass(frozen=True)
class CategorizedClause:
    time: tuple[str, ...] = ()
    topic: tuple[str, ...] = ()
    verb: tuple[str, ...] = ()
    feelings: tuple[str, ...] = ()
    wh: tuple[str, ...] = ()
    dropped: tuple[str, ...] = ()

    def slots(self) -> Iterator[tuple[Slot, tuple[str, ...]]]:
        yield Slot.TIME, self.time
        yield Slot.TOPIC, self.topic
        yield Slot.VERB, self.verb
        yield Slot.FEELINGS, self.feelings
        yield Slot.WH, self.wh

    def __len__(self):
        return sum(len(group) for _, group in self.slots()) + len(self.dropped)


@dataclass(frozen=True)
class GlossToken:
    surface: str
    kind: TokenKind
    # provenance, kept for invariant checks and reports
    word: str = ""
    slot: Slot | None = None
    clause: int = 0
    mapped_from: str | None = None

    def __str__(self):
        return self.surface


@dataclass(frozen=True)
class GlossSentence:
    tokens: tuple[GlossToken, ...]
    source: CleanSentence = field(default_factory=lambda: CleanSentence(()))

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self):
        return len(self.tokens)

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def text(self, clause_marker: bool = False) -> str:
        if not clause_marker:
            return " ".join(t.surface for t in self.tokens)
        parts: list[str] = []
        prev = None
        for tok in self.tokens:
            if prev is not None and tok.clause != prev:
                parts.append("//")
            parts.append(tok.surface)
            prev = tok.clause
        return " ".join(parts)

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class GlossConfig:
    topicalize_object: bool = False
    clause_marker: bool = False


@dataclass(frozen=True)
class NormTables:
    contractions: ContractionTable
    splitters: SplitterTable

    @classmethod
    def default(cls) -> "NormTables":
        return cls(default_contractions(), default_splitters())


def _route(words: Sequence[str], lex: Lexicon, topicalize_object: bool) -> list[tuple[Slot | None, int]]:
    """(slot, index) for each word in output order; slot ``None`` marks dropped words."""
    cats = [lex.resolve(w)[0] for w in words]
    try:
        first_verb = cats.index(WordCategory.VERB)
    except ValueError:
        first_verb = len(words)
    routed: list[tuple[Slot | None, int]] = []
    moved = None
    for i, cat in enumerate(cats):
        if cat is WordCategory.TEMPORAL:
            slot = Slot.TIME
        elif cat is WordCategory.WH:
            slot = Slot.WH
        elif cat is WordCategory.PRONOUN:
            slot = Slot.TOPIC
        elif cat is WordCategory.FUNCTION:
            slot = None
        elif cat is WordCategory.VERB:
            slot = Slot.VERB
        elif cat is WordCategory.DESCRIPTOR:
            slot = Slot.FEELINGS
        elif cat is WordCategory.NOUN:
            slot = Slot.TOPIC
            if topicalize_object and moved is None and i > first_verb:
                moved = i
        elif i < first_verb:
            slot = Slot.TOPIC
        else:
            slot = None
        routed.append((slot, i))
    # stable by slot; a topicalized object leads its slot
    kept = sorted((r for r in routed if r[0] is not None), key=lambda r: (r[0], r[1] != moved, r[1]))
    return kept + [r for r in routed if r[0] is None]


def extract_categories(
    clause: Clause | Sequence[str],
    lex: Lexicon,
    topicalize_object: bool = False,
) -> CategorizedClause:
    """Route every clause token to exactly one slot or to ``dropped``.

    Pronouns and nouns go to topic. Out-of-vocabulary words before the first
    verb are taken as proper-noun subjects (topic); later ones are dropped.
    """
    words = clause.tokens if isinstance(clause, Clause) else tuple(clause)
    groups: dict[Slot | None, list[str]] = {slot: [] for slot in Slot}
    groups[None] = []
    for slot, i in _route(words, lex, topicalize_object):
        groups[slot].append(words[i])
    return CategorizedClause(*(tuple(groups[s]) for s in Slot), tuple(groups[None]))


def assemble_gloss(cat: CategorizedClause) -> list[str]:
    """time ++ topic ++ verb ++ feelings ++ wh; dropped words are left out."""
    return [w for _, group in cat.slots() for w in group]


def _manual_alphabet(word: str) -> str:
    # fold accents away so every letter exists in the A-Z manual alphabet
    folded = unicodedata.normalize("NFKD", word) if not word.isascii() else word
    return "".join(ch for ch in folded if ch.isascii() and ch.isalnum()).upper()


def format_token(word: str, lex: Lexicon) -> tuple[str, TokenKind] | None:
    """Render one lowercase word as a gloss surface, or None if nothing is signable."""
    form = lex.lexicalized.get(word)
    if form is not None:
        return form, TokenKind.LEXICALIZED
    if word.startswith("#") and len(word) > 1 and word[1:].isascii() and word[1:].isalnum():
        return "#" + word[1:].upper(), TokenKind.LEXICALIZED
    if word.isascii() and word.isdigit():
        return word, TokenKind.SIGN
    cat, base = lex.resolve(word)
    if cat is not WordCategory.UNKNOWN and cat is not WordCategory.FUNCTION:
        form = lex.lexicalized.get(base)
        if form is not None:
            return form, TokenKind.LEXICALIZED
        return base.upper(), TokenKind.SIGN
    chars = _manual_alphabet(word)
    letters = "".join(ch for ch in chars if ch.isalpha())
    if letters:
        return "fs-" + letters, TokenKind.FINGERSPELL
    if chars:
        return chars, TokenKind.SIGN
    return None


def apply_gloss_formatting(
    tokens: Iterable[str],
    lex: Lexicon,
    slots: Sequence[Slot] | None = None,
    clause: int = 0,
) -> GlossSentence:
    words = list(tokens)
    out = []
    for i, w in enumerate(words):
        rendered = format_token(w, lex)
        if rendered is not None:
            out.append(GlossToken(*rendered, w, slots[i] if slots else None, clause))
    return GlossSentence(tuple(out), CleanSentence(tuple(words)))


WordMapper = Callable[[str], "str | None"]


def gloss_sentence(
    raw: str,
    lex: Lexicon | None = None,
    tables: NormTables | None = None,
    config: GlossConfig | None = None,
    mapper: WordMapper | None = None,
) -> GlossSentence:
    """Compile one line of English into a gloss sentence.

    ``mapper``, when given, is asked for a vocabulary replacement for each
    out-of-vocabulary word before slot extraction.
    """
    lex = lex or default_lexicon()
    tables = tables or NormTables.default()
    config = config or GlossConfig()
    clean = clean_text(raw, tables.contractions)
    tokens: list[GlossToken] = []
    for ci, clause in enumerate(split_into_clauses(clean, tables.splitters)):
        words = clause.tokens
        origin: dict[int, str] = {}
        if mapper is not None:
            words, origin = _map_unknown(words, lex, mapper)
        for slot, i in _route(words, lex, config.topicalize_object):
            if slot is None:
                continue
            rendered = format_token(words[i], lex)
            if rendered is not None:
                tokens.append(GlossToken(*rendered, words[i], slot, ci, origin.get(i)))
    return GlossSentence(tuple(tokens), clean)


def _map_unknown(words, lex, mapper):
    out = list(words)
    origin = {}
    for i, w in enumerate(words):
        if lex.resolve(w)[0] is WordCategory.UNKNOWN:
            replacement = mapper(w)
            if replacement and replacement != w:
                out[i] = replacement
                origin[i] = w
    return tuple(out), origin
