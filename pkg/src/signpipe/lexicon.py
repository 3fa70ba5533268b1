"""Curated ASL vocabulary and the word-category tables behind gloss compilation."""

from __future__ import annotations

import enum
import logging
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import EmptyLexicon, InvalidLexicon, MalformedLine, MissingFile

log = logging.getLogger(__name__)

MAX_VOCABULARY = 10_000
_MEMO_LIMIT = 200_000
CATEGORIES = ("vocab", "temporal", "wh", "pronoun", "verb", "descriptor", "function", "lexicalized")
_LEXICALIZED_FORM = re.compile(r"#[A-Z0-9]+")


class WordCategory(enum.Enum):
    TEMPORAL = "temporal"
    WH = "wh"
    PRONOUN = "pronoun"
    FUNCTION = "function"
    VERB = "verb"
    DESCRIPTOR = "descriptor"
    NOUN = "noun"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class LoadStats:
    lines: int = 0
    duplicates: int = 0
    # words listed under more than one content category; resolved by classify priority
    overlaps: int = 0


@dataclass(frozen=True, eq=False)
class Lexicon:
    """Immutable vocabulary plus category tables.

    ``vocabulary`` holds every word that renders as a sign, so it includes the
    temporal, WH, pronoun, verb and descriptor words. Function words are never
    in the vocabulary and lexicalized words map to their ``#`` form instead.
    """

    vocabulary: frozenset[str]
    temporal_words: frozenset[str] = frozenset()
    wh_words: frozenset[str] = frozenset()
    pronouns: frozenset[str] = frozenset()
    verbs: frozenset[str] = frozenset()
    descriptors: frozenset[str] = frozenset()
    function_words: frozenset[str] = frozenset()
    lexicalized: Mapping[str, str] = field(default_factory=dict)
    irregular: Mapping[str, str] = field(default_factory=dict, repr=False)
    stats: LoadStats = field(default_factory=LoadStats, repr=False)
    _memo: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        content = self.temporal_words | self.wh_words | self.pronouns | self.verbs | self.descriptors
        object.__setattr__(self, "vocabulary", frozenset(self.vocabulary) | content)
        object.__setattr__(self, "lexicalized", MappingProxyType(dict(self.lexicalized)))
        object.__setattr__(self, "irregular", MappingProxyType(dict(self.irregular)))
        self.validate()

    FIELDS = ("vocabulary", "temporal_words", "wh_words", "pronouns", "verbs",
              "descriptors", "function_words", "lexicalized")

    def __eq__(self, other):
        if not isinstance(other, Lexicon):
            return NotImplemented
        return all(getattr(self, f) == getattr(other, f) for f in self.FIELDS)

    __hash__ = None

    def validate(self) -> None:
        if not self.vocabulary:
            raise EmptyLexicon("lexicon has an empty vocabulary")
        if len(self.vocabulary) > MAX_VOCABULARY:
            raise InvalidLexicon(f"vocabulary of {len(self.vocabulary)} exceeds {MAX_VOCABULARY}")
        clash = self.function_words & (self.vocabulary | set(self.lexicalized))
        if clash:
            raise InvalidLexicon(f"function words also listed as signs: {sorted(clash)[:5]}")
        for word, form in self.lexicalized.items():
            if not _LEXICALIZED_FORM.fullmatch(form):
                raise InvalidLexicon(f"lexicalized form for {word!r} must be '#' + A-Z/0-9, got {form!r}")

    def __contains__(self, word: str) -> bool:
        return word in self.vocabulary

    # -- lookup ---------------------------------------------------------

    def lemma_candidates(self, word: str) -> list[str]:
        """Possible base forms of an inflected word, most specific first."""
        out = []
        irregular = self.irregular.get(word)
        if irregular:
            out.append(irregular)
        n = len(word)
        if n > 3 and word.endswith("ies"):
            out.append(word[:-3] + "y")
        if n > 3 and word.endswith("s") and not word.endswith("ss"):
            out.append(word[:-1])
            if word.endswith("es"):
                out.append(word[:-2])
        if n > 3 and word.endswith("ied"):
            out.append(word[:-3] + "y")
        if n > 3 and word.endswith("ed"):
            out.append(word[:-1])
            out.append(word[:-2])
            if word[-3] == word[-4]:
                out.append(word[:-3])
        if n > 4 and word.endswith("ing"):
            stem = word[:-3]
            out.append(stem)
            out.append(stem + "e")
            if stem[-1] == stem[-2]:
                out.append(stem[:-1])
            if stem.endswith("y"):
                out.append(stem[:-1] + "ie")
        return out

    def resolve(self, word: str) -> tuple[WordCategory, str]:
        """Category and sign base form of ``word`` (memoized).

        Direct table hits win over lemma hits; within each pass the fixed
        priority Temporal > Wh > Pronoun > Function > Verb > Descriptor > Noun
        applies.
        """
        hit = self._memo.get(word)
        if hit is None:
            hit = self._resolve(word)
            if len(self._memo) >= _MEMO_LIMIT:
                self._memo.clear()
            self._memo[word] = hit
        return hit

    def _resolve(self, word: str) -> tuple[WordCategory, str]:
        cat = self._direct(word)
        if cat is not None:
            return cat, word
        if word.isascii() and word.isdigit():
            return WordCategory.NOUN, word
        if word.startswith("#") and word[1:].isascii() and word[1:].isalnum():
            return WordCategory.NOUN, word
        for lemma in self.lemma_candidates(word):
            cat = self._direct(lemma)
            if cat is not None and cat is not WordCategory.FUNCTION:
                return cat, lemma
        return WordCategory.UNKNOWN, word

    def _direct(self, word: str) -> WordCategory | None:
        if word in self.temporal_words:
            return WordCategory.TEMPORAL
        if word in self.wh_words:
            return WordCategory.WH
        if word in self.pronouns:
            return WordCategory.PRONOUN
        if word in self.function_words:
            return WordCategory.FUNCTION
        if word in self.verbs:
            return WordCategory.VERB
        if word in self.descriptors:
            return WordCategory.DESCRIPTOR
        if word in self.vocabulary or word in self.lexicalized:
            return WordCategory.NOUN
        return None

    # -- persistence ----------------------------------------------------

    def to_lines(self) -> list[str]:
        lines = []
        tables = [
            ("temporal", self.temporal_words), ("wh", self.wh_words), ("pronoun", self.pronouns),
            ("verb", self.verbs), ("descriptor", self.descriptors), ("function", self.function_words),
        ]
        content = set()
        for cat, words in tables:
            for w in sorted(words):
                lines.append(f"{w}\t{cat}")
            if cat != "function":
                content |= words
        for w in sorted(self.vocabulary - content):
            lines.append(f"{w}\tvocab")
        for w in sorted(self.lexicalized):
            lines.append(f"{w}\tlexicalized\t{self.lexicalized[w]}")
        return lines

    def save(self, path) -> None:
        Path(path).write_text("".join(line + "\n" for line in self.to_lines()), encoding="utf-8")


def classify(word: str, lex: Lexicon) -> WordCategory:
    """The single category of a clean lowercase token."""
    return lex.resolve(word)[0]


def load_irregular(path=None) -> dict[str, str]:
    if path is None:
        path = resources.files("signpipe") / "data" / "irregular_verbs.tsv"
    elif isinstance(path, (str, os.PathLike)):
        path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(path) from None
    table = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        form, _, lemma = line.partition("\t")
        if lemma.strip():
            table[form.strip()] = lemma.strip()
    return table


def parse_lexicon(lines: Iterable[str], irregular: Mapping[str, str] | None = None) -> Lexicon:
    sets: dict[str, set[str]] = {c: set() for c in CATEGORIES if c != "lexicalized"}
    lexicalized: dict[str, str] = {}
    seen: set[tuple[str, str]] = set()
    duplicates = count = 0
    for number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        count += 1
        parts = line.split("\t")
        if len(parts) not in (2, 3):
            raise MalformedLine(number, line, "expected word<TAB>category[<TAB>canonical]")
        word, cat = parts[0].strip(), parts[1].strip()
        if not word or word != word.lower() or any(ch.isspace() for ch in word):
            raise MalformedLine(number, line, "word must be one lowercase token")
        if cat not in CATEGORIES:
            raise MalformedLine(number, line, f"unknown category {cat!r}")
        if (cat == "lexicalized") != (len(parts) == 3):
            raise MalformedLine(number, line, "a third field is required for lexicalized entries only")
        if (word, cat) in seen:
            duplicates += 1
            continue
        seen.add((word, cat))
        if cat == "lexicalized":
            form = parts[2].strip()
            if not _LEXICALIZED_FORM.fullmatch(form):
                raise MalformedLine(number, line, "canonical form must be '#' + A-Z/0-9")
            lexicalized[word] = form
        else:
            sets[cat].add(word)

    content = ("temporal", "wh", "pronoun", "verb", "descriptor")
    overlaps = sum(
        1 for i, a in enumerate(content) for b in content[i + 1:] for _ in sets[a] & sets[b]
    )
    if duplicates:
        log.warning("lexicon: %d duplicate entries ignored", duplicates)
    if not (sets["vocab"] or any(sets[c] for c in content)):
        raise EmptyLexicon("lexicon file has no vocabulary entries")
    return Lexicon(
        vocabulary=frozenset(sets["vocab"]),
        temporal_words=frozenset(sets["temporal"]),
        wh_words=frozenset(sets["wh"]),
        pronouns=frozenset(sets["pronoun"]),
        verbs=frozenset(sets["verb"]),
        descriptors=frozenset(sets["descriptor"]),
        function_words=frozenset(sets["function"]),
        lexicalized=lexicalized,
        irregular=load_irregular() if irregular is None else irregular,
        stats=LoadStats(lines=count, duplicates=duplicates, overlaps=overlaps),
    )


def load_lexicon(path=None, irregular: Mapping[str, str] | None = None) -> Lexicon:
    """Read a ``word<TAB>category[<TAB>canonical]`` file; ``None`` loads the bundled one."""
    if path is None:
        path = resources.files("signpipe") / "data" / "lexicon.tsv"
    elif isinstance(path, (str, os.PathLike)):
        path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(path) from None
    return parse_lexicon(text.splitlines(), irregular)


_DEFAULT: list[Lexicon] = []


def default_lexicon() -> Lexicon:
    if not _DEFAULT:
        _DEFAULT.append(load_lexicon())
    return _DEFAULT[0]
