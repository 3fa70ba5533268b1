"""English text cleaning and rule-based clause splitting.

The cleaner lowercases, expands contractions from a table, drops possessive
``'s``, and strips punctuation. Clause-break punctuation (``, ; :`` and dashes)
is remembered as token positions before it is stripped, so the splitter can use
it afterwards.
"""

from __future__ import annotations

import os
import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import MissingFile

#: Subordinators kept as the first token of their clause; other splitters are dropped.
RETAINED_SUBORDINATORS = frozenset({"if", "when"})
#: Inside a clause opened by a retained subordinator, one of these at offset >= 2
#: starts the main clause ("when she arrived we left"). Not applied to questions.
SUBJECT_PRONOUNS = frozenset({"i", "he", "she", "we", "they"})

_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'", "′": "'", "`": "'"})
_BREAK_MARK = "\x00"
_BREAKS = re.compile(r"[,;:–—―]|-{2,}")
_POSSESSIVE = re.compile(r"(?<=\w)'s\b")
# every ASCII punctuation character except '-' and '#' (and the break mark) becomes a space
_ASCII_STRIP = str.maketrans({c: " " for c in "!\"$%&'()*+,./:;<=>?@[\\]^_`{|}~"})


@dataclass(frozen=True)
class CleanSentence:
    tokens: tuple[str, ...]
    # indices i such that clause-break punctuation stood right before tokens[i]
    breaks: frozenset[int] = field(default_factory=frozenset)
    question: bool = False

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self):
        return len(self.tokens)

    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class Clause:
    tokens: tuple[str, ...]
    source_span: tuple[int, int]

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self):
        return len(self.tokens)


class ContractionTable:
    """Whole-token contraction expansions, compiled into one regex."""

    def __init__(self, entries: Mapping[str, str]):
        self.entries = {k.lower().translate(_APOSTROPHES): v.lower() for k, v in entries.items()}
        self._bare = any("'" not in k for k in self.entries)
        if self.entries:
            alternation = "|".join(re.escape(k) for k in sorted(self.entries, key=len, reverse=True))
            self._pattern = re.compile(rf"(?<![\w'])(?:{alternation})(?![\w'])")
        else:
            self._pattern = None

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self):
        return len(self.entries)

    def expand(self, text: str) -> str:
        # entries such as "gonna" carry no apostrophe, so they always need the regex pass
        if self._pattern is None or ("'" not in text and not self._bare):
            return text
        return self._pattern.sub(lambda m: self.entries[m.group(0)], text)

    @classmethod
    def load(cls, path) -> "ContractionTable":
        entries = {}
        for _, line in _table_lines(path):
            key, sep, value = line.partition("\t")
            if not sep or not key.strip() or not value.strip():
                continue
            entries[key.strip()] = value.strip()
        return cls(entries)

    @classmethod
    def default(cls) -> "ContractionTable":
        return cls.load(_data_path("contractions.tsv"))


class SplitterTable(frozenset):
    """Set of clause-boundary words."""

    @classmethod
    def load(cls, path) -> "SplitterTable":
        return cls(line.strip().lower() for _, line in _table_lines(path) if line.strip())

    @classmethod
    def default(cls) -> "SplitterTable":
        return cls.load(_data_path("splitters.txt"))


def _data_path(name: str):
    return resources.files("signpipe") / "data" / name


def _table_lines(path):
    if isinstance(path, (str, os.PathLike)):
        path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(path) from None
    for number, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#") or not line.strip():
            continue
        yield number, line.rstrip("\r\n")


def _keep_unicode(ch: str) -> str:
    if ch.isalnum() or ch in "-#" or ch.isspace() or ch == _BREAK_MARK:
        return ch
    if unicodedata.category(ch)[0] == "M":
        return ch
    return " "


def clean_text(raw: str, contractions: ContractionTable | None = None) -> CleanSentence:
    """Normalize one line of English into lowercase word tokens.

    Contractions are expanded before any punctuation is stripped. Clause-break
    punctuation positions are kept on the result for :func:`split_into_clauses`.
    """
    if contractions is None:
        contractions = default_contractions()
    if not raw:
        return CleanSentence(())
    text = raw if raw.isascii() else unicodedata.normalize("NFC", raw)
    text = text.translate(_APOSTROPHES).lower()
    if not text.isascii():
        text = unicodedata.normalize("NFC", text)
    text = contractions.expand(text)
    if "'" in text:
        text = _POSSESSIVE.sub("", text).replace("'", "")
    text = _BREAKS.sub(f" {_BREAK_MARK} ", text)
    text = text.translate(_ASCII_STRIP)
    if not text.isascii():
        text = "".join(_keep_unicode(ch) for ch in text)

    tokens: list[str] = []
    breaks: set[int] = set()
    for piece in text.split():
        if piece == _BREAK_MARK:
            if tokens:
                breaks.add(len(tokens))
            continue
        piece = piece.strip("-")
        if not piece or not any(ch.isalnum() for ch in piece):
            continue
        tokens.append(piece)
    breaks.discard(len(tokens))
    question = raw.rstrip().rstrip("\"'”’)").endswith("?")
    return CleanSentence(tuple(tokens), frozenset(breaks), question)


def split_into_clauses(
    sentence: CleanSentence | Sequence[str],
    splitters: Iterable[str] | None = None,
) -> list[Clause]:
    """Split a cleaned sentence at splitter words and break punctuation.

    Coordinators are removed; ``if``/``when`` open the clause they introduce.
    The returned clauses plus the removed words are exactly the input tokens.
    """
    if splitters is None:
        splitters = default_splitters()
    elif not isinstance(splitters, frozenset):
        splitters = frozenset(splitters)
    if isinstance(sentence, CleanSentence):
        tokens, breaks, question = sentence.tokens, sentence.breaks, sentence.question
    else:
        tokens, breaks, question = tuple(sentence), frozenset(), False
    if not tokens:
        return []

    clauses: list[Clause] = []
    start = None
    subordinate = False

    def close(end: int):
        nonlocal start, subordinate
        if start is not None and end > start:
            clauses.append(Clause(tokens[start:end], (start, end)))
        start = None
        subordinate = False

    for i, tok in enumerate(tokens):
        if i in breaks:
            close(i)
        if tok in splitters:
            close(i)
            if tok in RETAINED_SUBORDINATORS:
                start = i
                subordinate = True
            continue
        if subordinate and not question and tok in SUBJECT_PRONOUNS and i - start >= 2:
            close(i)
        if start is None:
            start = i
    close(len(tokens))
    if not clauses:
        # a sentence made only of splitter words
        clauses.append(Clause((), (len(tokens), len(tokens))))
    return clauses


def removed_tokens(sentence: Sequence[str], clauses: Sequence[Clause]) -> list[str]:
    """Tokens of ``sentence`` not covered by any clause span."""
    covered = [False] * len(sentence)
    for clause in clauses:
        for i in range(*clause.source_span):
            covered[i] = True
    return [tok for tok, hit in zip(sentence, covered) if not hit]


_DEFAULTS: dict[str, object] = {}


def default_contractions() -> ContractionTable:
    table = _DEFAULTS.get("contractions")
    if table is None:
        table = _DEFAULTS["contractions"] = ContractionTable.default()
    return table


def default_splitters() -> SplitterTable:
    table = _DEFAULTS.get("splitters")
    if table is None:
        table = _DEFAULTS["splitters"] = SplitterTable.default()
    return table
