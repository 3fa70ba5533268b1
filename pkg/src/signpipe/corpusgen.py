"""Streaming English -> gloss parallel corpus builder."""

from __future__ import annotations

import multiprocessing as mp
from dataclasses import asdict, dataclass
from itertools import islice
from pathlib import Path
from typing import Iterable, Iterator

from .errors import MissingFile, UnwritableOutput
from .glossc import GlossConfig, NormTables, TokenKind, gloss_sentence
from .lexicon import Lexicon, WordCategory, default_lexicon

CHUNK = 2048


@dataclass(frozen=True)
class CorpusStats:
    sentences_in: int
    glosses_out: int
    skipped: int
    empty_gloss: int
    fingerspell_rate: float
    vocab_coverage: float
    tokens_out: int = 0
    content_tokens: int = 0

    def to_json(self) -> dict:
        return asdict(self)


# per-line tally: (written, empty, tokens_out, fingerspelled, content, covered)
_Tally = tuple[int, int, int, int, int, int]


class _Compiler:
    def __init__(self, lex: Lexicon, config: GlossConfig, tables: NormTables,
                 drop_empty: bool, max_tokens: int | None):
        self.lex = lex
        self.config = config
        self.tables = tables
        self.drop_empty = drop_empty
        self.max_tokens = max_tokens

    def line(self, raw: str) -> tuple[str | None, _Tally]:
        raw = raw.rstrip("\r\n")
        gloss = gloss_sentence(raw, self.lex, self.tables, self.config)
        words = gloss.source.tokens
        if self.max_tokens is not None and len(words) > self.max_tokens:
            return None, (0, 0, 0, 0, 0, 0)
        text = gloss.text(self.config.clause_marker)
        if not text and self.drop_empty:
            return None, (0, 0, 0, 0, 0, 0)
        fs = sum(1 for t in gloss.tokens if t.kind is TokenKind.FINGERSPELL)
        content = covered = 0
        for w in words:
            cat = self.lex.resolve(w)[0]
            if cat is WordCategory.FUNCTION:
                continue
            content += 1
            covered += cat is not WordCategory.UNKNOWN
        english = raw.replace("\t", " ")
        return f"{english}\t{text}\n", (1, int(not text), len(gloss.tokens), fs, content, covered)

    def chunk(self, lines: list[str]) -> list[tuple[str | None, _Tally]]:
        return [self.line(s) for s in lines]


_worker: _Compiler | None = None


def _work(lines: list[str]):
    return _worker.chunk(lines)


def _chunks(lines: Iterable[str], size: int) -> Iterator[list[str]]:
    it = iter(lines)
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def iter_gloss_lines(lines: Iterable[str], lex: Lexicon | None = None,
                     config: GlossConfig | None = None, jobs: int = 1,
                     drop_empty: bool = False, max_tokens: int | None = None,
                     tables: NormTables | None = None) -> Iterator[tuple[str | None, _Tally]]:
    """Yield ``(tsv_line or None, tally)`` per input line, in input order."""
    global _worker
    compiler = _Compiler(lex or default_lexicon(), config or GlossConfig(),
                         tables or NormTables.default(), drop_empty, max_tokens)
    blocks = _chunks(lines, CHUNK)
    if jobs <= 1 or "fork" not in mp.get_all_start_methods():
        for block in blocks:
            yield from compiler.chunk(block)
        return
    # forked workers inherit the compiler. Pool.imap would drain the input
    # eagerly, so feed bounded windows of chunks to keep memory flat.
    _worker = compiler
    try:
        with mp.get_context("fork").Pool(jobs) as pool:
            while True:
                window = list(islice(blocks, 4 * jobs))
                if not window:
                    break
                for result in pool.map(_work, window, chunksize=1):
                    yield from result
    finally:
        _worker = None


def build_gloss_corpus(input_path, output_path, lex: Lexicon | None = None,
                       config: GlossConfig | None = None, jobs: int = 1,
                       drop_empty: bool = False, max_tokens: int | None = None,
                       tables: NormTables | None = None) -> CorpusStats:
    """Write ``english<TAB>gloss`` for every input line and return statistics.

    The English column is the raw line with tabs replaced by spaces. Lines
    removed by ``drop_empty`` or ``max_tokens`` count as skipped.
    """
    input_path = Path(input_path)
    if not input_path.is_file():
        raise MissingFile(input_path)
    try:
        out = open(output_path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise UnwritableOutput(output_path, exc.strerror or str(exc)) from None

    n_in = written = empty = toks = fs = content = covered = 0
    with open(input_path, encoding="utf-8", errors="replace", newline=None) as src, out:
        for line, tally in iter_gloss_lines(src, lex, config, jobs, drop_empty, max_tokens, tables):
            n_in += 1
            if line is None:
                continue
            try:
                out.write(line)
            except OSError as exc:
                raise UnwritableOutput(output_path, exc.strerror or str(exc)) from None
            written += tally[0]
            empty += tally[1]
            toks += tally[2]
            fs += tally[3]
            content += tally[4]
            covered += tally[5]
    return CorpusStats(
        sentences_in=n_in,
        glosses_out=written,
        skipped=n_in - written,
        empty_gloss=empty,
        fingerspell_rate=fs / toks if toks else 0.0,
        vocab_coverage=covered / content if content else 0.0,
        tokens_out=toks,
        content_tokens=content,
    )
