"""Nearest-gloss word mapping over static word vectors."""

from __future__ import annotations

import enum
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

import numpy as np

from .errors import LengthMismatch, MalformedHeader, MissingFile, ZeroVector

log = logging.getLogger(__name__)

DEFAULT_TAU = 0.35
#: Disables the similarity floor (always take the argmax).
NO_FLOOR_TAU = -1.0
_TIE_EPS = 1e-12


class VectorProvider(Protocol):
    """Anything that can hand out a vector for a word."""

    def vector(self, word: str) -> np.ndarray | None: ...


@dataclass(frozen=True)
class EmbeddingStats:
    rows: int = 0
    dimension_mismatch: int = 0
    zero_vectors: int = 0
    malformed: int = 0
    filtered: int = 0
    mismatch_lines: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]
    stats: EmbeddingStats = field(default_factory=EmbeddingStats)

    def __post_init__(self):
        if self.dimension <= 0:
            raise ValueError("dimension must be positive")
        for word, vec in self.vectors.items():
            if vec.shape != (self.dimension,):
                raise LengthMismatch(f"vector for {word!r} has shape {vec.shape}")

    def __len__(self):
        return len(self.vectors)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def vector(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word)


def load_embeddings(
    path,
    vocab_filter: Iterable[str] | None = None,
    query_words: Iterable[str] = (),
) -> EmbeddingTable:
    """Read a word2vec text file (``count dim`` header, then ``word v1 .. vd``).

    Rows with the wrong length, unparsable numbers, or an all-zero vector are
    skipped and counted in ``stats``. With ``vocab_filter`` only those words
    plus ``query_words`` are kept.
    """
    path = Path(path) if isinstance(path, (str, os.PathLike)) else path
    keep = None
    if vocab_filter is not None:
        keep = set(vocab_filter) | set(query_words)
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(path) from None
    with fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise MalformedHeader(f"expected 'count dimension', got {' '.join(header)!r}")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise MalformedHeader(f"non-integer header {' '.join(header)!r}") from None
        if count < 0 or dim <= 0:
            raise MalformedHeader(f"bad header values {count} {dim}")

        vectors: dict[str, np.ndarray] = {}
        rows = mismatch = zeros = malformed = filtered = 0
        mismatch_lines = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            rows += 1
            word = parts[0].lower()
            if len(parts) - 1 != dim:
                mismatch += 1
                mismatch_lines.append(lineno)
                continue
            if keep is not None and word not in keep:
                filtered += 1
                continue
            try:
                vec = np.array(parts[1:], dtype=np.float64)
            except ValueError:
                malformed += 1
                continue
            if not np.all(np.isfinite(vec)):
                malformed += 1
                continue
            if not np.any(vec):
                zeros += 1
                continue
            vectors.setdefault(word, vec)
    stats = EmbeddingStats(rows, mismatch, zeros, malformed, filtered, tuple(mismatch_lines))
    if mismatch or zeros or malformed:
        log.warning("embeddings: skipped %d mismatched, %d zero, %d malformed rows",
                    mismatch, zeros, malformed)
    return EmbeddingTable(dim, vectors, stats)


def cosine_similarity(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"vectors of length {a.shape} and {b.shape}")
    na = math.sqrt(float(np.dot(a, a)))
    nb = math.sqrt(float(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    # each vector is normalized first so the product is symmetric in a and b
    return max(-1.0, min(1.0, float(np.dot(a / na, b / nb))))


class Method(enum.Enum):
    EXACT_MATCH = "ExactMatch"
    SIMILARITY = "Similarity"
    FINGERSPELL_FALLBACK = "FingerspellFallback"


@dataclass(frozen=True)
class MappingResult:
    source: str
    gloss: str
    score: float
    method: Method

    def tsv(self) -> str:
        return f"{self.source}\t{self.gloss}\t{self.score:.6f}\t{self.method.value}"


class WordMapper:
    """Maps words to the most similar vocabulary word.

    Vocabulary vectors are normalized once here; ties within 1e-12 go to the
    lexicographically smallest word.
    """

    def __init__(self, table: VectorProvider, vocabulary: Iterable[str], tau: float = DEFAULT_TAU):
        self.table = table
        self.vocabulary = frozenset(vocabulary)
        if not self.vocabulary:
            raise ValueError("vocabulary must be nonempty")
        self.tau = tau
        words, rows = [], []
        for word in sorted(self.vocabulary):
            vec = table.vector(word)
            if vec is not None:
                words.append(word)
                rows.append(vec / np.linalg.norm(vec))
        self._words = words
        self._matrix = np.vstack(rows) if rows else None

    def map(self, token: str) -> MappingResult:
        if token in self.vocabulary:
            return MappingResult(token, token, 1.0, Method.EXACT_MATCH)
        fallback = "fs-" + token.upper()
        query = self.table.vector(token)
        if query is None or self._matrix is None:
            return MappingResult(token, fallback, 0.0, Method.FINGERSPELL_FALLBACK)
        norm = np.linalg.norm(query)
        if norm == 0.0:
            return MappingResult(token, fallback, 0.0, Method.FINGERSPELL_FALLBACK)
        scores = self._matrix @ (query / norm)
        best = float(scores.max())
        # first index within the tie band is the smallest word (rows are sorted)
        idx = int(np.flatnonzero(scores >= best - _TIE_EPS)[0])
        gloss = self._words[idx]
        score = cosine_similarity(query, self.table.vector(gloss))
        if score < self.tau:
            return MappingResult(token, fallback, score, Method.FINGERSPELL_FALLBACK)
        return MappingResult(token, gloss, score, Method.SIMILARITY)

    def __call__(self, token: str) -> str | None:
        """Replacement word for the gloss compiler, or ``None`` to keep fingerspelling."""
        result = self.map(token)
        return result.gloss if result.method is Method.SIMILARITY else None


def map_to_gloss_vocab(
    token: str,
    table: VectorProvider,
    vocab: Iterable[str],
    tau: float = DEFAULT_TAU,
) -> MappingResult:
    return WordMapper(table, vocab, tau).map(token)
