"""Corpus BLEU for gloss output and MPJPE for joint positions."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyCorpus, LengthMismatch, ShapeMismatch

SMOOTHING = ("none", "add_one")
MODES = ("cumulative", "individual")


@dataclass(frozen=True)
class BleuReport:
    bleu: float
    per_n_precision: list  # None for orders with no n-grams anywhere in the corpus
    brevity_penalty: float
    candidate_length: int
    reference_length: int

    def to_json(self) -> dict:
        return asdict(self)


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _as_reference_set(ref) -> list[list[str]]:
    # a reference is either one token list or a list of alternative token lists
    if ref and isinstance(ref[0], (list, tuple)):
        return [list(r) for r in ref]
    return [list(ref)]


def _closest_length(c: int, refs: list[list[str]]) -> int:
    return min((abs(len(r) - c), len(r)) for r in refs)[1]


def bleu(candidates: Sequence[Sequence[str]], references: Sequence, max_n: int = 4,
         smoothing: str = "none", mode: str = "cumulative") -> BleuReport:
    """Corpus-level BLEU with clipped n-gram counts and a brevity penalty.

    ``mode="cumulative"`` takes the geometric mean of orders 1..max_n;
    ``mode="individual"`` scores order ``max_n`` alone. Orders for which the
    candidates contain no n-grams at all are left out of the mean.
    """
    if len(candidates) != len(references):
        raise LengthMismatch(f"{len(candidates)} candidates vs {len(references)} references")
    if not candidates:
        raise EmptyCorpus("BLEU needs at least one sentence pair")
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if smoothing not in SMOOTHING:
        raise ValueError(f"smoothing must be one of {SMOOTHING}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")

    matches = [0] * max_n
    totals = [0] * max_n
    c_len = r_len = 0
    for cand, ref in zip(candidates, references):
        cand = list(cand)
        refs = _as_reference_set(ref)
        c_len += len(cand)
        r_len += _closest_length(len(cand), refs)
        for n in range(1, max_n + 1):
            counts = ngrams(cand, n)
            if not counts:
                continue
            ceiling: Counter = Counter()
            for r in refs:
                ceiling |= ngrams(r, n)
            matches[n - 1] += sum(min(k, ceiling[g]) for g, k in counts.items())
            totals[n - 1] += sum(counts.values())

    precisions: list = []
    for m, t in zip(matches, totals):
        if t == 0:
            precisions.append(None)
        elif smoothing == "add_one":
            precisions.append((m + 1) / (t + 1))
        else:
            precisions.append(m / t)

    if c_len == 0:
        bp = 0.0
    elif c_len < r_len:
        bp = math.exp(1.0 - r_len / c_len)
    else:
        bp = 1.0

    used = precisions if mode == "cumulative" else precisions[-1:]
    used = [p for p in used if p is not None]
    if not used or any(p == 0 for p in used):
        score = 0.0
    else:
        score = bp * math.exp(sum(math.log(p) for p in used) / len(used))
    return BleuReport(score, precisions, bp, c_len, r_len)


@dataclass(frozen=True, eq=False)
class MpjpeReport:
    mpjpe: float
    per_joint: np.ndarray
    per_frame: np.ndarray

    def to_json(self) -> dict:
        return {
            "mpjpe": self.mpjpe,
            "per_joint": self.per_joint.tolist(),
            "per_frame": self.per_frame.tolist(),
        }


def joint_errors(predicted, truth) -> np.ndarray:
    """(F, J) matrix of Euclidean distances between corresponding joints."""
    p = np.asarray(predicted, dtype=np.float64)
    t = np.asarray(truth, dtype=np.float64)
    if p.ndim == 2:
        p = p[None]
    if t.ndim == 2:
        t = t[None]
    if p.shape != t.shape:
        raise ShapeMismatch(f"predicted {p.shape} vs truth {t.shape}")
    if p.ndim != 3 or p.shape[2] != 3 or p.shape[0] < 1 or p.shape[1] < 1:
        raise ShapeMismatch(f"expected (frames, joints, 3) with frames, joints >= 1, got {p.shape}")
    return np.sqrt(np.sum((p - t) ** 2, axis=2))


def mpjpe(predicted, truth) -> MpjpeReport:
    d = joint_errors(predicted, truth)
    return MpjpeReport(float(d.mean()), d.mean(axis=0), d.mean(axis=1))
