"""Acceptance criteria, one test each, at their stated tolerances."""

import hashlib
import json
import random
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from acceptance_log import criterion
from oracles import bleu_bruteforce, mpjpe_loops, one_sided_derivatives
from signpipe.cli import main
from signpipe.corpusgen import build_gloss_corpus
from signpipe.glossc import Slot, extract_categories, gloss_sentence
from signpipe.lexicon import load_lexicon
from signpipe.metrics import bleu, mpjpe
from signpipe.motion import (
    _backend,
    downsample,
    fit_splines,
    linear_interpolate,
    load_timeline,
    reconstruct,
    save_timeline,
    stitch,
)
from signpipe.textnorm import clean_text, split_into_clauses
from signpipe.wordmap import EmbeddingTable, Method, WordMapper, cosine_similarity
from synth import make_store, random_clip, sinusoid_clip, synthetic_sentences

GOLDEN = Path(__file__).parent / "data" / "golden_gloss.tsv"


def test_golden_gloss_suite():
    with criterion("gloss golden suite (30 pairs, exact match, < 1 s)") as info:
        with open(GOLDEN, encoding="utf-8") as fh:
            pairs = [line.rstrip("\n").split("\t") for line in fh]
        assert len(pairs) == 30
        start = time.perf_counter()
        lex = load_lexicon()
        got = [gloss_sentence(en, lex).text() for en, _ in pairs]
        elapsed = time.perf_counter() - start
        wrong = [(en, g, want) for (en, want), g in zip(pairs, got) if g != want]
        assert not wrong, wrong
        assert elapsed < 1.0, f"took {elapsed:.3f}s"
        info["detail"] = f"30/30 exact, {elapsed * 1000:.0f} ms"


def test_partition_property(lex):
    with criterion("clause partition + non-decreasing ranks (10,000 sentences)") as info:
        violations = []
        clauses = 0
        for raw in synthetic_sentences(lex, 10_000, seed=2024):
            for cl in split_into_clauses(clean_text(raw)):
                clauses += 1
                cat = extract_categories(cl, lex)
                parts = [cat.time, cat.topic, cat.verb, cat.feelings, cat.wh, cat.dropped]
                if Counter(w for p in parts for w in p) != Counter(cl.tokens):
                    violations.append((raw, "partition"))
                for p in parts:
                    it = iter(cl.tokens)
                    if not all(w in it for w in p):
                        violations.append((raw, "order"))
            last = {}
            for tok in gloss_sentence(raw, lex).tokens:
                if tok.slot < last.get(tok.clause, Slot.TIME):
                    violations.append((raw, "rank"))
                last[tok.clause] = tok.slot
        assert not violations, violations[:5]
        info["detail"] = f"0 violations over {clauses} clauses"


def _bleu_fixtures():
    rng = random.Random(99)
    vocab = ["I", "YOU", "GO", "SCHOOL", "HOME", "YESTERDAY", "WHERE", "NOT", "LIKE", "#TV"]
    fixtures = [([["the", "cat", "sat"]], [["the", "cat", "was", "here"]], 2, "none", "cumulative")]
    while len(fixtures) < 20:
        pairs = rng.randint(1, 6)
        cands = [[rng.choice(vocab) for _ in range(rng.randint(0, 9))] for _ in range(pairs)]
        refs = [[rng.choice(vocab) for _ in range(rng.randint(1, 9))] for _ in range(pairs)]
        fixtures.append((cands, refs, rng.randint(1, 4), rng.choice(["none", "add_one"]),
                         rng.choice(["cumulative", "individual"])))
    return fixtures


def test_bleu_oracle():
    with criterion("BLEU vs brute-force oracle (20 fixtures, 1e-9)") as info:
        worst = 0.0
        for cands, refs, n, smoothing, mode in _bleu_fixtures():
            got = bleu(cands, refs, n, smoothing, mode).bleu
            worst = max(worst, abs(got - bleu_bruteforce(cands, refs, n, smoothing, mode)))
        assert worst <= 1e-9, worst
        c = [["YESTERDAY", "I", "GO"], ["YOU", "GO", "WHERE"]]
        assert bleu(c, c, max_n=2).bleu == 1.0
        assert bleu([["A", "B"]], [["C", "D"]], max_n=1).bleu == 0.0
        info["detail"] = f"max |diff| {worst:.1e}; identity 1.0; disjoint 0.0"


def test_mpjpe_oracle():
    with criterion("MPJPE vs double loop (50 fixtures, 1e-12) + invariances") as info:
        rng = np.random.default_rng(77)
        worst = worst_t = worst_s = 0.0
        for _ in range(50):
            F = int(rng.integers(1, 11))
            p = rng.normal(size=(F, 133, 3))
            t = p + rng.normal(scale=0.1, size=p.shape)
            m = mpjpe(p, t).mpjpe
            worst = max(worst, abs(m - mpjpe_loops(p, t)))
            v = rng.uniform(-10, 10, size=3)
            worst_t = max(worst_t, abs(mpjpe(p + v, t + v).mpjpe - m))
            alpha = float(rng.uniform(0.1, 10))
            worst_s = max(worst_s, abs(mpjpe(alpha * p, alpha * t).mpjpe - alpha * m))
        assert worst <= 1e-12 and worst_t <= 1e-12 and worst_s <= 1e-12, (worst, worst_t, worst_s)
        info["detail"] = f"oracle {worst:.1e}, translation {worst_t:.1e}, scaling {worst_s:.1e}"


@pytest.mark.parametrize("name", sorted(_backend.available()))
def test_spline_correctness(name, monkeypatch):
    monkeypatch.setattr(_backend, "kernels", _backend.available()[name])
    with criterion(f"spline correctness [{name} kernels]") as info:
        rng = np.random.default_rng(11)
        err = dict(knot=0.0, natural=0.0, c1=0.0, c2=0.0, affine=0.0, deriv=0.0)
        for _ in range(40):
            n = int(rng.integers(2, 40))
            t = np.cumsum(rng.uniform(0.2, 1.0, n))
            y = rng.uniform(-1, 1, size=(n, 3))
            s = fit_splines(t, y)
            a, b, c, d = s.a, s.b, s.c, s.d
            h = np.diff(t)[:, None]
            err["knot"] = max(err["knot"], np.abs(s(t) - y).max())
            end2 = 2 * c[-1] + 6 * d[-1] * h[-1]
            err["natural"] = max(err["natural"], np.abs(2 * c[0]).max(), np.abs(end2).max())
            if n > 2:
                d1 = b[:-1] + 2 * c[:-1] * h[:-1] + 3 * d[:-1] * h[:-1] ** 2
                d2 = 2 * c[:-1] + 6 * d[:-1] * h[:-1]
                err["c1"] = max(err["c1"], np.abs(d1 - b[1:]).max())
                err["c2"] = max(err["c2"], np.abs(d2 - 2 * c[1:]).max())
            line = fit_splines(t, 2.5 * t - 1.0)
            x = np.linspace(t[0], t[-1], 200)
            err["affine"] = max(err["affine"], np.abs(line(x) - (2.5 * x - 1.0)).max())
            xs = rng.uniform(t[0] + 1e-4, t[-1] - 1e-4, 100)
            fd = (s(xs + 1e-5) - s(xs - 1e-5)) / 2e-5
            err["deriv"] = max(err["deriv"], np.abs(s(xs, nu=1) - fd).max())
        limits = dict(knot=1e-9, natural=1e-9, c1=1e-9, c2=1e-9, affine=1e-9, deriv=1e-6)
        bad = {k: v for k, v in err.items() if v > limits[k]}
        assert not bad, bad
        info["detail"] = ", ".join(f"{k} {v:.1e}" for k, v in err.items())


def test_cubic_beats_linear():
    with criterion("cubic < linear MPJPE on skipped frames in >= 95% of clips (< 30 s)") as info:
        start = time.perf_counter()
        rng = np.random.default_rng(2)
        wins, total = 0, 40
        for _ in range(total):
            clip = sinusoid_clip(rng, seconds=2.0, fps=24.0, max_hz=4.0)
            kf = downsample(clip, 4)
            skipped = np.setdiff1d(np.arange(len(clip)), kf.indices)
            cubic = reconstruct(kf, clip.fps, clip.duration)[skipped]
            linear = linear_interpolate(kf.times, kf.poses, clip.times[skipped])
            truth = clip.frames[skipped]
            wins += mpjpe(cubic, truth).mpjpe < mpjpe(linear, truth).mpjpe
        elapsed = time.perf_counter() - start
        rate = wins / total
        assert rate >= 0.95, f"{wins}/{total}"
        assert elapsed < 30.0
        info["detail"] = f"cubic better in {wins}/{total} clips ({rate:.0%})"


def test_stitching_continuity():
    with criterion("stitching: boundary poses 1e-9, derivative jumps <= 1e-4") as info:
        rng = np.random.default_rng(5)
        pos = d1 = d2 = 0.0
        sequences = 0
        for count in (2, 3, 4, 5, 2, 3, 4, 5):
            clips = [random_clip(f"S{i}", rng, frames=int(rng.integers(3, 20)))
                     for i in range(count)]
            gap = float(rng.uniform(0.1, 0.6))
            stride = int(rng.integers(1, 5))
            tl = stitch(clips, 24.0, gap, stride=stride)
            sequences += 1
            offset = 0.0
            for k, clip in enumerate(clips):
                ends = [(offset, clip.frames[0]), (offset + clip.duration, clip.frames[-1])]
                for t, pose in ends:
                    pos = max(pos, np.abs(tl.spline(t).reshape(133, 3) - pose).max())
                    # only the outer ends of the whole timeline are one-sided
                    if (k == 0 and t == offset) or (k == count - 1 and t != offset):
                        continue
                    (l1, r1), (l2, r2) = one_sided_derivatives(tl.spline, t)
                    d1 = max(d1, np.abs(l1 - r1).max())
                    d2 = max(d2, np.abs(l2 - r2).max())
                offset += clip.duration + gap
        assert pos <= 1e-9 and d1 <= 1e-4 and d2 <= 1e-4, (pos, d1, d2)
        info["detail"] = f"{sequences} sequences; pose {pos:.1e}, d1 jump {d1:.1e}, d2 jump {d2:.1e}"


def test_word_mapping_properties():
    with criterion("word mapping: scale invariance, tie-break, cosine symmetry/range") as info:
        rng = np.random.default_rng(8)
        vocab = [f"w{i:02d}" for i in range(30)]
        for _ in range(100):
            dim = int(rng.integers(2, 12))
            vecs = {w: rng.normal(size=dim) for w in vocab}
            q = rng.normal(size=dim)
            alpha = float(10 ** rng.uniform(-3, 3))
            r1 = WordMapper(EmbeddingTable(dim, {**vecs, "query": q}), vocab, -1.0).map("query")
            r2 = WordMapper(EmbeddingTable(dim, {**vecs, "query": alpha * q}), vocab,
                            -1.0).map("query")
            assert r1.gloss == r2.gloss and abs(r1.score - r2.score) <= 1e-12
            for w in vocab[:5]:
                ab = cosine_similarity(q, vecs[w])
                assert abs(ab - cosine_similarity(vecs[w], q)) <= 1e-12
                assert -1 - 1e-12 <= ab <= 1 + 1e-12
        tie = EmbeddingTable(2, {"zebra": np.array([1.0, 0.0]), "apple": np.array([0.0, 1.0]),
                                 "query": np.array([1.0, 1.0])})
        picks = {WordMapper(tie, order, -1.0).map("query").gloss
                 for order in (["zebra", "apple"], ["apple", "zebra"])}
        assert picks == {"apple"}
        assert WordMapper(tie, ["zebra", "apple"]).map("query").method is Method.SIMILARITY
        info["detail"] = "100 scaling fixtures, tie -> 'apple'"


def test_corpus_determinism_and_throughput(tmp_path, lex):
    with criterion("corpus: 100k lines byte-identical, aligned, >= 10,000 sentences/s") as info:
        src = tmp_path / "corpus.txt"
        src.write_text("\n".join(synthetic_sentences(lex, 100_000, seed=31)) + "\n",
                       encoding="utf-8")
        start = time.perf_counter()
        stats = build_gloss_corpus(src, tmp_path / "a.tsv", lex)
        rate = stats.sentences_in / (time.perf_counter() - start)
        build_gloss_corpus(src, tmp_path / "b.tsv", lex)
        a, b = (tmp_path / "a.tsv").read_bytes(), (tmp_path / "b.tsv").read_bytes()
        assert hashlib.sha256(a).digest() == hashlib.sha256(b).digest()
        assert a.count(b"\n") == stats.sentences_in == 100_000
        assert rate >= 10_000, f"{rate:.0f} sentences/s"
        info["detail"] = f"identical, 100000 lines, {rate:,.0f} sentences/s"


def test_end_to_end_smoke(tmp_path, capsys):
    with criterion("end-to-end pipeline smoke + exit codes") as info:
        clips = make_store(tmp_path / "clips", ["YESTERDAY", "I", "SCHOOL", "GO", "YOU", "WHERE",
                                               "HOME", "E", "M", "A"])
        transcript = tmp_path / "talk.txt"
        transcript.write_text("Yesterday I went to school.\nWhere do you go?\nI go home.\n"
                              "Emma.\nThe cat sleeps.\n", encoding="utf-8")
        out_dir = tmp_path / "out"
        code = main(["--json", "pipeline", "--clips", str(clips), "--transcript", str(transcript),
                     "--out-dir", str(out_dir)])
        result = json.loads(capsys.readouterr().out)
        assert len(result["glosses"]) == 5
        paths = [p for p in result["timelines"] if p]
        assert paths
        for p in paths:
            tl = load_timeline(p)
            save_timeline(tl, tmp_path / "again.json")
            assert Path(p).read_bytes() == (tmp_path / "again.json").read_bytes()
            assert load_timeline(tmp_path / "again.json").frames.tobytes() == tl.frames.tobytes()
        assert code == 2  # "The cat sleeps." has no clips
        transcript.write_text("Yesterday I went to school.\n", encoding="utf-8")
        clean = main(["pipeline", "--clips", str(clips), "--transcript", str(transcript)])
        fatal = main(["pipeline", "--clips", str(tmp_path / "missing"), "--transcript",
                      str(transcript)])
        capsys.readouterr()
        assert (clean, fatal) == (0, 1)
        info["detail"] = f"5 glosses, {len(paths)} timelines round-trip; exit codes 0/2/1"
