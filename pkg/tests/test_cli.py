import json
import subprocess
import sys

import pytest

from signpipe.cli import main
from signpipe.motion import load_timeline
from signpipe.pipeline import PipelineConfig, run_pipeline
from signpipe.errors import ConfigError
from synth import make_store

GLOSSES = ["SCHOOL", "I", "GO", "YESTERDAY", "HOME", "CAR", "E", "M", "A", "#TV"]


@pytest.fixture
def clips(tmp_path):
    return make_store(tmp_path / "clips", GLOSSES)


@pytest.fixture
def embeddings(tmp_path):
    p = tmp_path / "emb.txt"
    p.write_text("4 3\ncar 1 0 0\nautomobile 0.95 0.1 0\nschool 0 1 0\nhome 0 0 1\n",
                 encoding="utf-8")
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gloss_text(capsys):
    code, out, _ = run(capsys, "gloss", "Yesterday", "I", "went", "to", "school.")
    assert code == 0 and out == "YESTERDAY I SCHOOL GO\n"


def test_gloss_file_and_flags(capsys, tmp_path):
    src = tmp_path / "in.txt"
    src.write_text("Yesterday I went to school.\nI ate and she slept.\n")
    code, out, _ = run(capsys, "gloss", "--input", src, "--topicalize-object", "--clause-marker")
    assert out.splitlines() == ["YESTERDAY SCHOOL I GO", "I EAT // SHE SLEEP"]


def test_gloss_json(capsys):
    code, out, _ = run(capsys, "--json", "gloss", "Emma watches TV.")
    row = json.loads(out)[0]
    assert row["gloss"] == "fs-EMMA #TV WATCH"
    assert [t["kind"] for t in row["tokens"]] == ["fingerspell", "lexicalized", "sign"]


def test_map(capsys, embeddings):
    code, out, _ = run(capsys, "map", "--embeddings", embeddings, "automobile", "car", "zorp")
    rows = [line.split("\t") for line in out.splitlines()]
    assert rows[0][:2] == ["automobile", "car"] and rows[0][3] == "Similarity"
    assert rows[1] == ["car", "car", "1.000000", "ExactMatch"]
    assert rows[2][1:] == ["fs-ZORP", "0.000000", "FingerspellFallback"]


def test_animate(capsys, clips, tmp_path):
    out_file = tmp_path / "t.json"
    code, out, _ = run(capsys, "--json", "animate", "--clips", clips, "--out", out_file,
                       "--csv", tmp_path / "t.csv", "YESTERDAY", "I", "SCHOOL", "GO")
    assert code == 0
    info = json.loads(out)
    tl = load_timeline(out_file)
    assert info["frames"] == len(tl)
    assert [s.gloss for s in tl.sign_segments()] == ["YESTERDAY", "I", "SCHOOL", "GO"]
    assert (tmp_path / "t.csv").exists()


def test_animate_partial_and_missing(capsys, clips, tmp_path):
    code, _, _ = run(capsys, "animate", "--clips", clips, "--out", tmp_path / "t.json",
                     "SCHOOL", "WATCH")
    assert code == 2
    code, _, err = run(capsys, "animate", "--clips", clips, "--out", tmp_path / "t.json", "WATCH")
    assert code == 1 and "WATCH" in err


def test_reconstruct(capsys, clips, tmp_path):
    code, out, _ = run(capsys, "--json", "reconstruct", "--clip", clips / "SCHOOL.json",
                       "--stride", "4", "--out", tmp_path / "r.json")
    rep = json.loads(out)
    assert code == 0 and rep["frames"] == 10 and len(rep["per_frame"]) == 10
    assert rep["skipped_mpjpe_cubic"] >= 0
    code, out, _ = run(capsys, "--json", "reconstruct", "--clip", clips / "SCHOOL.json",
                       "--stride", "1")
    assert json.loads(out)["mpjpe"] <= 1e-9


def test_corpus(capsys, tmp_path):
    src = tmp_path / "in.txt"
    src.write_text("Yesterday I went to school.\n\n")
    code, out, _ = run(capsys, "corpus", "--in", src, "--out", tmp_path / "o.tsv")
    stats = json.loads(out)
    assert code == 0 and stats["sentences_in"] == 2 and stats["empty_gloss"] == 1
    code, _, _ = run(capsys, "corpus", "--in", tmp_path / "none", "--out", tmp_path / "o.tsv")
    assert code == 1


def test_eval_bleu(capsys, tmp_path):
    (tmp_path / "c.txt").write_text("the cat sat\n")
    (tmp_path / "r.txt").write_text("the cat was here\n")
    code, out, _ = run(capsys, "eval-bleu", "--candidates", tmp_path / "c.txt",
                       "--references", tmp_path / "r.txt", "--max-n", "2")
    rep = json.loads(out)
    assert code == 0 and rep["per_n_precision"] == [2 / 3, 0.5]
    code, out, _ = run(capsys, "eval-bleu", "--candidates", tmp_path / "c.txt",
                       "--references", tmp_path / "r.txt", "--max-n", "1", "--mode", "individual")
    assert json.loads(out)["per_n_precision"] == [2 / 3]


def test_eval_mpjpe(capsys, clips):
    code, out, _ = run(capsys, "--json", "eval-mpjpe", "--pred", clips / "GO.json",
                       "--truth", clips / "GO.json")
    rep = json.loads(out)
    assert code == 0 and rep["mpjpe"] == 0.0 and len(rep["per_joint"]) == 133
    code, _, _ = run(capsys, "eval-mpjpe", "--pred", clips / "GO.json", "--truth", clips / "nope")
    assert code == 1


def test_config_file(capsys, tmp_path, clips):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(f'clips = "{clips.name}"\nfps = 30\ngap = 0.1\nstride = 2\n'
                   "topicalize_object = true\n")
    code, out, _ = run(capsys, "--config", cfg, "gloss", "Yesterday I went to school.")
    assert out == "YESTERDAY SCHOOL I GO\n"
    code, out, _ = run(capsys, "--config", cfg, "--json", "animate", "--out",
                       tmp_path / "t.json", "GO")
    assert code == 0 and load_timeline(tmp_path / "t.json").fps == 30.0
    bad = tmp_path / "bad.toml"
    bad.write_text("colour = 3\n")
    code, _, err = run(capsys, "--config", bad, "gloss", "hi")
    assert code == 1 and "colour" in err


@pytest.mark.parametrize("values", [
    {"fps": 0.0}, {"gap": -1.0}, {"stride": 0}, {"stride": 1.5}, {"tau": 2.0},
    {"lexicon": "/nonexistent.tsv"}, {"clips": "/nonexistent"},
])
def test_config_validation(values):
    with pytest.raises(ConfigError):
        PipelineConfig.from_mapping(values).validate()


def test_pipeline_report(tmp_path, clips, embeddings):
    config = PipelineConfig(clips=clips, embeddings=embeddings)
    res = run_pipeline(["School.", "I drove my automobile.", "", "Zorp glib."], config,
                       out_dir=tmp_path / "out")
    assert [g.text() for g in res.glosses] == ["SCHOOL", "I MY CAR DRIVE", "", "fs-ZORP fs-GLIB"]
    assert len(res.timelines[0].sign_segments()) == 1
    assert res.timelines[2] is None
    r = res.report
    assert r.similarity_mappings == 1 and r.empty == 1
    assert r.exit_code == 2 and [e["line"] for e in r.errors] == [3]
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["line_0000.json",
                                                                    "line_0001.json"]


def test_pipeline_stage_equivalence(capsys, tmp_path, clips):
    text = tmp_path / "t.txt"
    text.write_text("Yesterday I went to school.\nI go home by car.\n")
    code, out, _ = run(capsys, "pipeline", "--clips", clips, "--input", text,
                       "--out-dir", tmp_path / "p")
    glosses = out.splitlines()
    for k, line in enumerate(text.read_text().splitlines()):
        _, g, _ = run(capsys, "gloss", line)
        assert g.strip() == glosses[k]
        run(capsys, "animate", "--clips", clips, "--stride", "4", "--out",
            tmp_path / f"a{k}.json", *g.split())
        assert (tmp_path / f"a{k}.json").read_bytes() == \
            (tmp_path / "p" / f"line_{k:04d}.json").read_bytes()


def test_pipeline_exit_codes(capsys, tmp_path, clips):
    text = tmp_path / "t.txt"
    text.write_text("School.\n")
    assert run(capsys, "pipeline", "--clips", clips, "--input", text)[0] == 0
    text.write_text("School.\nWatch.\n")
    assert run(capsys, "pipeline", "--clips", clips, "--input", text)[0] == 2
    assert run(capsys, "pipeline", "--clips", tmp_path / "nope", "--input", text)[0] == 1
    assert run(capsys, "pipeline", "--fps", "-1", "--input", text)[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "signpipe", "gloss", "Where do you go?"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "YOU GO WHERE\n"
