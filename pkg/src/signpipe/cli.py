"""Command-line entry point: ``signpipe <subcommand> ...``.

Exit status is 0 when everything succeeded, 2 when some lines or signs
failed, and 1 on a fatal error such as an invalid config or missing input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .corpusgen import build_gloss_corpus
from .errors import ConfigError, NoResolvableSigns, SignpipeError
from .metrics import bleu, mpjpe
from .motion import downsample, linear_interpolate, load_clip, reconstruct, save_timeline
from .motion.timeline import AnimationTimeline, Segment, export_csv, load_frames
from .pipeline import (
    PipelineConfig,
    Resources,
    animate_gloss,
    compile_line,
    read_lines,
    run_pipeline,
    timeline_name,
)
from .wordmap import WordMapper

__all__ = ["PipelineConfig", "build_parser", "main", "run_pipeline"]

EXIT_OK, EXIT_FATAL, EXIT_PARTIAL = 0, 1, 2


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# options that may also come from the config file; None means "not given"
def _add_lexicon(p):
    p.add_argument("--lexicon", help="lexicon TSV (default: bundled table)")


def _add_compiler_flags(p):
    p.add_argument("--topicalize-object", action="store_true", default=None,
                   help="front the first post-verb noun into the topic")
    p.add_argument("--clause-marker", action="store_true", default=None,
                   help="print // between clauses")


def _add_motion(p, clips_required=False):
    p.add_argument("--clips", required=clips_required, help="directory of sign clip files")
    p.add_argument("--fps", type=float, help="output frame rate (default 24)")
    p.add_argument("--gap", type=float, help="transition seconds between signs (default 0.25)")
    p.add_argument("--stride", type=int, help="keep every Nth source frame as a knot (default 4)")


def _add_text_input(p):
    p.add_argument("text", nargs="*", help="text to process (joined into one line)")
    p.add_argument("--stdin", action="store_true", help="read lines from standard input")
    p.add_argument("--input", "--transcript", dest="input",
                   help="read lines from a file (one utterance per line)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signpipe", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="TOML file with PipelineConfig keys")
    parser.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gloss", help="compile English text into ASL gloss")
    _add_lexicon(p)
    _add_compiler_flags(p)
    p.add_argument("--embeddings", help="map out-of-vocabulary words before compiling")
    p.add_argument("--tau", type=float, help="similarity floor for word mapping")
    _add_text_input(p)

    p = sub.add_parser("map", help="map words onto the gloss vocabulary")
    p.add_argument("--embeddings", help="word2vec text file")
    _add_lexicon(p)
    p.add_argument("--tau", type=float, help="similarity floor (default 0.35, -1 disables)")
    p.add_argument("words", nargs="+")

    p = sub.add_parser("animate", help="stitch sign clips for a gloss into one timeline")
    _add_motion(p)
    p.add_argument("--out", default="timeline.json", help="timeline JSON path")
    p.add_argument("--csv", help="also export frame,joint,x,y,z rows here")
    p.add_argument("--no-normalize", action="store_true", help="skip skeleton normalization")
    p.add_argument("gloss", nargs="+", help="gloss surfaces, e.g. YESTERDAY I SCHOOL GO")

    p = sub.add_parser("reconstruct", help="downsample a clip and rebuild it with splines")
    p.add_argument("--clip", required=True)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--fps", type=float, help="output frame rate (default: the clip's)")
    p.add_argument("--out", help="write the reconstruction as a timeline file")

    p = sub.add_parser("corpus", help="build an english<TAB>gloss corpus")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    _add_lexicon(p)
    _add_compiler_flags(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--drop-empty", action="store_true")
    p.add_argument("--max-tokens", type=int)

    p = sub.add_parser("eval-bleu", help="corpus BLEU over line-aligned token files")
    p.add_argument("--candidates", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--max-n", type=int)
    p.add_argument("--mode", choices=("cumulative", "individual"))
    p.add_argument("--smoothing", choices=("none", "add_one"))

    p = sub.add_parser("eval-mpjpe", help="MPJPE between two timeline or clip files")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)

    p = sub.add_parser("pipeline", help="text -> gloss -> animation for every line")
    _add_lexicon(p)
    p.add_argument("--embeddings")
    p.add_argument("--tau", type=float)
    _add_compiler_flags(p)
    _add_motion(p)
    p.add_argument("--out-dir", help="directory for per-line timeline files")
    _add_text_input(p)
    return parser


_CONFIG_KEYS = ("lexicon", "embeddings", "clips", "fps", "gap", "stride", "tau",
                "topicalize_object", "clause_marker", "max_n", "mode", "smoothing")


def _config(args) -> PipelineConfig:
    base = PipelineConfig.from_toml(args.config) if args.config else PipelineConfig()
    given = {}
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            given["bleu_mode" if key == "mode" else key] = value
    if getattr(args, "no_normalize", False):
        given["normalize"] = False
    return PipelineConfig.from_mapping(given, base).validate()


def _input_lines(args) -> list[str]:
    if args.input:
        return read_lines(args.input)
    if args.stdin:
        return sys.stdin.read().splitlines()
    if args.text:
        return [" ".join(args.text)]
    raise ConfigError("no input: give text, --stdin or --input FILE")


def _cmd_gloss(args) -> int:
    config = _config(args)
    res = Resources.load(config)
    rows = []
    for line in _input_lines(args):
        gloss = compile_line(line, config, res)
        if args.json:
            rows.append({
                "text": line,
                "gloss": gloss.text(config.clause_marker),
                "tokens": [{"surface": t.surface, "kind": t.kind.value, "word": t.word,
                            "slot": t.slot.name.lower(), "clause": t.clause,
                            "mapped_from": t.mapped_from} for t in gloss.tokens],
            })
        else:
            print(gloss.text(config.clause_marker))
    if args.json:
        _emit(rows)
    return EXIT_OK


def _cmd_map(args) -> int:
    config = _config(args)
    if config.embeddings is None:
        raise ConfigError("map needs --embeddings (or 'embeddings' in the config file)")
    res = Resources.load(config)
    mapper: WordMapper = res.mapper
    results = [mapper.map(w.lower()) for w in args.words]
    if args.json:
        _emit([{"word": r.source, "gloss": r.gloss, "score": r.score, "method": r.method.value}
               for r in results])
    else:
        for r in results:
            print(r.tsv())
    return EXIT_OK


def _cmd_animate(args) -> int:
    config = _config(args)
    if config.clips is None:
        raise ConfigError("animate needs --clips")
    res = Resources.load(config)
    try:
        timeline = animate_gloss(" ".join(args.gloss), config, res)
    except NoResolvableSigns as exc:
        _note(f"error: {exc}")
        if args.json:
            _emit({"out": None, "missing": exc.missing})
        return EXIT_FATAL
    save_timeline(timeline, args.out)
    if args.csv:
        export_csv(timeline, args.csv)
    summary = {
        "out": str(args.out),
        "frames": len(timeline),
        "segments": [{"gloss": s.gloss, "start": s.start, "end": s.end} for s in timeline.segments],
        "missing": timeline.missing,
    }
    if args.json:
        _emit(summary)
    else:
        print(f"{args.out}: {len(timeline)} frames, {len(timeline.sign_segments())} signs")
        for miss in timeline.missing:
            _note(f"missing sign: {miss}")
    return EXIT_PARTIAL if timeline.missing else EXIT_OK


def _cmd_reconstruct(args) -> int:
    stride = args.stride
    if stride is None:
        stride = PipelineConfig.from_toml(args.config).stride if args.config else 4
    if stride < 1:
        raise ConfigError("stride must be >= 1")
    clip = load_clip(args.clip)
    fps = args.fps or clip.fps
    if fps <= 0:
        raise ConfigError("fps must be > 0")
    kf = downsample(clip, stride)
    frames = reconstruct(kf, fps, clip.duration)
    report = {"clip": str(args.clip), "stride": stride, "fps": fps, "frames": int(frames.shape[0]),
              "keyframes": len(kf)}
    if fps == clip.fps and frames.shape[0] == len(clip):
        # the source clip is ground truth for every output frame
        full = mpjpe(frames, clip.frames)
        skipped = np.setdiff1d(np.arange(len(clip)), kf.indices)
        report["mpjpe"] = full.mpjpe
        report["per_frame"] = full.per_frame.tolist()
        if skipped.size:
            linear = linear_interpolate(kf.times, kf.poses, clip.times[skipped])
            report["skipped_frames"] = int(skipped.size)
            report["skipped_mpjpe_cubic"] = mpjpe(frames[skipped], clip.frames[skipped]).mpjpe
            report["skipped_mpjpe_linear"] = mpjpe(linear, clip.frames[skipped]).mpjpe
    if args.out:
        timeline = AnimationTimeline(fps, frames, [Segment(clip.gloss, 0, frames.shape[0])],
                                     gloss=clip.gloss)
        save_timeline(timeline, args.out)
        report["out"] = str(args.out)
    if args.json:
        _emit(report)
    else:
        print(f"{report['frames']} frames from {report['keyframes']} keyframes")
        if "per_frame" in report:
            for f, err in enumerate(report["per_frame"]):
                print(f"{f}\t{err:.9f}")
            print(f"mpjpe\t{report['mpjpe']:.9f}")
        if "skipped_mpjpe_cubic" in report:
            print(f"skipped cubic\t{report['skipped_mpjpe_cubic']:.9f}")
            print(f"skipped linear\t{report['skipped_mpjpe_linear']:.9f}")
    return EXIT_OK


def _cmd_corpus(args) -> int:
    config = _config(args)
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    if args.max_tokens is not None and args.max_tokens < 0:
        raise ConfigError("--max-tokens must be >= 0")
    res = Resources.load(config)
    stats = build_gloss_corpus(args.input, args.out, res.lexicon, config.gloss_config,
                               jobs=args.jobs, drop_empty=args.drop_empty,
                               max_tokens=args.max_tokens, tables=res.tables)
    _emit(stats.to_json())
    return EXIT_OK


def _token_lines(path) -> list[list[str]]:
    return [line.split() for line in read_lines(path)]


def _cmd_eval_bleu(args) -> int:
    config = _config(args)
    report = bleu(_token_lines(args.candidates), _token_lines(args.references),
                  config.max_n, config.smoothing, config.bleu_mode)
    _emit(report.to_json())
    return EXIT_OK


def _cmd_eval_mpjpe(args) -> int:
    report = mpjpe(load_frames(args.pred), load_frames(args.truth))
    _emit(report.to_json() if args.json else {"mpjpe": report.mpjpe,
                                               "per_frame": report.per_frame.tolist()})
    return EXIT_OK


def _cmd_pipeline(args) -> int:
    config = _config(args)
    lines = _input_lines(args)
    result = run_pipeline(lines, config, out_dir=args.out_dir)
    texts = [g.text(config.clause_marker) for g in result.glosses]
    if args.json:
        out_dir = Path(args.out_dir) if args.out_dir else None
        _emit({
            "glosses": texts,
            "timelines": [str(out_dir / timeline_name(k)) if (t is not None and out_dir) else None
                          for k, t in enumerate(result.timelines)],
            "report": result.report.to_json(),
        })
    else:
        for text in texts:
            print(text)
        r = result.report
        _note(f"{r.lines} lines, {r.ok} ok, {len(r.errors)} errors, {r.empty} empty, "
              f"{r.timelines} timelines, {r.similarity_mappings} mapped, "
              f"{r.missing_signs} missing signs")
        for err in r.errors:
            _note(f"line {err['line']}: {err['error']}")
    return result.report.exit_code


COMMANDS = {
    "gloss": _cmd_gloss,
    "map": _cmd_map,
    "animate": _cmd_animate,
    "reconstruct": _cmd_reconstruct,
    "corpus": _cmd_corpus,
    "eval-bleu": _cmd_eval_bleu,
    "eval-mpjpe": _cmd_eval_mpjpe,
    "pipeline": _cmd_pipeline,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (SignpipeError, OSError) as exc:
        _note(f"error: {exc}")
        return EXIT_FATAL
    except ValueError as exc:
        _note(f"error: {exc}")
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
