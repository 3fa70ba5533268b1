"""Text -> gloss -> word mapping -> animation, one line at a time."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigError, MissingFile, NoResolvableSigns, SignpipeError
from .glossc import GlossConfig, GlossSentence, NormTables, TokenKind, gloss_sentence
from .lexicon import Lexicon, default_lexicon, load_lexicon
from .motion import AnimationTimeline, ClipStore, save_timeline, synthesize
from .wordmap import DEFAULT_TAU, WordMapper, load_embeddings

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib


@dataclass(frozen=True)
class PipelineConfig:
    lexicon: Path | None = None
    embeddings: Path | None = None
    clips: Path | None = None
    fps: float = 24.0
    gap: float = 0.25
    stride: int = 4
    tau: float = DEFAULT_TAU
    topicalize_object: bool = False
    clause_marker: bool = False
    normalize: bool = True
    max_n: int = 2
    bleu_mode: str = "cumulative"
    smoothing: str = "none"

    @property
    def gloss_config(self) -> GlossConfig:
        return GlossConfig(self.topicalize_object, self.clause_marker)

    def validate(self) -> "PipelineConfig":
        for name in ("lexicon", "embeddings"):
            p = getattr(self, name)
            if p is not None and not Path(p).is_file():
                raise ConfigError(f"{name}: no such file: {p}")
        if self.clips is not None and not Path(self.clips).is_dir():
            raise ConfigError(f"clips: no such directory: {self.clips}")
        if not (isinstance(self.fps, (int, float)) and math.isfinite(self.fps) and self.fps > 0):
            raise ConfigError(f"fps must be > 0, got {self.fps!r}")
        if not (isinstance(self.gap, (int, float)) and math.isfinite(self.gap) and self.gap >= 0):
            raise ConfigError(f"gap must be >= 0, got {self.gap!r}")
        if isinstance(self.stride, bool) or not isinstance(self.stride, int) or self.stride < 1:
            raise ConfigError(f"stride must be an integer >= 1, got {self.stride!r}")
        if not -1.0 <= self.tau <= 1.0:
            raise ConfigError(f"tau must lie in [-1, 1], got {self.tau!r}")
        if isinstance(self.max_n, bool) or not isinstance(self.max_n, int) or self.max_n < 1:
            raise ConfigError(f"max_n must be an integer >= 1, got {self.max_n!r}")
        if self.bleu_mode not in ("cumulative", "individual"):
            raise ConfigError(f"bleu_mode must be cumulative or individual, got {self.bleu_mode!r}")
        if self.smoothing not in ("none", "add_one"):
            raise ConfigError(f"smoothing must be none or add_one, got {self.smoothing!r}")
        return self

    @classmethod
    def from_mapping(cls, values: Mapping, base: "PipelineConfig | None" = None) -> "PipelineConfig":
        known = {f.name: f for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - set(known))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        changes = {}
        for key, value in values.items():
            if value is None:
                continue
            if key in ("lexicon", "embeddings", "clips"):
                value = Path(value)
            elif key in ("fps", "gap", "tau") and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            changes[key] = value
        return dataclasses.replace(base or cls(), **changes)

    @classmethod
    def from_toml(cls, path) -> "PipelineConfig":
        path = Path(path)
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config: no such file: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config: {exc}") from None
        # relative paths resolve against the config file's directory
        for key in ("lexicon", "embeddings", "clips"):
            if isinstance(data.get(key), str):
                data[key] = str(path.parent / data[key])
        return cls.from_mapping(data)


@dataclass
class Resources:
    """Everything loaded once from a config and shared by all lines."""

    lexicon: Lexicon
    tables: NormTables
    mapper: WordMapper | None = None
    store: ClipStore | None = None

    @classmethod
    def load(cls, config: PipelineConfig) -> "Resources":
        config.validate()
        try:
            lex = load_lexicon(config.lexicon) if config.lexicon else default_lexicon()
            mapper = None
            if config.embeddings:
                table = load_embeddings(config.embeddings)
                mapper = WordMapper(table, lex.vocabulary, config.tau)
            store = ClipStore.from_dir(config.clips) if config.clips else None
        except (SignpipeError, OSError) as exc:
            raise ConfigError(str(exc)) from exc
        return cls(lex, NormTables.default(), mapper, store)


@dataclass
class RunReport:
    lines: int = 0
    ok: int = 0
    empty: int = 0
    similarity_mappings: int = 0
    fingerspelled: int = 0
    missing_signs: int = 0
    timelines: int = 0
    missing: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 2 if self.errors else 0

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class PipelineResult:
    glosses: list[GlossSentence]
    timelines: list[AnimationTimeline | None]
    report: RunReport


def compile_line(line: str, config: PipelineConfig, res: Resources) -> GlossSentence:
    return gloss_sentence(line, res.lexicon, res.tables, config.gloss_config, res.mapper)


def animate_gloss(gloss, config: PipelineConfig, res: Resources) -> AnimationTimeline:
    return synthesize(gloss, res.store, config.fps, config.gap, config.stride, config.normalize)


def run_pipeline(lines: Iterable[str], config: PipelineConfig, out_dir=None,
                 resources: Resources | None = None) -> PipelineResult:
    """Gloss every line and, when a clip store is configured, animate it.

    Line-level failures go into the report; only a bad config raises.
    Timelines are written to ``out_dir/line_NNNN.json`` when ``out_dir`` is set.
    """
    res = resources or Resources.load(config)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
    report = RunReport()
    glosses: list[GlossSentence] = []
    timelines: list[AnimationTimeline | None] = []
    for k, raw in enumerate(lines):
        raw = raw.rstrip("\r\n")
        report.lines += 1
        try:
            gloss = compile_line(raw, config, res)
        except Exception as exc:  # noqa: BLE001 - isolate the line
            glosses.append(GlossSentence((), None))
            timelines.append(None)
            report.errors.append({"line": k, "error": f"{type(exc).__name__}: {exc}"})
            continue
        glosses.append(gloss)
        report.similarity_mappings += sum(1 for t in gloss.tokens if t.mapped_from is not None)
        report.fingerspelled += sum(1 for t in gloss.tokens if t.kind is TokenKind.FINGERSPELL)
        if not gloss.tokens:
            report.empty += 1
            report.ok += 1
            timelines.append(None)
            continue
        if res.store is None:
            report.ok += 1
            timelines.append(None)
            continue
        try:
            timeline = animate_gloss(gloss, config, res)
        except NoResolvableSigns as exc:
            report.missing_signs += len(exc.missing)
            report.missing.append({"line": k, "signs": exc.missing})
            report.errors.append({"line": k, "error": str(exc)})
            timelines.append(None)
            continue
        except Exception as exc:  # noqa: BLE001
            report.errors.append({"line": k, "error": f"{type(exc).__name__}: {exc}"})
            timelines.append(None)
            continue
        if timeline.missing:
            report.missing_signs += len(timeline.missing)
            report.missing.append({"line": k, "signs": list(timeline.missing)})
        if out_dir is not None:
            try:
                save_timeline(timeline, out_dir / timeline_name(k))
            except OSError as exc:
                report.errors.append({"line": k, "error": f"cannot write timeline: {exc}"})
                timelines.append(None)
                continue
        report.ok += 1
        report.timelines += 1
        timelines.append(timeline)
    return PipelineResult(glosses, timelines, report)


def timeline_name(k: int) -> str:
    return f"line_{k:04d}.json"


def read_lines(path) -> list[str]:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise MissingFile(path) from None
