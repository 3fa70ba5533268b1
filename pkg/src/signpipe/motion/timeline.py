"""Dense reconstruction, multi-clip stitching and gloss-to-animation synthesis."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import (
    EmptyClipList,
    MalformedClip,
    NoResolvableSigns,
)
from .clip import (
    Keyframes,
    SignClip,
    _read_json,
    _reorder_to_canonical,
    as_keyframes,
    check_frames,
    downsample,
    dump_json,
    iter_clip_files,
    load_clip,
    normalize_skeleton,
)
from .layout import CANONICAL_LAYOUT, NUM_JOINTS
from .spline import CubicSpline, fit_splines

TRANSITION = "⟨transition⟩"
DEFAULT_FPS = 24.0
DEFAULT_GAP = 0.25

# slack when deciding which output frames fall inside [0, t_end]
_TIME_EPS = 1e-9


@dataclass(frozen=True)
class Segment:
    gloss: str
    start: int
    end: int

    @property
    def is_transition(self) -> bool:
        return self.gloss == TRANSITION

    def __len__(self):
        return self.end - self.start


@dataclass(eq=False)
class AnimationTimeline:
    fps: float
    frames: np.ndarray
    segments: list[Segment]
    layout: tuple[str, ...] = CANONICAL_LAYOUT
    gloss: str = ""
    spline: CubicSpline | None = field(default=None, repr=False)
    missing: list[str] = field(default_factory=list)

    def __len__(self):
        return self.frames.shape[0]

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) / self.fps

    def sign_segments(self) -> list[Segment]:
        return [s for s in self.segments if not s.is_transition]

    def to_json(self) -> dict:
        return {
            "gloss": self.gloss,
            "fps": self.fps,
            "layout": list(self.layout),
            "frames": self.frames.tolist(),
            "segments": [{"gloss": s.gloss, "start": s.start, "end": s.end} for s in self.segments],
        }

    def __eq__(self, other):
        if not isinstance(other, AnimationTimeline):
            return NotImplemented
        return (self.fps == other.fps and self.gloss == other.gloss
                and self.layout == other.layout and self.segments == other.segments
                and np.array_equal(self.frames, other.frames))

    __hash__ = None


def save_timeline(timeline: AnimationTimeline, path) -> None:
    Path(path).write_text(dump_json(timeline.to_json()), encoding="utf-8")


def load_timeline(path) -> AnimationTimeline:
    payload = _read_json(path)
    try:
        fps = float(payload["fps"])
        frames = payload["frames"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedClip(f"bad timeline file: {exc}") from None
    frames = _reorder_to_canonical(payload.get("layout", CANONICAL_LAYOUT), frames)
    try:
        arr = np.array(frames, dtype=np.float64)
    except (ValueError, TypeError):
        raise MalformedClip("every joint must be an [x, y, z] triple of numbers") from None
    arr = check_frames(arr)
    segments = [Segment(str(s["gloss"]), int(s["start"]), int(s["end"]))
                for s in payload.get("segments", [])]
    return AnimationTimeline(fps, arr, segments, gloss=str(payload.get("gloss", "")))


def load_frames(path) -> np.ndarray:
    """Pose stack from either a clip file or a timeline file."""
    return load_timeline(path).frames


def export_csv(timeline: AnimationTimeline, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame", "joint", "x", "y", "z"])
        for f, pose in enumerate(timeline.frames):
            for j, (x, y, z) in enumerate(pose.tolist()):
                writer.writerow([f, j, repr(x), repr(y), repr(z)])


def _frame_count(t_end: float, fps_out: float) -> int:
    return int(math.floor(t_end * fps_out + _TIME_EPS)) + 1


def _first_frame_at(t: float, fps_out: float) -> int:
    # smallest k with k / fps_out >= t
    return max(0, int(math.ceil(t * fps_out - _TIME_EPS)))


def _evaluate(spline: CubicSpline, fps_out: float, t_end: float) -> np.ndarray:
    t = np.arange(_frame_count(t_end, fps_out)) / fps_out
    return spline(t).reshape(t.shape[0], NUM_JOINTS, 3)


def _fit(times: np.ndarray, poses: np.ndarray) -> CubicSpline:
    return fit_splines(times, poses.reshape(poses.shape[0], -1))


def reconstruct(keyframes, fps_out: float = DEFAULT_FPS, t_end: float | None = None) -> np.ndarray:
    """Dense poses at ``0, 1/fps_out, ...`` up to ``t_end`` from keyframes.

    Every (joint, coordinate) track gets its own natural spline over the
    shared keyframe times. ``t_end`` defaults to the last keyframe time.
    """
    if not fps_out > 0:
        raise ValueError("fps_out must be positive")
    kf = as_keyframes(keyframes)
    spline = _fit(kf.times, kf.poses)
    if t_end is None:
        t_end = float(kf.times[-1])
    return _evaluate(spline, fps_out, t_end)


def stitch(clips: Sequence[SignClip], fps_out: float = DEFAULT_FPS, gap: float = DEFAULT_GAP,
           stride: int = 1, gloss: str = "") -> AnimationTimeline:
    """Place clips on one time axis and fit a single spline through all of them.

    Clip ``i+1`` starts ``gap`` seconds after the last frame of clip ``i``.
    Frames strictly between two clips are labelled as transitions.
    """
    clips = list(clips)
    if not clips:
        raise EmptyClipList("stitch needs at least one clip")
    if not fps_out > 0:
        raise ValueError("fps_out must be positive")
    if gap < 0:
        raise ValueError("gap must be >= 0")
    # a zero gap would put two knots at the same instant
    gap = max(gap, 1.0 / fps_out)

    times, poses, spans = [], [], []
    offset = 0.0
    for clip in clips:
        kf: Keyframes = downsample(clip, stride)
        times.append(kf.times + offset)
        poses.append(kf.poses)
        spans.append((offset, offset + clip.duration))
        offset += clip.duration + gap
    knots = np.concatenate(times)
    spline = _fit(knots, np.concatenate(poses))
    t_end = spans[-1][1]
    frames = _evaluate(spline, fps_out, t_end)
    total = frames.shape[0]

    segments: list[Segment] = []
    cursor = 0
    for i, (clip, (start, end)) in enumerate(zip(clips, spans)):
        first = min(_first_frame_at(start, fps_out), total)
        if first > cursor:
            segments.append(Segment(TRANSITION, cursor, first))
            cursor = first
        stop = total if i == len(clips) - 1 else min(_first_frame_at(end, fps_out), total)
        stop = max(stop, cursor)
        segments.append(Segment(clip.gloss, cursor, stop))
        cursor = stop
    label = gloss or " ".join(c.gloss for c in clips)
    return AnimationTimeline(fps_out, frames, segments, gloss=label, spline=spline)


class ClipStore:
    """Read-only gloss -> clip index over a directory of clip files.

    When two files carry the same gloss the first in filename order wins.
    """

    def __init__(self, clips: Iterable[SignClip] = ()):
        self._clips: dict[str, SignClip] = {}
        for clip in clips:
            self._clips.setdefault(clip.gloss, clip)

    @classmethod
    def from_dir(cls, directory) -> "ClipStore":
        return cls(load_clip(p) for p in iter_clip_files(directory))

    def __contains__(self, gloss: str) -> bool:
        return gloss in self._clips

    def __len__(self):
        return len(self._clips)

    def get(self, gloss: str) -> SignClip | None:
        return self._clips.get(gloss)

    @property
    def glosses(self) -> list[str]:
        return sorted(self._clips)

    def letter(self, ch: str) -> SignClip | None:
        return self._clips.get(f"fs-{ch}") or self._clips.get(ch)

    def spell(self, letters: str) -> list[SignClip] | None:
        out = [self.letter(ch) for ch in letters]
        return None if any(c is None for c in out) else out

    def resolve(self, surface: str) -> list[SignClip] | None:
        """Clips realizing one gloss surface, or None when it cannot be signed."""
        if surface.startswith("fs-"):
            letters = surface[3:]
            return self.spell(letters) if letters else None
        clip = self._clips.get(surface)
        if clip is not None:
            return [clip]
        if surface.startswith("#") and surface[1:].isalnum():
            return self.spell(surface[1:])
        return None


def _surfaces(gloss) -> list[str]:
    if isinstance(gloss, str):
        items = gloss.split()
    else:
        items = [str(s) for s in getattr(gloss, "surfaces", gloss)]
    # clause markers carry no sign
    return [s for s in items if s != "//"]


def synthesize(gloss, store: ClipStore, fps_out: float = DEFAULT_FPS, gap: float = DEFAULT_GAP,
               stride: int = 1, normalize: bool = True) -> AnimationTimeline:
    """Animate a gloss sentence from the clips in ``store``.

    Unresolvable surfaces are skipped and listed in ``timeline.missing``.
    """
    surfaces = _surfaces(gloss)
    resolved: list[SignClip] = []
    missing: list[str] = []
    for surface in surfaces:
        clips = store.resolve(surface)
        if clips is None:
            missing.append(surface)
        else:
            resolved.extend(clips)
    if not resolved:
        raise NoResolvableSigns(missing)
    if normalize:
        resolved = [SignClip(c.gloss, c.fps, normalize_skeleton(c.frames)) for c in resolved]
    timeline = stitch(resolved, fps_out, gap, stride, gloss=" ".join(surfaces))
    timeline.missing = missing
    return timeline

