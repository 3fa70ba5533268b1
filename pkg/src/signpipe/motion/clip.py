"""Per-sign keypoint clips: file format, validation, normalization, downsampling."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from ..errors import (
    BadJointCount,
    BadLayout,
    DegenerateSkeleton,
    MalformedClip,
    MissingFile,
    NonFiniteCoordinate,
    TooFewFrames,
)
from .layout import CANONICAL_LAYOUT, JOINT_INDEX, LEFT_SHOULDER, NUM_JOINTS, RIGHT_SHOULDER


def check_frames(frames) -> np.ndarray:
    """Validate a pose stack and return it as a float64 (F, 133, 3) array."""
    arr = np.asarray(frames, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 3:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[2] != 3:
        if arr.ndim == 3:
            raise MalformedClip(f"joints must be [x, y, z] triples, got width {arr.shape[2]}")
        raise MalformedClip(f"frames must have shape (F, 133, 3), got {arr.shape}")
    if arr.shape[1] != NUM_JOINTS:
        raise BadJointCount(arr.shape[1])
    if not np.all(np.isfinite(arr)):
        f, j = np.argwhere(~np.isfinite(arr))[0][:2]
        raise NonFiniteCoordinate(int(f), int(j))
    return arr


@dataclass(frozen=True, eq=False)
class SignClip:
    gloss: str
    fps: float
    frames: np.ndarray
    layout: tuple[str, ...] = CANONICAL_LAYOUT

    def __post_init__(self):
        if not (self.fps > 0 and math.isfinite(self.fps)):
            raise MalformedClip(f"fps must be positive, got {self.fps!r}")
        frames = check_frames(self.frames)
        if frames.shape[0] < 2:
            raise TooFewFrames(frames.shape[0])
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "layout", tuple(self.layout))

    def __len__(self):
        return self.frames.shape[0]

    @property
    def duration(self) -> float:
        return (len(self) - 1) / self.fps

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) / self.fps

    def __eq__(self, other):
        if not isinstance(other, SignClip):
            return NotImplemented
        return (self.gloss == other.gloss and self.fps == other.fps
                and self.layout == other.layout and np.array_equal(self.frames, other.frames))

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "gloss": self.gloss,
            "fps": self.fps,
            "layout": list(self.layout),
            "frames": self.frames.tolist(),
        }


def _reorder_to_canonical(layout: Sequence[str], frames: list) -> list:
    """Permute joints declared in another order into the canonical order."""
    if tuple(layout) == CANONICAL_LAYOUT:
        return frames
    if len(layout) != NUM_JOINTS:
        raise BadJointCount(len(layout))
    if sorted(layout) != sorted(CANONICAL_LAYOUT):
        unknown = sorted(set(layout) - set(JOINT_INDEX))[:3]
        raise BadLayout(f"layout is not a permutation of the canonical joints (e.g. {unknown})")
    position = {name: i for i, name in enumerate(layout)}
    order = [position[name] for name in CANONICAL_LAYOUT]
    return [[frame[i] for i in order] if len(frame) == NUM_JOINTS else frame for frame in frames]


def clip_from_json(payload: dict) -> SignClip:
    try:
        gloss = payload["gloss"]
        fps = payload["fps"]
        frames = payload["frames"]
    except (KeyError, TypeError) as exc:
        raise MalformedClip(f"missing field {exc}") from None
    if not isinstance(gloss, str) or isinstance(fps, bool) or not isinstance(fps, (int, float)):
        raise MalformedClip("'gloss' must be a string and 'fps' a number")
    if not isinstance(frames, list):
        raise MalformedClip("'frames' must be an array")
    if len(frames) < 2:
        raise TooFewFrames(len(frames))
    for f, frame in enumerate(frames):
        if not isinstance(frame, list):
            raise MalformedClip(f"frame {f} is not an array")
        if len(frame) != NUM_JOINTS:
            raise BadJointCount(len(frame), f)
    layout = payload.get("layout", CANONICAL_LAYOUT)
    frames = _reorder_to_canonical(layout, frames)
    try:
        arr = np.array(frames, dtype=np.float64)
    except (ValueError, TypeError):
        raise MalformedClip("every joint must be an [x, y, z] triple of numbers") from None
    return SignClip(gloss, float(fps), arr)


def _read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(path) from None
    try:
        # NaN/Infinity literals are rejected later as non-finite coordinates
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedClip(f"{path}: {exc}") from None


def load_clip(path) -> SignClip:
    return clip_from_json(_read_json(path))


def dump_json(payload: dict) -> str:
    # repr-based float formatting round-trips float64 exactly
    return json.dumps(payload, ensure_ascii=False, allow_nan=False, separators=(",", ":"))


def save_clip(clip: SignClip, path) -> None:
    Path(path).write_text(dump_json(clip.to_json()), encoding="utf-8")


def normalize_skeleton(pose) -> np.ndarray:
    """Center a pose on the mid-shoulder point and scale shoulders 1 apart.

    Accepts one pose (133, 3) or a stack (F, 133, 3), normalizing each frame
    on its own. No rotation is applied.
    """
    arr = np.asarray(pose, dtype=np.float64)
    single = arr.ndim == 2
    stack = check_frames(arr)
    left = stack[:, LEFT_SHOULDER]
    right = stack[:, RIGHT_SHOULDER]
    dist = np.linalg.norm(left - right, axis=1)
    if np.any(dist < 1e-9):
        raise DegenerateSkeleton("shoulder joints coincide")
    mid = (left + right) / 2.0
    out = (stack - mid[:, None, :]) / dist[:, None, None]
    return out[0] if single else out


@dataclass(frozen=True, eq=False)
class Keyframes:
    """Poses kept as spline knots, with their times and source frame indices."""

    times: np.ndarray
    poses: np.ndarray
    indices: np.ndarray = field(default=None)

    def __iter__(self) -> Iterator[tuple[float, np.ndarray]]:
        for t, pose in zip(self.times, self.poses):
            yield float(t), pose

    def __len__(self):
        return self.times.shape[0]


def downsample_indices(n_frames: int, stride: int) -> np.ndarray:
    if stride < 1:
        raise ValueError("stride must be >= 1")
    idx = np.arange(0, n_frames, stride)
    if idx[-1] != n_frames - 1:
        idx = np.append(idx, n_frames - 1)
    return idx


def downsample(clip: SignClip, stride: int) -> Keyframes:
    """Keep every ``stride``-th frame plus the final one; times are index / fps."""
    idx = downsample_indices(len(clip), stride)
    return Keyframes(idx / clip.fps, clip.frames[idx], idx)


def as_keyframes(keyframes) -> Keyframes:
    if isinstance(keyframes, Keyframes):
        return keyframes
    pairs = list(keyframes)
    times = np.array([float(t) for t, _ in pairs])
    poses = check_frames(np.array([np.asarray(p, dtype=np.float64) for _, p in pairs]))
    return Keyframes(times, poses)


def iter_clip_files(directory) -> Iterator[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise MissingFile(directory)
    for name in sorted(os.listdir(directory)):
        if name.endswith(".json"):
            yield directory / name
