"""Keypoint clips, spline interpolation and animation stitching."""

from .clip import Keyframes, SignClip, downsample, load_clip, normalize_skeleton, save_clip
from .layout import CANONICAL_LAYOUT, NUM_JOINTS
from .spline import CubicSpline, KeyframeTrack, fit_spline, fit_splines, linear_interpolate
from .timeline import (
    TRANSITION,
    AnimationTimeline,
    ClipStore,
    Segment,
    export_csv,
    load_timeline,
    reconstruct,
    save_timeline,
    stitch,
    synthesize,
)

__all__ = [
    "AnimationTimeline", "CANONICAL_LAYOUT", "ClipStore", "CubicSpline", "KeyframeTrack",
    "Keyframes", "NUM_JOINTS", "Segment", "SignClip", "TRANSITION", "downsample", "export_csv",
    "fit_spline", "fit_splines", "linear_interpolate", "load_clip", "load_timeline",
    "normalize_skeleton", "reconstruct", "save_clip", "save_timeline", "stitch", "synthesize",
]
