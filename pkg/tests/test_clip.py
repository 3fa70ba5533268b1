import json

import numpy as np
import pytest

from signpipe.errors import (
    BadJointCount,
    BadLayout,
    DegenerateSkeleton,
    MissingFile,
    NonFiniteCoordinate,
    TooFewFrames,
)
from signpipe.motion import CANONICAL_LAYOUT, SignClip, downsample, load_clip, normalize_skeleton, save_clip
from signpipe.motion.layout import JOINT_INDEX, LEFT_SHOULDER, RIGHT_SHOULDER
from synth import base_pose, random_clip, write_clip_json


def test_layout_shape():
    assert len(CANONICAL_LAYOUT) == 133 == len(set(CANONICAL_LAYOUT))
    assert JOINT_INDEX["left_shoulder"] == LEFT_SHOULDER == 5
    assert JOINT_INDEX["right_shoulder"] == RIGHT_SHOULDER == 6


def test_load_forty_frames(tmp_path, rng):
    clip = random_clip("HELLO", rng, frames=40)
    write_clip_json(tmp_path / "c.json", "HELLO", clip.frames)
    loaded = load_clip(tmp_path / "c.json")
    assert len(loaded) == 40 and loaded.fps == 24.0 and loaded.gloss == "HELLO"


def test_round_trip_bit_exact(tmp_path, rng):
    frames = rng.normal(size=(5, 133, 3)) * 10 ** rng.uniform(-8, 8, size=(5, 133, 3))
    clip = SignClip("X", 29.97, frames)
    save_clip(clip, tmp_path / "x.json")
    again = load_clip(tmp_path / "x.json")
    assert again == clip
    assert again.frames.tobytes() == clip.frames.tobytes()


def test_bad_joint_count(tmp_path):
    write_clip_json(tmp_path / "c.json", "A", np.zeros((3, 132, 3)), layout=CANONICAL_LAYOUT[:132])
    with pytest.raises(BadJointCount) as info:
        load_clip(tmp_path / "c.json")
    assert info.value.got == 132


def test_too_few_frames(tmp_path):
    write_clip_json(tmp_path / "c.json", "A", np.zeros((1, 133, 3)))
    with pytest.raises(TooFewFrames):
        load_clip(tmp_path / "c.json")


def test_non_finite(tmp_path):
    frames = np.zeros((3, 133, 3)).tolist()
    frames[2][7][1] = float("nan")
    (tmp_path / "c.json").write_text(json.dumps({"gloss": "A", "fps": 24, "frames": frames}))
    with pytest.raises(NonFiniteCoordinate) as info:
        load_clip(tmp_path / "c.json")
    assert (info.value.frame, info.value.joint) == (2, 7)


def test_missing(tmp_path):
    with pytest.raises(MissingFile):
        load_clip(tmp_path / "none.json")


def test_permuted_layout_reordered(tmp_path, rng):
    frames = rng.normal(size=(2, 133, 3))
    perm = rng.permutation(133)
    layout = [CANONICAL_LAYOUT[i] for i in perm]
    write_clip_json(tmp_path / "c.json", "A", frames[:, perm], layout=layout)
    np.testing.assert_array_equal(load_clip(tmp_path / "c.json").frames, frames)


def test_unknown_layout(tmp_path):
    layout = list(CANONICAL_LAYOUT)
    layout[0] = "tail"
    write_clip_json(tmp_path / "c.json", "A", np.zeros((2, 133, 3)), layout=layout)
    with pytest.raises(BadLayout):
        load_clip(tmp_path / "c.json")


def test_normalize_fixed_point(rng):
    pose = base_pose(rng)
    np.testing.assert_array_equal(normalize_skeleton(pose), pose)


def test_normalize_scale():
    pose = np.zeros((133, 3))
    pose[LEFT_SHOULDER] = [-2, 0, 0]
    pose[RIGHT_SHOULDER] = [2, 0, 0]
    out = normalize_skeleton(pose)
    np.testing.assert_allclose(out[LEFT_SHOULDER], [-0.5, 0, 0])
    np.testing.assert_allclose(out[RIGHT_SHOULDER], [0.5, 0, 0])


def test_normalize_translation_invariant(rng):
    for _ in range(20):
        pose = rng.normal(size=(133, 3))
        v = rng.uniform(-100, 100, size=3)
        assert np.max(np.abs(normalize_skeleton(pose + v) - normalize_skeleton(pose))) <= 1e-12


def test_normalize_stack_and_degenerate(rng):
    stack = rng.normal(size=(4, 133, 3))
    out = normalize_skeleton(stack)
    assert out.shape == stack.shape
    np.testing.assert_allclose(np.linalg.norm(out[:, 5] - out[:, 6], axis=1), 1.0)
    pose = np.zeros((133, 3))
    with pytest.raises(DegenerateSkeleton):
        normalize_skeleton(pose)


@pytest.mark.parametrize("n, stride, idx", [
    (9, 4, [0, 4, 8]), (10, 4, [0, 4, 8, 9]), (5, 1, [0, 1, 2, 3, 4]), (3, 10, [0, 2]),
])
def test_downsample(n, stride, idx, rng):
    clip = SignClip("A", 24.0, rng.normal(size=(n, 133, 3)))
    kf = downsample(clip, stride)
    assert kf.indices.tolist() == idx
    np.testing.assert_array_equal(kf.times, np.array(idx) / 24.0)
    np.testing.assert_array_equal(kf.poses, clip.frames[idx])
