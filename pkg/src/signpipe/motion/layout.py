"""Canonical 133-joint whole-body layout (COCO-WholeBody ordering).

17 body joints, 6 foot joints, 68 face landmarks, then 21 joints per hand,
left hand before right.
"""

from __future__ import annotations

BODY = (
    "nose", "left_eye", "right_eye", "left_ear", "right_ear",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist", "right_wrist", "left_hip", "right_hip",
    "left_knee", "right_knee", "left_ankle", "right_ankle",
)
FEET = (
    "left_big_toe", "left_small_toe", "left_heel",
    "right_big_toe", "right_small_toe", "right_heel",
)
FACE = tuple(f"face_{i}" for i in range(68))
_FINGERS = ("thumb", "forefinger", "middle_finger", "ring_finger", "pinky_finger")


def _hand(side: str) -> tuple[str, ...]:
    return (f"{side}_hand_root",) + tuple(
        f"{side}_{finger}{k}" for finger in _FINGERS for k in range(1, 5)
    )


LEFT_HAND = _hand("left")
RIGHT_HAND = _hand("right")

CANONICAL_LAYOUT: tuple[str, ...] = BODY + FEET + FACE + LEFT_HAND + RIGHT_HAND
NUM_JOINTS = len(CANONICAL_LAYOUT)
JOINT_INDEX = {name: i for i, name in enumerate(CANONICAL_LAYOUT)}

LEFT_SHOULDER = JOINT_INDEX["left_shoulder"]
RIGHT_SHOULDER = JOINT_INDEX["right_shoulder"]

assert NUM_JOINTS == 133
