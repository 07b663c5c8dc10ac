from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from motionguide.core import Joint, MotionClip, PoseFrame, Skeleton, UnitQuat, Vec3


@pytest.fixture
def two_joint_skeleton() -> Skeleton:
    return Skeleton(
        joints=[
            Joint("root", None, Vec3(0.0, 0.0, 0.0)),
            Joint("child", 0, Vec3(0.0, 1.0, 0.0)),
        ]
    )


@pytest.fixture
def three_level_skeleton() -> Skeleton:
    return Skeleton(
        joints=[
            Joint("root", None, Vec3(0.0, 0.0, 0.0)),
            Joint("mid", 0, Vec3(0.0, 0.5, 0.0)),
            Joint("tip", 1, Vec3(0.0, 0.4, 0.1)),
            Joint("branch", 0, Vec3(0.3, 0.0, 0.0)),
        ]
    )


def identity_frame(skeleton: Skeleton, root: Vec3 = Vec3(0.0, 0.0, 0.0)) -> PoseFrame:
    return PoseFrame(root_position=root, joint_rotations=[UnitQuat.identity()] * len(skeleton.joints))


@pytest.fixture
def two_joint_clip(two_joint_skeleton) -> MotionClip:
    frames = [identity_frame(two_joint_skeleton) for _ in range(2)]
    return MotionClip(skeleton=two_joint_skeleton, frames=frames, fps=30.0)
