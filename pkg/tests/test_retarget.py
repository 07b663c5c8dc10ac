from __future__ import annotations

import math
import random

import pytest

from motionguide.core import (
    MotionClip,
    PoseFrame,
    UnitQuat,
    Vec3,
    clip_duration,
    forward_kinematics,
    yaw_quat,
)
from motionguide.errors import NormalizationError, RetargetError
from motionguide.jointmap import default_kinect_map, identity_joint_map
from motionguide.retarget import (
    clip_reference_span,
    normalize,
    pose_from_positions,
    resample,
    retarget,
)
from motionguide.skeletons import CANONICAL_JOINTS, canonical_skeleton, kinect32_skeleton

from oracles import random_unit_quat
from synth import idle_clip, rest_frame, wave_clip

REST_WORLD = forward_kinematics(canonical_skeleton(), rest_frame())


def canonical_positions() -> dict[str, Vec3]:
    return {name: pos for name, pos, _rot in REST_WORLD}


def transformed_world(translation=Vec3(0, 0, 0), yaw=0.0, scale=1.0):
    q = yaw_quat(yaw)
    out = []
    for name, pos, rot in REST_WORLD:
        p = q.rotate(pos * scale) + translation
        out.append((name, p, (q * rot).normalized()))
    return out


class TestRetarget:
    def test_identity_map(self):
        table = identity_joint_map(CANONICAL_JOINTS, required=CANONICAL_JOINTS)
        pose = retarget(REST_WORLD, table)
        assert set(pose) == set(CANONICAL_JOINTS)
        for name, pos, _rot in REST_WORLD:
            assert pose[name][0] == pos

    def test_kinect_rest_populates_20(self):
        kin = kinect32_skeleton()
        world = forward_kinematics(kin, rest_frame(kin))
        pose = retarget(world, default_kinect_map())
        assert len(pose) == 20
        assert set(pose) == set(CANONICAL_JOINTS)

    def test_missing_required_names_joint(self):
        table = identity_joint_map(CANONICAL_JOINTS, required=["pelvis"])
        world = [(n, p, r) for n, p, r in REST_WORLD if n != "pelvis"]
        with pytest.raises(RetargetError) as err:
            retarget(world, table)
        assert "pelvis" in str(err.value)

    def test_unmapped_optional_absent(self):
        table = identity_joint_map([n for n in CANONICAL_JOINTS if n != "nose"])
        pose = retarget(REST_WORLD, table)
        assert "nose" not in pose
        assert "head" in pose


class TestNormalize:
    def test_rest_pose_contract(self):
        n = normalize(retarget(REST_WORLD, identity_joint_map(CANONICAL_JOINTS)))
        assert n.positions["pelvis"] == Vec3(0, 0, 0)
        span = n.positions["head"].y - 0.5 * (
            n.positions["left_ankle"].y + n.positions["right_ankle"].y
        )
        assert abs(span - 1.0) < 1e-3
        assert n.height_scale > 0

    def test_already_normalized_unchanged(self):
        first = normalize(retarget(REST_WORLD, identity_joint_map(CANONICAL_JOINTS)))
        again = normalize(pose_from_positions(first.positions))
        for name, p in first.positions.items():
            assert again.positions[name].distance_to(p) < 1e-6

    def test_translation_invariance(self):
        base = normalize(pose_from_positions(canonical_positions()))
        moved_world = transformed_world(translation=Vec3(5, 0, 3))
        moved = normalize(retarget(moved_world, identity_joint_map(CANONICAL_JOINTS)))
        for name in base.positions:
            assert moved.positions[name].distance_to(base.positions[name]) < 1e-6

    def test_yaw_invariance_and_facing_diagnostic(self):
        base = normalize(pose_from_positions(canonical_positions()))
        yawed = normalize(
            retarget(transformed_world(yaw=math.pi / 2), identity_joint_map(CANONICAL_JOINTS))
        )
        for name in base.positions:
            assert yawed.positions[name].distance_to(base.positions[name]) < 1e-6
        # facing records the removed 90-degree yaw
        fwd = yawed.facing.rotate(Vec3(0, 0, 1))
        assert abs(fwd.x - 1.0) < 1e-6
        assert abs(fwd.z) < 1e-6

    def test_scale_invariance(self):
        base = normalize(pose_from_positions(canonical_positions()))
        scaled = normalize(
            retarget(transformed_world(scale=1.8), identity_joint_map(CANONICAL_JOINTS))
        )
        for name in base.positions:
            assert scaled.positions[name].distance_to(base.positions[name]) < 1e-6
        assert abs(scaled.height_scale - 1.8 * base.height_scale) < 1e-6

    def test_combined_transform_invariance_random(self):
        rng = random.Random(44)
        base = normalize(pose_from_positions(canonical_positions()))
        for _ in range(50):
            world = transformed_world(
                translation=Vec3(rng.uniform(-10, 10), rng.uniform(-1, 1), rng.uniform(-10, 10)),
                yaw=rng.uniform(-math.pi, math.pi),
                scale=rng.uniform(0.5, 2.0),
            )
            n = normalize(retarget(world, identity_joint_map(CANONICAL_JOINTS)))
            for name in base.positions:
                assert n.positions[name].distance_to(base.positions[name]) < 1e-6

    def test_idempotent(self):
        n1 = normalize(pose_from_positions(canonical_positions()))
        n2 = normalize(pose_from_positions(n1.positions))
        for name in n1.positions:
            assert n2.positions[name].distance_to(n1.positions[name]) < 1e-9

    def test_missing_joint_error(self):
        positions = canonical_positions()
        del positions["head"]
        with pytest.raises(NormalizationError) as err:
            normalize(pose_from_positions(positions))
        assert "head" in str(err.value)

    def test_degenerate_span_error(self):
        positions = {name: Vec3(p.x, 0.0, p.z) for name, p in canonical_positions().items()}
        with pytest.raises(NormalizationError):
            normalize(pose_from_positions(positions))

    def test_per_frame_equals_individual(self):
        # processing a clip frame by frame matches processing frames alone
        clip = wave_clip(duration_s=1.0)
        table = identity_joint_map(CANONICAL_JOINTS)
        batch = [
            normalize(retarget(forward_kinematics(clip.skeleton, f), table))
            for f in clip.frames
        ]
        lone = normalize(
            retarget(forward_kinematics(clip.skeleton, clip.frames[7]), table)
        )
        for name in lone.positions:
            assert batch[7].positions[name] == lone.positions[name]


class TestReferenceSpan:
    def test_percentile_span(self):
        clip = idle_clip(20)
        table = identity_joint_map(CANONICAL_JOINTS)
        span = clip_reference_span(clip, table)
        n = normalize(
            retarget(forward_kinematics(clip.skeleton, clip.frames[0]), table),
            reference_span=span,
        )
        assert abs(n.height_scale - span) < 1e-12


class TestResample:
    def test_same_rate_identity(self):
        clip = wave_clip(duration_s=1.0, fps=30.0)
        assert resample(clip, 30.0) is clip

    def test_two_frames_to_61(self, two_joint_skeleton):
        f0 = PoseFrame(Vec3(0, 0, 0), [UnitQuat.identity()] * 2)
        f1 = PoseFrame(
            Vec3(0, 0, 1),
            [UnitQuat.from_axis_angle(Vec3(0, 1, 0), math.pi / 2), UnitQuat.identity()],
        )
        clip = MotionClip(two_joint_skeleton, [f0, f1], 1.0)
        out = resample(clip, 60.0)
        assert len(out.frames) == 61
        mid = out.frames[30]
        assert mid.root_position.distance_to(Vec3(0, 0, 0.5)) < 1e-9
        want = UnitQuat.from_axis_angle(Vec3(0, 1, 0), math.pi / 4)
        assert abs(mid.joint_rotations[0].dot(want)) > 1.0 - 1e-9

    def test_one_frame_any_rate(self, two_joint_skeleton):
        clip = MotionClip(
            two_joint_skeleton, [PoseFrame(Vec3(0, 0, 0), [UnitQuat.identity()] * 2)], 30.0
        )
        out = resample(clip, 120.0)
        assert len(out.frames) == 1
        assert out.fps == 120.0

    def test_duration_preserved(self):
        clip = wave_clip(duration_s=2.0, fps=30.0)
        out = resample(clip, 24.0)
        assert abs(clip_duration(out) - clip_duration(clip)) < 1 / 24.0
        assert len(out.frames) == round(clip_duration(clip) * 24.0) + 1

    def test_rotation_slerp_matches_oracle(self, three_level_skeleton):
        rng = random.Random(45)
        frames = [
            PoseFrame(Vec3(0, 0, 0), [random_unit_quat(rng) for _ in three_level_skeleton.joints])
            for _ in range(3)
        ]
        clip = MotionClip(three_level_skeleton, frames, 2.0)
        out = resample(clip, 8.0)
        from oracles import rotations_close, slerp_oracle

        # frame at t=0.125 interpolates frames 0..1 with u=0.25
        got = out.frames[1].joint_rotations[1]
        want = slerp_oracle(frames[0].joint_rotations[1], frames[1].joint_rotations[1], 0.25)
        assert rotations_close(got, want, tol=1e-6)
