from __future__ import annotations

import math
import random

import pytest

from motionguide.bvh import parse_bvh, serialize_bvh
from motionguide.core import MotionClip, PoseFrame, UnitQuat, Vec3, euler_to_quat
from motionguide.errors import ParseError

from oracles import euler_oracle, rotations_close
from synth import idle_clip, walk_clip, wave_clip

MINIMAL = """\
HIERARCHY
ROOT Hips
{
  OFFSET 0.0 0.0 0.0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT Chest
  {
    OFFSET 0.0 20.0 0.0
    CHANNELS 3 Zrotation Xrotation Yrotation
  }
}
MOTION
Frames: 2
Frame Time: 0.033333
0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0
0.0 1.0 0.0 10.0 0.0 0.0 5.0 0.0 0.0
"""

THREE_LEVEL = """\
HIERARCHY
ROOT root
{
  OFFSET 0 0 0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT mid
  {
    OFFSET 0 50 0
    CHANNELS 3 Zrotation Xrotation Yrotation
    JOINT tip
    {
      OFFSET 0 40 10
      CHANNELS 3 Xrotation Yrotation Zrotation
      End Site
      {
        OFFSET 0 10 0
      }
    }
  }
}
MOTION
Frames: 3
Frame Time: 0.0416667
0 0 0 0 0 0 10 0 0 0 0 0
0 5 0 15 0 0 20 5 0 0 10 0
0 10 0 30 0 0 40 10 5 0 20 10
"""

ZXY_ROTATION = """\
HIERARCHY
ROOT Hips
{
  OFFSET 0 0 0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT Arm
  {
    OFFSET 10 0 0
    CHANNELS 3 Zrotation Xrotation Yrotation
  }
}
MOTION
Frames: 1
Frame Time: 0.04
0 0 0 0 0 0 90 0 0
"""


class TestParse:
    def test_minimal(self):
        clip = parse_bvh(MINIMAL)
        assert len(clip.skeleton.joints) == 2
        assert len(clip.frames) == 2
        assert abs(clip.fps - 30.0) < 0.01
        assert clip.skeleton.names == ["Hips", "Chest"]
        # centimeters become meters
        assert clip.skeleton.joints[1].offset == Vec3(0.0, 0.2, 0.0)

    def test_root_translation_scaled(self):
        clip = parse_bvh(MINIMAL)
        assert clip.frames[1].root_position == Vec3(0.0, 0.01, 0.0)

    def test_custom_scale(self):
        clip = parse_bvh(MINIMAL, scale=1.0)
        assert clip.skeleton.joints[1].offset == Vec3(0.0, 20.0, 0.0)

    def test_zxy_channel_order(self):
        clip = parse_bvh(ZXY_ROTATION)
        q = clip.frames[0].joint_rotations[1]
        assert rotations_close(q, euler_oracle("ZXY", (90.0, 0.0, 0.0)), tol=1e-6)

    def test_mixed_orders_match_oracle(self):
        clip = parse_bvh(THREE_LEVEL)
        # frame 2 values: root ZXY (30,0,0), mid ZXY (40,10,5), tip XYZ (0,20,10)
        assert rotations_close(
            clip.frames[2].joint_rotations[0], euler_oracle("ZXY", (30.0, 0.0, 0.0)), tol=1e-6
        )
        assert rotations_close(
            clip.frames[2].joint_rotations[1], euler_oracle("ZXY", (40.0, 10.0, 5.0)), tol=1e-6
        )
        assert rotations_close(
            clip.frames[2].joint_rotations[2], euler_oracle("XYZ", (0.0, 20.0, 10.0)), tol=1e-6
        )

    def test_end_site_recorded_not_a_joint(self):
        clip = parse_bvh(THREE_LEVEL)
        assert clip.skeleton.names == ["root", "mid", "tip"]
        assert clip.skeleton.end_sites == {2: Vec3(0.0, 0.1, 0.0)}

    def test_deterministic(self):
        assert parse_bvh(MINIMAL) == parse_bvh(MINIMAL)


class TestParseErrors:
    def test_missing_motion(self):
        text = MINIMAL.split("MOTION")[0]
        with pytest.raises(ParseError) as err:
            parse_bvh(text)
        assert "MOTION" in str(err.value)

    def test_truncated_mid_frame(self):
        # last frame line loses values; the error names that line
        lines = MINIMAL.splitlines()
        lines[-1] = "0.0 1.0 0.0"
        with pytest.raises(ParseError) as err:
            parse_bvh("\n".join(lines))
        assert err.value.line == len(lines)
        assert "expected 9 values" in str(err.value)

    def test_missing_frame_lines(self):
        lines = MINIMAL.splitlines()[:-1]
        with pytest.raises(ParseError) as err:
            parse_bvh("\n".join(lines))
        assert "truncated" in str(err.value)
        assert err.value.line is not None

    def test_non_positive_frame_time(self):
        with pytest.raises(ParseError) as err:
            parse_bvh(MINIMAL.replace("Frame Time: 0.033333", "Frame Time: 0"))
        assert "Frame Time" in str(err.value)
        assert err.value.line == 14

    def test_bad_channel_name(self):
        with pytest.raises(ParseError) as err:
            parse_bvh(MINIMAL.replace("Zrotation Xrotation Yrotation\n  JOINT",
                                      "Zrotation Xrotation Wrotation\n  JOINT"))
        assert "Wrotation" in str(err.value)
        assert err.value.line == 5

    def test_duplicate_joint_name(self):
        with pytest.raises(ParseError) as err:
            parse_bvh(MINIMAL.replace("JOINT Chest", "JOINT Hips"))
        assert "duplicate" in str(err.value)
        assert err.value.line == 6

    def test_unbalanced_braces(self):
        text = MINIMAL.replace("  }\n}\nMOTION", "  }\nMOTION")
        with pytest.raises(ParseError) as err:
            parse_bvh(text)
        assert err.value.line is not None

    def test_trailing_garbage(self):
        with pytest.raises(ParseError) as err:
            parse_bvh(MINIMAL + "0 0 0 0 0 0 0 0 0\n")
        assert "after last frame" in str(err.value)

    def test_zero_length_joint_offset(self):
        with pytest.raises(ParseError) as err:
            parse_bvh(MINIMAL.replace("OFFSET 0.0 20.0 0.0", "OFFSET 0.0 0.0 0.0"))
        assert "zero-length" in str(err.value)
        assert err.value.line == 8

    def test_malformed_corpus_all_line_numbered(self):
        corpus = [
            MINIMAL.split("MOTION")[0],
            "\n".join(MINIMAL.splitlines()[:-1]),
            MINIMAL.replace("Frame Time: 0.033333", "Frame Time: -1"),
            MINIMAL.replace("JOINT Chest", "JOINT Hips"),
            MINIMAL.replace("CHANNELS 3", "CHANNELS 4"),
            MINIMAL.replace("Frames: 2", "Frames: two"),
        ]
        for text in corpus:
            with pytest.raises(ParseError) as err:
                parse_bvh(text)
            assert err.value.line is not None and err.value.line >= 1


def random_euler_clip(seed: int, n_frames: int = 8) -> MotionClip:
    rng = random.Random(seed)
    clip = parse_bvh(THREE_LEVEL)
    frames = []
    for _ in range(n_frames):
        rots = [
            euler_to_quat("ZXY", (rng.uniform(-170, 170), rng.uniform(-80, 80), rng.uniform(-170, 170)))
            for _ in clip.skeleton.joints
        ]
        frames.append(
            PoseFrame(
                root_position=Vec3(rng.uniform(-2, 2), rng.uniform(0, 2), rng.uniform(-2, 2)),
                joint_rotations=rots,
            )
        )
    return MotionClip(skeleton=clip.skeleton, frames=frames, fps=24.0)


def one_frame_clip() -> MotionClip:
    base = idle_clip(1)
    return base


def assert_round_trips(clip: MotionClip, tol: float = 1e-5):
    text = serialize_bvh(clip)
    back = parse_bvh(text)
    assert back.skeleton.names == clip.skeleton.names
    assert [j.parent for j in back.skeleton.joints] == [j.parent for j in clip.skeleton.joints]
    for a, b in zip(back.skeleton.joints, clip.skeleton.joints):
        assert a.offset.distance_to(b.offset) < tol
    assert set(back.skeleton.end_sites) == set(clip.skeleton.end_sites)
    for k, off in clip.skeleton.end_sites.items():
        assert back.skeleton.end_sites[k].distance_to(off) < tol
    assert len(back.frames) == len(clip.frames)
    assert abs(back.fps - clip.fps) < 1e-3
    for fa, fb in zip(back.frames, clip.frames):
        assert fa.root_position.distance_to(fb.root_position) < tol
        for qa, qb in zip(fa.joint_rotations, fb.joint_rotations):
            for ca, cb in zip((qa.w, qa.x, qa.y, qa.z), (qb.w, qb.x, qb.y, qb.z)):
                assert abs(ca - cb) < tol


class TestRoundTrip:
    # corpus: minimal, 3-level with end site, 1-frame, canonical wave,
    # canonical walk, random eulers
    def test_corpus(self):
        corpus = [
            parse_bvh(MINIMAL),
            parse_bvh(THREE_LEVEL),
            one_frame_clip(),
            wave_clip(duration_s=2.0),
            walk_clip(duration_s=2.0),
            random_euler_clip(seed=101),
        ]
        assert len(corpus) >= 5
        for clip in corpus:
            assert_round_trips(clip)

    def test_one_frame_emits_frames_1(self):
        text = serialize_bvh(one_frame_clip())
        assert "Frames: 1" in text.splitlines()

    def test_frame_time_formatting(self):
        text = serialize_bvh(idle_clip(2, fps=30.0))
        assert "Frame Time: 0.0333333" in text.splitlines()

    def test_serialize_deterministic(self):
        clip = wave_clip(duration_s=1.0)
        assert serialize_bvh(clip) == serialize_bvh(clip)

    def test_scale_round_trip(self):
        clip = parse_bvh(MINIMAL, scale=0.5)
        text = serialize_bvh(clip, scale=0.5)
        back = parse_bvh(text, scale=0.5)
        assert back.frames[1].root_position.distance_to(clip.frames[1].root_position) < 1e-5
