"""Mapping poses into the common comparison space.

Three steps take any performer to comparable coordinates:

1. `retarget` renames a world pose's joints onto the canonical set,
2. `normalize` makes the pose root-relative, yaw-aligned and
   height-scaled,
3. `resample` (on clips) aligns frame rates.

Normalized positions are unitless: one unit equals the performer's
ankle-to-head vertical span, the pelvis sits at the origin, and the hips
face +Z. Two performers of different heights standing in different spots
of the room produce directly comparable normalized poses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    MotionClip,
    UnitQuat,
    Vec3,
    WorldPose,
    clip_duration,
    forward_kinematics,
    sample_pose,
    yaw_quat,
)
from .errors import DomainError, NormalizationError, RetargetError
from .jointmap import JointMapTable

CanonicalPose = dict[str, tuple[Vec3, UnitQuat]]

MIN_BODY_SPAN = 0.01

_NORMALIZE_NEEDS = ("pelvis", "head", "left_ankle", "right_ankle", "left_hip", "right_hip")


@dataclass
class NormalizedPose:
    """Comparison-ready pose: unitless positions keyed by canonical name.

    `facing` records the yaw that was removed and `height_scale` the
    meters that one normalized unit stands for; both are diagnostics and
    do not participate in comparisons.
    """

    positions: dict[str, Vec3]
    facing: UnitQuat
    height_scale: float


def retarget(world_pose: WorldPose, table: JointMapTable) -> CanonicalPose:
    """Rename a world pose's joints through a map table.

    Optional unmapped joints are simply absent from the result; a missing
    required joint raises RetargetError naming it.
    """
    by_name = {name: (pos, rot) for name, pos, rot in world_pose}
    out: CanonicalPose = {}
    for src, dst in table.pairs:
        state = by_name.get(src)
        if state is not None:
            out[dst] = state
    for target in table.required:
        if target not in out:
            src = table.source_for(target)
            raise RetargetError(f"missing required joint {src!r} (maps to {target!r})")
    return out


def pose_from_positions(positions: dict[str, Vec3]) -> CanonicalPose:
    """Attach identity rotations to bare positions (testing/convenience)."""
    identity = UnitQuat.identity()
    return {name: (p, identity) for name, p in positions.items()}


def normalize(pose: CanonicalPose, *, reference_span: float | None = None) -> NormalizedPose:
    """Translate pelvis to origin, yaw hips to face +Z, scale span to 1.

    `reference_span` substitutes a precomputed span (e.g. a clip-level
    95th percentile) for the pose's own ankle-to-head vertical span.
    """
    missing = [n for n in _NORMALIZE_NEEDS if n not in pose]
    if missing:
        raise NormalizationError(f"cannot normalize: missing joints {missing}")

    pelvis = pose["pelvis"][0]
    centered = {name: p - pelvis for name, (p, _rot) in pose.items()}

    span = _vertical_span(centered)
    used_span = reference_span if reference_span is not None else span
    if used_span <= MIN_BODY_SPAN:
        raise NormalizationError(f"degenerate body: vertical span {used_span:.4f} m")

    hip_line = centered["left_hip"] - centered["right_hip"]
    forward = hip_line.cross(Vec3(0.0, 1.0, 0.0))
    if forward.norm() < 1e-9:
        raise NormalizationError("degenerate facing: hips are vertically aligned")
    yaw = math.atan2(forward.x, forward.z)
    undo = yaw_quat(-yaw)

    inv = 1.0 / used_span
    positions = {name: undo.rotate(p) * inv for name, p in centered.items()}
    return NormalizedPose(positions=positions, facing=yaw_quat(yaw), height_scale=used_span)


def _vertical_span(positions: dict[str, Vec3]) -> float:
    ankle_y = 0.5 * (positions["left_ankle"].y + positions["right_ankle"].y)
    return positions["head"].y - ankle_y


def clip_reference_span(clip: MotionClip, table: JointMapTable, percentile: float = 0.95) -> float:
    """A clip-level body span: the per-frame spans' given percentile.

    Useful as `normalize(..., reference_span=...)` when crouching frames
    should not be rescaled to full height.
    """
    spans = []
    for frame in clip.frames:
        pose = retarget(forward_kinematics(clip.skeleton, frame), table)
        missing = [n for n in _NORMALIZE_NEEDS if n not in pose]
        if missing:
            raise NormalizationError(f"cannot measure span: missing joints {missing}")
        pelvis = pose["pelvis"][0]
        spans.append(_vertical_span({n: p - pelvis for n, (p, _r) in pose.items()}))
    spans.sort()
    idx = min(len(spans) - 1, max(0, math.ceil(percentile * len(spans)) - 1))
    return spans[idx]


def normalized_pose_at(
    clip: MotionClip, t: float, table: JointMapTable | None = None
) -> NormalizedPose:
    """Sample a clip at time t and produce its normalized canonical pose."""
    from .jointmap import identity_joint_map

    frame = sample_pose(clip, t)
    world = forward_kinematics(clip.skeleton, frame)
    if table is None:
        table = identity_joint_map(clip.skeleton.names)
    return normalize(retarget(world, table))


def resample(clip: MotionClip, target_fps: float) -> MotionClip:
    """Re-grid a clip to target_fps; frame count = round(d * fps) + 1.

    Rounding is half-up. Same-rate input returns the clip unchanged.
    """
    if not (math.isfinite(target_fps) and target_fps > 0):
        raise DomainError(f"target fps must be positive, got {target_fps}")
    if target_fps == clip.fps:
        return clip
    duration = clip_duration(clip)
    count = int(math.floor(duration * target_fps + 0.5)) + 1
    frames = [sample_pose(clip, k / target_fps) for k in range(count)]
    return MotionClip(skeleton=clip.skeleton, frames=frames, fps=target_fps)
