"""Automated motion-plausibility checks.

Extracted motion tends to glitch in recognizable ways: bones stretching,
joints whipping impossibly fast, the root teleporting, feet sinking
through the floor, and arms clipping through each other. Each check
flags the offending frames; `clean_fraction` is the share of frames with
no flags at all. It is a reproducible proxy metric, not a human judgment
of visual quality.

Checks run on world-space joint position tracks. `check_clip` derives
those by forward kinematics; `check_world_positions` accepts raw tracks
directly (useful for captured streams, whose bone lengths wobble).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .core import MotionClip, Skeleton, Vec3, forward_kinematics
from .errors import DomainError
from .jsonfmt import dumps


class QualityFlag(enum.Enum):
    BONE_STRETCH = "bone_stretch"
    VELOCITY_SPIKE = "velocity_spike"
    ROOT_TELEPORT = "root_teleport"
    GROUND_PENETRATION = "ground_penetration"
    LIMB_INTERPENETRATION = "limb_interpenetration"


@dataclass
class QualityConfig:
    bone_length_tolerance: float = 0.02
    max_joint_speed: float = 12.0
    max_root_jump: float = 0.5
    ground_penetration: float = 0.05
    limb_proximity_min: float = 0.03

    def __post_init__(self):
        for name in (
            "bone_length_tolerance",
            "max_joint_speed",
            "max_root_jump",
            "ground_penetration",
            "limb_proximity_min",
        ):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")


@dataclass
class QualityReport:
    frame_flags: list[frozenset[QualityFlag]]
    clean_fraction: float
    counts: dict[QualityFlag, int]
    skipped_checks: tuple[str, ...] = field(default_factory=tuple)

    @property
    def total_frames(self) -> int:
        return len(self.frame_flags)

    @property
    def clean_frames(self) -> int:
        return sum(1 for flags in self.frame_flags if not flags)


def _point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> float:
    ab = b - a
    denom = ab.dot(ab)
    if denom < 1e-18:
        return p.distance_to(a)
    u = max(0.0, min(1.0, (p - a).dot(ab) / denom))
    return p.distance_to(a + ab * u)


def _find_joint(names: Sequence[str], *needles: str) -> int | None:
    for i, name in enumerate(names):
        low = name.lower()
        if all(n in low for n in needles):
            return i
    return None


def check_world_positions(
    skeleton: Skeleton,
    tracks: list[list[Vec3]],
    fps: float,
    cfg: QualityConfig | None = None,
) -> QualityReport:
    """Run all checks over per-frame world position tracks.

    `tracks[f][j]` is joint j's world position at frame f, indexed like
    the skeleton's joints.
    """
    cfg = cfg or QualityConfig()
    names = skeleton.names
    n_frames = len(tracks)
    if n_frames == 0:
        raise DomainError("no frames to check")

    ground_joints = [
        i for i, name in enumerate(names)
        if any(part in name.lower() for part in ("foot", "ankle", "toe"))
    ]
    lw = _find_joint(names, "left", "wrist")
    lel = _find_joint(names, "left", "elbow")
    rw = _find_joint(names, "right", "wrist")
    rel = _find_joint(names, "right", "elbow")
    proximity_ok = None not in (lw, lel, rw, rel)

    skipped: list[str] = []
    if n_frames < 2:
        skipped += [QualityFlag.VELOCITY_SPIKE.value, QualityFlag.ROOT_TELEPORT.value]
    if not proximity_ok:
        skipped.append(QualityFlag.LIMB_INTERPENETRATION.value)
    if not ground_joints:
        skipped.append(QualityFlag.GROUND_PENETRATION.value)

    flags: list[set[QualityFlag]] = [set() for _ in range(n_frames)]
    for f, frame in enumerate(tracks):
        for j, joint in enumerate(skeleton.joints):
            if joint.parent is None:
                continue
            rest = joint.offset.norm()
            actual = frame[j].distance_to(frame[joint.parent])
            if abs(actual - rest) > cfg.bone_length_tolerance * rest:
                flags[f].add(QualityFlag.BONE_STRETCH)
                break
        if ground_joints and any(frame[i].y < -cfg.ground_penetration for i in ground_joints):
            flags[f].add(QualityFlag.GROUND_PENETRATION)
        if proximity_ok:
            d1 = _point_segment_distance(frame[lw], frame[rel], frame[rw])
            d2 = _point_segment_distance(frame[rw], frame[lel], frame[lw])
            if min(d1, d2) < cfg.limb_proximity_min:
                flags[f].add(QualityFlag.LIMB_INTERPENETRATION)
        if f > 0:
            prev = tracks[f - 1]
            if frame[0].distance_to(prev[0]) > cfg.max_root_jump:
                flags[f].add(QualityFlag.ROOT_TELEPORT)
            if any(
                frame[j].distance_to(prev[j]) * fps > cfg.max_joint_speed
                for j in range(len(names))
            ):
                flags[f].add(QualityFlag.VELOCITY_SPIKE)

    counts = {flag: sum(1 for fl in flags if flag in fl) for flag in QualityFlag}
    clean = sum(1 for fl in flags if not fl)
    return QualityReport(
        frame_flags=[frozenset(fl) for fl in flags],
        clean_fraction=clean / n_frames,
        counts=counts,
        skipped_checks=tuple(skipped),
    )


def check_clip(clip: MotionClip, cfg: QualityConfig | None = None) -> QualityReport:
    """Check a clip's forward-kinematics world positions for glitches."""
    tracks = [
        [pos for _name, pos, _rot in forward_kinematics(clip.skeleton, frame)]
        for frame in clip.frames
    ]
    return check_world_positions(clip.skeleton, tracks, clip.fps, cfg)


def report_to_dict(report: QualityReport) -> dict:
    return {
        "frames_total": report.total_frames,
        "frames_clean": report.clean_frames,
        "clean_fraction": report.clean_fraction,
        "counts": {flag.value: report.counts[flag] for flag in QualityFlag},
        "skipped_checks": list(report.skipped_checks),
    }


def summarize(report: QualityReport) -> str:
    """Human-readable category table followed by a machine JSON line."""
    width = max(len(flag.value) for flag in QualityFlag)
    lines = [f"{'category'.ljust(width)}  frames"]
    for flag in QualityFlag:
        lines.append(f"{flag.value.ljust(width)}  {report.counts[flag]:6d}")
    lines.append(f"{'frames_total'.ljust(width)}  {report.total_frames:6d}")
    lines.append(f"{'frames_clean'.ljust(width)}  {report.clean_frames:6d}")
    if report.skipped_checks:
        lines.append("skipped: " + ", ".join(report.skipped_checks))
    lines.append(f"clean_fraction: {report.clean_fraction:.3f}")
    lines.append(dumps(report_to_dict(report)))
    return "\n".join(lines) + "\n"
