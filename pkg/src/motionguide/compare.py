"""Posture comparison: per-joint differences, 0-100 score, limb colors.

The score sums ten per-joint contributions of up to 10 points each.
A joint's contribution falls linearly from 10 at zero difference to 0 at
`d_max` normalized units, so identical poses score exactly 100 and fully
divergent ones 0.

Limb indicators grade four limbs (arms and legs) by the mean of their
member joints' differences: blue below `limb_blue`, yellow below
`limb_yellow`, red beyond. The default thresholds were calibrated so a
relaxed-arms versus raised-arms pair lands red.

Note: which ten joints the score should watch is an interpretation; the
default set covers all four limbs plus head and chest and is configurable
per activity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ComparisonError, DomainError
from .retarget import NormalizedPose

DEFAULT_SCORED_JOINTS: tuple[str, ...] = (
    "head",
    "chest",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
)

LIMBS: dict[str, tuple[str, ...]] = {
    "left_arm": ("left_shoulder", "left_elbow", "left_wrist"),
    "right_arm": ("right_shoulder", "right_elbow", "right_wrist"),
    "left_leg": ("left_hip", "left_knee", "left_ankle"),
    "right_leg": ("right_hip", "right_knee", "right_ankle"),
}

POINTS_PER_JOINT = 10.0


class IndicatorColor(enum.Enum):
    """Per-limb alignment signal, ordered by severity."""

    BLUE = "blue"
    YELLOW = "yellow"
    RED = "red"

    @property
    def severity(self) -> int:
        return ("blue", "yellow", "red").index(self.value)


@dataclass
class CompareConfig:
    scored_joints: tuple[str, ...] = DEFAULT_SCORED_JOINTS
    d_max: float = 0.5
    limb_blue: float = 0.10
    limb_yellow: float = 0.25
    smoothing_window: int = 5

    def __post_init__(self):
        self.scored_joints = tuple(self.scored_joints)
        if len(self.scored_joints) != 10:
            raise DomainError(f"exactly 10 scored joints required, got {len(self.scored_joints)}")
        if len(set(self.scored_joints)) != 10:
            raise DomainError("scored joints must be distinct")
        if not 0.0 < self.limb_blue < self.limb_yellow:
            raise DomainError("need 0 < limb_blue < limb_yellow")
        if not self.d_max > self.limb_yellow:
            raise DomainError("need d_max > limb_yellow")
        if not (isinstance(self.smoothing_window, int) and self.smoothing_window >= 1):
            raise DomainError("smoothing_window must be an integer >= 1")

    def to_dict(self) -> dict:
        return {
            "scored_joints": list(self.scored_joints),
            "d_max": self.d_max,
            "limb_blue": self.limb_blue,
            "limb_yellow": self.limb_yellow,
            "smoothing_window": self.smoothing_window,
        }

    @staticmethod
    def from_dict(doc: Mapping) -> "CompareConfig":
        cfg = CompareConfig()
        return CompareConfig(
            scored_joints=tuple(doc.get("scored_joints", cfg.scored_joints)),
            d_max=float(doc.get("d_max", cfg.d_max)),
            limb_blue=float(doc.get("limb_blue", cfg.limb_blue)),
            limb_yellow=float(doc.get("limb_yellow", cfg.limb_yellow)),
            smoothing_window=int(doc.get("smoothing_window", cfg.smoothing_window)),
        )


@dataclass
class ScoreReport:
    """Per-joint points, their float total and the rounded display value."""

    per_joint: dict[str, float] = field(default_factory=dict)
    total: float = 0.0
    display_total: int = 0


def joint_difference(user: NormalizedPose, instructor: NormalizedPose, joint: str) -> float:
    """Euclidean distance between the two normalized joint positions."""
    try:
        a = user.positions[joint]
        b = instructor.positions[joint]
    except KeyError:
        raise ComparisonError(f"joint {joint!r} absent from a compared pose") from None
    return a.distance_to(b)


def pose_score(
    user: NormalizedPose, instructor: NormalizedPose, cfg: CompareConfig | None = None
) -> ScoreReport:
    """Score ten joints, 10 points each, linear falloff to zero at d_max."""
    cfg = cfg or CompareConfig()
    per_joint: dict[str, float] = {}
    total = 0.0
    for joint in cfg.scored_joints:
        d = joint_difference(user, instructor, joint)
        points = POINTS_PER_JOINT * max(0.0, 1.0 - d / cfg.d_max)
        per_joint[joint] = points
        total += points
    return ScoreReport(per_joint=per_joint, total=total, display_total=_round_half_up(total))


def _round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


def limb_indicator(
    user: NormalizedPose,
    instructor: NormalizedPose,
    limb_joints: Sequence[str],
    cfg: CompareConfig | None = None,
) -> IndicatorColor:
    """Color a limb by the mean difference of its member joints."""
    cfg = cfg or CompareConfig()
    if not limb_joints:
        raise DomainError("limb has no joints")
    mean = sum(joint_difference(user, instructor, j) for j in limb_joints) / len(limb_joints)
    if mean < cfg.limb_blue:
        return IndicatorColor.BLUE
    if mean < cfg.limb_yellow:
        return IndicatorColor.YELLOW
    return IndicatorColor.RED


def all_indicators(
    user: NormalizedPose,
    instructor: NormalizedPose,
    cfg: CompareConfig | None = None,
    limbs: Mapping[str, Sequence[str]] | None = None,
) -> dict[str, IndicatorColor]:
    limbs = limbs if limbs is not None else LIMBS
    return {name: limb_indicator(user, instructor, joints, cfg) for name, joints in limbs.items()}


def smoothed_score(history: Sequence[ScoreReport], cfg: CompareConfig | None = None) -> float:
    """Mean of the last `smoothing_window` totals in the history."""
    cfg = cfg or CompareConfig()
    if not history:
        raise DomainError("score history is empty")
    window = list(history)[-cfg.smoothing_window :]
    return sum(r.total for r in window) / len(window)
