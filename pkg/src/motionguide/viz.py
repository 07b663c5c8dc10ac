"""Renderer-agnostic visualization geometry.

Generates trajectories (a joint's recent path with a linear alpha ramp),
periodic fading footprints on the ground plane, head-gaze rays, and the
first-person anchor transform that places the instructor avatar so its
head coincides with the user's. Everything is plain geometry plus RGBA;
rendering is someone else's job.

`export_scene` serializes primitives to deterministic JSON (stable field
order, 6-decimal fixed floats) so downstream renderers and golden-file
tests see identical bytes for identical scenes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .compare import IndicatorColor
from .core import (
    FORWARD,
    MotionClip,
    RigidTransform,
    UnitQuat,
    Vec3,
    WorldPose,
    clip_duration,
    forward_kinematics,
    sample_pose,
    yaw_about_up,
    yaw_quat,
)
from .errors import DomainError, VizError
from .jsonfmt import dumps

RGBA = tuple[float, float, float, float]

TRAJECTORY_RGBA: RGBA = (1.0, 0.55, 0.1, 1.0)
FOOTPRINT_RGBA: RGBA = (0.15, 0.35, 1.0, 1.0)
GAZE_RGBA: RGBA = (0.2, 0.9, 0.4, 1.0)
INDICATOR_RGBA: dict[IndicatorColor, RGBA] = {
    IndicatorColor.BLUE: (0.15, 0.35, 1.0, 1.0),
    IndicatorColor.YELLOW: (1.0, 0.85, 0.1, 1.0),
    IndicatorColor.RED: (1.0, 0.15, 0.1, 1.0),
}

DEFAULT_TRAJECTORY_WINDOW = 1.5
DEFAULT_FOOTPRINT_INTERVAL = 2.0
DEFAULT_FOOTPRINT_FADE = 4.0
DEFAULT_GAZE_LENGTH = 2.0
DEFAULT_FOOTPRINT_RADIUS = 0.12
DEFAULT_INDICATOR_RADIUS = 0.06


@dataclass(frozen=True)
class TrajectoryPoint:
    position: Vec3
    alpha: float
    t: float


@dataclass
class TrajectoryPolyline:
    joint: str
    points: list[TrajectoryPoint]


class Foot(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class FootprintMarker:
    foot: Foot
    position: Vec3
    yaw: float
    born_t: float
    alpha: float
    color: RGBA = FOOTPRINT_RGBA


@dataclass(frozen=True)
class GazeRay:
    origin: Vec3
    direction: Vec3
    length: float = DEFAULT_GAZE_LENGTH


class AnchorMode(enum.Enum):
    TRANSLATION_ONLY = "translation_only"
    TRANSLATION_PLUS_YAW = "translation_plus_yaw"


@dataclass(frozen=True)
class FirstPersonAnchor:
    """Places instructor-avatar space into user space, heads coincident."""

    transform: RigidTransform
    mode: AnchorMode


def trajectory(
    clip: MotionClip,
    joint: str,
    t: float,
    window: float = DEFAULT_TRAJECTORY_WINDOW,
) -> TrajectoryPolyline:
    """World path of a joint over [t - window, t], alpha ramping 0 to 1."""
    if joint not in clip.skeleton.names:
        raise VizError(f"unknown joint {joint!r}")
    duration = clip_duration(clip)
    if not 0.0 <= t <= duration + 1e-9:
        raise DomainError(f"time {t} outside clip [0, {duration:.4f}]")
    if window <= 0:
        raise DomainError(f"window must be positive, got {window}")
    idx = clip.skeleton.index_of(joint)
    k_lo = max(0, int(math.ceil((t - window) * clip.fps - 1e-9)))
    k_hi = min(len(clip.frames) - 1, int(math.floor(t * clip.fps + 1e-9)))
    count = k_hi - k_lo + 1
    points: list[TrajectoryPoint] = []
    for i, k in enumerate(range(k_lo, k_hi + 1)):
        world = forward_kinematics(clip.skeleton, clip.frames[k])
        alpha = 1.0 if count == 1 else i / (count - 1)
        points.append(TrajectoryPoint(position=world[idx][1], alpha=alpha, t=k / clip.fps))
    return TrajectoryPolyline(joint=joint, points=points)


def body_yaw(world: WorldPose, left_hip: str = "left_hip", right_hip: str = "right_hip") -> float:
    """Heading of the hip line's ground-plane normal; root yaw fallback."""
    by_name = {name: (p, q) for name, p, q in world}
    if left_hip in by_name and right_hip in by_name:
        hip_line = by_name[left_hip][0] - by_name[right_hip][0]
        fwd = hip_line.cross(Vec3(0.0, 1.0, 0.0))
        if fwd.norm() >= 1e-9:
            return math.atan2(fwd.x, fwd.z)
    return yaw_about_up(world[0][2])


def footprints(
    clip: MotionClip,
    t: float,
    interval: float = DEFAULT_FOOTPRINT_INTERVAL,
    fade: float = DEFAULT_FOOTPRINT_FADE,
    *,
    left_joint: str = "left_foot",
    right_joint: str = "right_foot",
) -> list[FootprintMarker]:
    """Ground markers born every `interval` seconds, fading over `fade`.

    A marker's alpha is clamp(1 - age/fade, 0, 1); fully faded markers
    are omitted.
    """
    duration = clip_duration(clip)
    if not 0.0 <= t <= duration + 1e-9:
        raise DomainError(f"time {t} outside clip [0, {duration:.4f}]")
    if interval <= 0 or fade <= 0:
        raise DomainError("interval and fade must be positive")
    for name in (left_joint, right_joint):
        if name not in clip.skeleton.names:
            raise VizError(f"unknown foot joint {name!r}")
    li = clip.skeleton.index_of(left_joint)
    ri = clip.skeleton.index_of(right_joint)

    markers: list[FootprintMarker] = []
    births = [k * interval for k in range(int(math.floor(t / interval + 1e-9)) + 1)]
    for born in births:
        age = t - born
        alpha = 1.0 - age / fade
        if alpha <= 0.0:
            continue
        world = forward_kinematics(clip.skeleton, sample_pose(clip, born))
        yaw = body_yaw(world)
        for foot, idx in ((Foot.LEFT, li), (Foot.RIGHT, ri)):
            p = world[idx][1]
            markers.append(
                FootprintMarker(
                    foot=foot,
                    position=Vec3(p.x, 0.0, p.z),
                    yaw=yaw,
                    born_t=born,
                    alpha=min(alpha, 1.0),
                )
            )
    return markers


def head_gaze(
    world: WorldPose,
    length: float = DEFAULT_GAZE_LENGTH,
    head_joint: str = "head",
) -> GazeRay:
    """Ray from the head along its rotated forward (+Z) axis."""
    for name, pos, rot in world:
        if name == head_joint:
            return GazeRay(origin=pos, direction=rot.rotate(FORWARD), length=length)
    raise VizError(f"no joint named {head_joint!r} in pose")


def first_person_anchor(
    user_head: tuple[Vec3, UnitQuat],
    avatar_head: tuple[Vec3, UnitQuat],
    mode: AnchorMode = AnchorMode.TRANSLATION_ONLY,
) -> FirstPersonAnchor:
    """Transform that lands the avatar head on the user head.

    TRANSLATION_ONLY keeps the world level regardless of head roll;
    TRANSLATION_PLUS_YAW also aligns the horizontal headings.
    """
    user_pos, user_rot = user_head
    avatar_pos, avatar_rot = avatar_head
    if mode is AnchorMode.TRANSLATION_ONLY:
        transform = RigidTransform(UnitQuat.identity(), user_pos - avatar_pos)
    else:
        rotation = yaw_quat(yaw_about_up(user_rot) - yaw_about_up(avatar_rot))
        transform = RigidTransform(rotation, user_pos - rotation.rotate(avatar_pos))
    return FirstPersonAnchor(transform=transform, mode=mode)


@dataclass(frozen=True)
class ScenePrimitive:
    """Tagged visualization element with RGBA and a timestamp."""

    kind: str
    payload: dict
    rgba: RGBA = (1.0, 1.0, 1.0, 1.0)
    t: float = 0.0


def polyline_primitive(traj: TrajectoryPolyline, t: float, rgba: RGBA = TRAJECTORY_RGBA) -> ScenePrimitive:
    return ScenePrimitive(
        kind="polyline",
        payload={
            "joint": traj.joint,
            "points": [
                {"pos": list(p.position.as_tuple()), "alpha": p.alpha, "t": p.t}
                for p in traj.points
            ],
        },
        rgba=rgba,
        t=t,
    )


def ground_disc_primitive(
    marker: FootprintMarker, t: float, radius: float = DEFAULT_FOOTPRINT_RADIUS
) -> ScenePrimitive:
    r, g, b, a = marker.color
    return ScenePrimitive(
        kind="ground_disc",
        payload={
            "foot": marker.foot.value,
            "pos": list(marker.position.as_tuple()),
            "yaw": marker.yaw,
            "radius": radius,
            "born_t": marker.born_t,
        },
        rgba=(r, g, b, a * marker.alpha),
        t=t,
    )


def ray_primitive(ray: GazeRay, t: float, rgba: RGBA = GAZE_RGBA) -> ScenePrimitive:
    return ScenePrimitive(
        kind="ray",
        payload={
            "origin": list(ray.origin.as_tuple()),
            "direction": list(ray.direction.as_tuple()),
            "length": ray.length,
        },
        rgba=rgba,
        t=t,
    )


def indicator_sphere_primitive(
    joint: str,
    color: IndicatorColor,
    position: Vec3,
    t: float,
    radius: float = DEFAULT_INDICATOR_RADIUS,
) -> ScenePrimitive:
    return ScenePrimitive(
        kind="indicator_sphere",
        payload={
            "joint": joint,
            "color": color.value,
            "pos": list(position.as_tuple()),
            "radius": radius,
        },
        rgba=INDICATOR_RGBA[color],
        t=t,
    )


def export_scene(primitives: list[ScenePrimitive]) -> str:
    """Deterministic JSON array of primitives; identical input, identical bytes."""
    doc = [
        {"kind": p.kind, **p.payload, "rgba": list(p.rgba), "t": p.t}
        for p in primitives
    ]
    return dumps(doc)
