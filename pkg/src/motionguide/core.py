"""Core motion types and 3D math.

Conventions used throughout the package:

- right-handed coordinates, Y up, Z forward, distances in meters
- angles in radians internally; file formats surface degrees where the
  format dictates
- quaternions are stored (w, x, y, z) and always unit within 1e-6
- joint rotations in a :class:`PoseFrame` are local; world poses are
  always derived by :func:`forward_kinematics`
- all types are immutable value data after construction and every
  operation is a pure function, so everything here is safe to share
  across threads
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, StructureError

_UNIT_TOL = 1e-6


@dataclass(frozen=True)
class Vec3:
    """3D vector; meters for positions, unitless for directions."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise DomainError(f"non-finite vector ({self.x}, {self.y}, {self.z})")

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n < 1e-12:
            raise DomainError("cannot normalize a near-zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def distance_to(self, other: "Vec3") -> float:
        return (self - other).norm()

    def lerp(self, other: "Vec3", t: float) -> "Vec3":
        return Vec3(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
            self.z + (other.z - self.z) * t,
        )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


ZERO = Vec3(0.0, 0.0, 0.0)
UP = Vec3(0.0, 1.0, 0.0)
FORWARD = Vec3(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class UnitQuat:
    """Unit quaternion (w, x, y, z) representing a 3D rotation."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)
        if abs(n - 1.0) > _UNIT_TOL:
            raise DomainError(f"quaternion norm {n} is not unit within {_UNIT_TOL}")

    @staticmethod
    def identity() -> "UnitQuat":
        return UnitQuat(1.0, 0.0, 0.0, 0.0)

    @staticmethod
    def from_axis_angle(axis: Vec3, angle: float) -> "UnitQuat":
        """Rotation of `angle` radians about `axis` (need not be unit)."""
        a = axis.normalized()
        h = 0.5 * angle
        s = math.sin(h)
        return UnitQuat(math.cos(h), a.x * s, a.y * s, a.z * s)

    def __mul__(self, other: "UnitQuat") -> "UnitQuat":
        """Hamilton product: (a * b).rotate(v) == a.rotate(b.rotate(v))."""
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = other.w, other.x, other.y, other.z
        return UnitQuat(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def conjugate(self) -> "UnitQuat":
        return UnitQuat(self.w, -self.x, -self.y, -self.z)

    def dot(self, other: "UnitQuat") -> float:
        return self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z

    def negate(self) -> "UnitQuat":
        return UnitQuat(-self.w, -self.x, -self.y, -self.z)

    def rotate(self, v: Vec3) -> Vec3:
        # v' = v + 2w(q_v x v) + 2 q_v x (q_v x v)
        qx, qy, qz = self.x, self.y, self.z
        tx = 2.0 * (qy * v.z - qz * v.y)
        ty = 2.0 * (qz * v.x - qx * v.z)
        tz = 2.0 * (qx * v.y - qy * v.x)
        return Vec3(
            v.x + self.w * tx + (qy * tz - qz * ty),
            v.y + self.w * ty + (qz * tx - qx * tz),
            v.z + self.w * tz + (qx * ty - qy * tx),
        )

    def to_matrix(self) -> tuple[tuple[float, float, float], ...]:
        """3x3 rotation matrix, row-major."""
        w, x, y, z = self.w, self.x, self.y, self.z
        return (
            (1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)),
            (2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)),
            (2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)),
        )

    def normalized(self) -> "UnitQuat":
        n = math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)
        return UnitQuat(self.w / n, self.x / n, self.y / n, self.z / n)


def _unit(w: float, x: float, y: float, z: float) -> UnitQuat:
    n = math.sqrt(w * w + x * x + y * y + z * z)
    return UnitQuat(w / n, x / n, y / n, z / n)


_AXES = {"X": Vec3(1.0, 0.0, 0.0), "Y": Vec3(0.0, 1.0, 0.0), "Z": Vec3(0.0, 0.0, 1.0)}


def _canonical_sign(w: float, x: float, y: float, z: float) -> UnitQuat:
    # q and -q are one rotation; fix the sign so equal Euler inputs always
    # yield byte-identical quaternions (first nonzero component positive).
    for c in (w, x, y, z):
        if c > 0.0:
            break
        if c < 0.0:
            w, x, y, z = -w, -x, -y, -z
            break
    n = math.sqrt(w * w + x * x + y * y + z * z)
    return UnitQuat(w / n, x / n, y / n, z / n)


def euler_to_quat(order: str, angles_deg: tuple[float, float, float]) -> UnitQuat:
    """Compose intrinsic rotations listed in `order` (e.g. "ZXY"), degrees."""
    if len(order) != 3 or any(c not in _AXES for c in order):
        raise DomainError(f"bad rotation order {order!r}")
    q = UnitQuat.identity()
    for axis_name, deg in zip(order, angles_deg):
        q = q * UnitQuat.from_axis_angle(_AXES[axis_name], math.radians(deg))
    return _canonical_sign(q.w, q.x, q.y, q.z)


def quat_to_euler_zxy(q: UnitQuat) -> tuple[float, float, float]:
    """Decompose into intrinsic Z, X, Y angles in degrees (R = Rz Rx Ry)."""
    m = q.to_matrix()
    sx = max(-1.0, min(1.0, m[2][1]))
    x = math.asin(sx)
    if abs(sx) < 1.0 - 1e-7:
        z = math.atan2(-m[0][1], m[1][1])
        y = math.atan2(-m[2][0], m[2][2])
    else:
        # gimbal lock: only z +/- y is observable, put it all in z
        y = 0.0
        z = math.atan2(m[1][0], m[0][0])
    return (math.degrees(z), math.degrees(x), math.degrees(y))


def yaw_about_up(q: UnitQuat, reference: Vec3 = FORWARD) -> float:
    """Heading of a rotated reference direction, radians about +Y from +Z."""
    d = q.rotate(reference)
    if d.x * d.x + d.z * d.z < 1e-18:
        # reference ended up vertical; fall back to where "up" leans
        d = q.rotate(UP)
    return math.atan2(d.x, d.z)


def yaw_quat(angle: float) -> UnitQuat:
    """Rotation of `angle` radians about the vertical (+Y) axis."""
    h = 0.5 * angle
    return UnitQuat(math.cos(h), 0.0, math.sin(h), 0.0)


def slerp(a: UnitQuat, b: UnitQuat, t: float) -> UnitQuat:
    """Shortest-arc spherical interpolation; slerp(a,b,0)=a, slerp(a,b,1)=b."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"slerp parameter {t} outside [0, 1]")
    dot = a.dot(b)
    if dot < 0.0:
        b = b.negate()
        dot = -dot
    if t == 0.0:
        return a
    if t == 1.0:
        return b
    if dot > 0.9995:
        # nearly parallel: normalized lerp avoids sin(theta) ~ 0
        return _unit(
            a.w + (b.w - a.w) * t,
            a.x + (b.x - a.x) * t,
            a.y + (b.y - a.y) * t,
            a.z + (b.z - a.z) * t,
        )
    theta = math.acos(min(1.0, dot))
    s = math.sin(theta)
    ka = math.sin((1.0 - t) * theta) / s
    kb = math.sin(t * theta) / s
    return _unit(
        ka * a.w + kb * b.w,
        ka * a.x + kb * b.x,
        ka * a.y + kb * b.y,
        ka * a.z + kb * b.z,
    )


@dataclass(frozen=True)
class RigidTransform:
    """Rotation followed by translation: apply(v) = R v + t."""

    rotation: UnitQuat
    translation: Vec3

    @staticmethod
    def identity() -> "RigidTransform":
        return RigidTransform(UnitQuat.identity(), ZERO)

    def apply(self, v: Vec3) -> Vec3:
        return self.rotation.rotate(v) + self.translation

    def compose(self, inner: "RigidTransform") -> "RigidTransform":
        """self after inner: compose(inner).apply(v) == self.apply(inner.apply(v))."""
        return RigidTransform(
            (self.rotation * inner.rotation).normalized(),
            self.rotation.rotate(inner.translation) + self.translation,
        )


@dataclass(frozen=True)
class Joint:
    """One skeleton joint: name, parent index (None for root), rest offset."""

    name: str
    parent: int | None
    offset: Vec3


@dataclass
class Skeleton:
    """Named joint hierarchy in topological order (parent index < own index).

    `end_sites` keeps BVH End Site offsets (keyed by parent joint index) so
    parsed files serialize back faithfully; they are not joints.
    """

    joints: list[Joint]
    up_axis: str = "Y"
    forward_axis: str = "Z"
    end_sites: dict[int, Vec3] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.joints) < 2:
            raise StructureError("skeleton needs at least 2 joints")
        roots = [i for i, j in enumerate(self.joints) if j.parent is None]
        if len(roots) != 1 or roots[0] != 0:
            raise StructureError("skeleton must have exactly one root, first in order")
        names = set()
        for i, j in enumerate(self.joints):
            if j.parent is not None:
                if not 0 <= j.parent < i:
                    raise StructureError(f"joint {j.name!r}: parent index {j.parent} not before {i}")
                if j.offset.norm() <= 0.0:
                    raise StructureError(f"joint {j.name!r}: bone length must be positive")
            if j.name in names:
                raise StructureError(f"duplicate joint name {j.name!r}")
            names.add(j.name)

    @property
    def names(self) -> list[str]:
        return [j.name for j in self.joints]

    def index_of(self, name: str) -> int:
        for i, j in enumerate(self.joints):
            if j.name == name:
                return i
        raise StructureError(f"no joint named {name!r}")


@dataclass
class PoseFrame:
    """Root position plus one local rotation per skeleton joint."""

    root_position: Vec3
    joint_rotations: list[UnitQuat]


@dataclass
class MotionClip:
    """Time-ordered pose frames over one skeleton at a fixed frame rate."""

    skeleton: Skeleton
    frames: list[PoseFrame]
    fps: float

    def __post_init__(self):
        if not self.frames:
            raise StructureError("clip needs at least one frame")
        if not (math.isfinite(self.fps) and self.fps > 0):
            raise StructureError(f"fps must be finite and positive, got {self.fps}")
        n = len(self.skeleton.joints)
        for k, f in enumerate(self.frames):
            if len(f.joint_rotations) != n:
                raise StructureError(
                    f"frame {k} has {len(f.joint_rotations)} rotations for {n} joints"
                )


WorldPose = list[tuple[str, Vec3, UnitQuat]]


def forward_kinematics(skeleton: Skeleton, frame: PoseFrame) -> WorldPose:
    """World position and rotation per joint, accumulated root to leaf.

    Positions accumulate root-relative and the root position is added
    once per joint, which makes the result exactly translation-
    equivariant in the root position.
    """
    joints = skeleton.joints
    if len(frame.joint_rotations) != len(joints):
        raise StructureError(
            f"frame has {len(frame.joint_rotations)} rotations for {len(joints)} joints"
        )
    relative: list[Vec3] = [ZERO] * len(joints)
    rotations: list[UnitQuat] = [UnitQuat.identity()] * len(joints)
    out: WorldPose = []
    for i, joint in enumerate(joints):
        if joint.parent is None:
            rotations[i] = frame.joint_rotations[i]
        else:
            p = joint.parent
            relative[i] = relative[p] + rotations[p].rotate(joint.offset)
            rotations[i] = rotations[p] * frame.joint_rotations[i]
        out.append((joint.name, frame.root_position + relative[i], rotations[i]))
    return out


def clip_duration(clip: MotionClip) -> float:
    """Clip length in seconds: (frame_count - 1) / fps."""
    return (len(clip.frames) - 1) / clip.fps


def sample_pose(clip: MotionClip, t: float) -> PoseFrame:
    """Pose at time t, clamped to the clip; lerp root, slerp joint rotations.

    Exact frame times return the stored frame unchanged.
    """
    duration = clip_duration(clip)
    t = min(max(t, 0.0), duration)
    f = t * clip.fps
    i0 = int(math.floor(f))
    if i0 >= len(clip.frames) - 1:
        return clip.frames[-1]
    u = f - i0
    if u == 0.0:
        return clip.frames[i0]
    a, b = clip.frames[i0], clip.frames[i0 + 1]
    return PoseFrame(
        root_position=a.root_position.lerp(b.root_position, u),
        joint_rotations=[slerp(qa, qb, u) for qa, qb in zip(a.joint_rotations, b.joint_rotations)],
    )
