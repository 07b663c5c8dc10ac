"""Independent reference implementations used to derive expected values.

Everything here goes through numpy/scipy matrix math rather than the
package's own quaternion code, so a test comparing the two is a real
cross-check, not the implementation agreeing with itself.
"""

from __future__ import annotations

import random

import numpy as np
from scipy.spatial.transform import Rotation, Slerp

from motionguide.core import PoseFrame, Skeleton, UnitQuat, Vec3


def to_rotation(q: UnitQuat) -> Rotation:
    # scipy stores quaternions xyzw
    return Rotation.from_quat([q.x, q.y, q.z, q.w])


def from_rotation(r: Rotation) -> UnitQuat:
    x, y, z, w = r.as_quat()
    return UnitQuat(float(w), float(x), float(y), float(z))


def rotations_close(q: UnitQuat, r: Rotation, tol: float = 1e-6) -> bool:
    m1 = np.array(q.to_matrix())
    m2 = r.as_matrix()
    return bool(np.max(np.abs(m1 - m2)) < tol)


def quats_close_up_to_sign(a: UnitQuat, b: UnitQuat, tol: float = 1e-6) -> bool:
    va = np.array([a.w, a.x, a.y, a.z])
    vb = np.array([b.w, b.x, b.y, b.z])
    return bool(np.max(np.abs(va - vb)) < tol or np.max(np.abs(va + vb)) < tol)


def fk_oracle(skeleton: Skeleton, frame: PoseFrame) -> list[tuple[str, np.ndarray, Rotation]]:
    """Forward kinematics via homogeneous 4x4 matrices."""
    out: list[tuple[str, np.ndarray, Rotation]] = []
    transforms: list[np.ndarray] = []
    for i, joint in enumerate(skeleton.joints):
        local = np.eye(4)
        local[:3, :3] = to_rotation(frame.joint_rotations[i]).as_matrix()
        if joint.parent is None:
            local[:3, 3] = [frame.root_position.x, frame.root_position.y, frame.root_position.z]
            world = local
        else:
            local[:3, 3] = [joint.offset.x, joint.offset.y, joint.offset.z]
            world = transforms[joint.parent] @ local
        transforms.append(world)
        out.append((joint.name, world[:3, 3].copy(), Rotation.from_matrix(world[:3, :3])))
    return out


def slerp_oracle(a: UnitQuat, b: UnitQuat, t: float) -> Rotation:
    keys = Rotation.concatenate([to_rotation(a), to_rotation(b)])
    return Slerp([0.0, 1.0], keys)([t])[0]


def euler_oracle(order: str, angles_deg: tuple[float, float, float]) -> Rotation:
    # uppercase order = intrinsic rotations in scipy
    return Rotation.from_euler(order.upper(), angles_deg, degrees=True)


def random_unit_quat(rng: random.Random) -> UnitQuat:
    while True:
        w, x, y, z = (rng.gauss(0, 1) for _ in range(4))
        n = (w * w + x * x + y * y + z * z) ** 0.5
        if n > 1e-6:
            return UnitQuat(w / n, x / n, y / n, z / n)


def random_vec3(rng: random.Random, lo: float = -2.0, hi: float = 2.0) -> Vec3:
    return Vec3(rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi))
