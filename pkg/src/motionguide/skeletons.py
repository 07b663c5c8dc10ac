"""Built-in skeleton definitions.

The canonical 20-joint body model is the common target both performer
streams are mapped onto before any comparison:

    pelvis, spine, chest, neck, head, nose,
    left_shoulder,  left_elbow,  left_wrist,
    right_shoulder, right_elbow, right_wrist,
    left_hip,  left_knee,  left_ankle,  left_foot,
    right_hip, right_knee, right_ankle, right_foot

`nose` exists so every canonical joint has a distinct counterpart in the
32-joint depth-camera skeleton; it is optional for all comparison math.

The 32-joint skeleton mirrors the Azure Kinect body-tracking joint set
(including its "spine_naval" spelling). Offsets on both rigs are nominal
adult proportions in meters; streams carry their own root motion and
rotations on top of these rest offsets.
"""

from __future__ import annotations

from .core import Joint, Skeleton, Vec3

CANONICAL_SKELETON_ID = "canonical20"
KINECT_SKELETON_ID = "kinect32"

CANONICAL_JOINTS: tuple[str, ...] = (
    "pelvis",
    "spine",
    "chest",
    "neck",
    "head",
    "nose",
    "left_shoulder",
    "left_elbow",
    "left_wrist",
    "right_shoulder",
    "right_elbow",
    "right_wrist",
    "left_hip",
    "left_knee",
    "left_ankle",
    "left_foot",
    "right_hip",
    "right_knee",
    "right_ankle",
    "right_foot",
)

# name -> (parent name, rest offset in meters); +X is the body's left side
_CANONICAL_TREE: dict[str, tuple[str | None, Vec3]] = {
    "pelvis": (None, Vec3(0.0, 0.0, 0.0)),
    "spine": ("pelvis", Vec3(0.0, 0.14, 0.0)),
    "chest": ("spine", Vec3(0.0, 0.16, 0.0)),
    "neck": ("chest", Vec3(0.0, 0.18, 0.0)),
    "head": ("neck", Vec3(0.0, 0.12, 0.0)),
    "nose": ("head", Vec3(0.0, 0.04, 0.10)),
    "left_shoulder": ("chest", Vec3(0.18, 0.12, 0.0)),
    "left_elbow": ("left_shoulder", Vec3(0.28, 0.0, 0.0)),
    "left_wrist": ("left_elbow", Vec3(0.25, 0.0, 0.0)),
    "right_shoulder": ("chest", Vec3(-0.18, 0.12, 0.0)),
    "right_elbow": ("right_shoulder", Vec3(-0.28, 0.0, 0.0)),
    "right_wrist": ("right_elbow", Vec3(-0.25, 0.0, 0.0)),
    "left_hip": ("pelvis", Vec3(0.09, -0.05, 0.0)),
    "left_knee": ("left_hip", Vec3(0.0, -0.42, 0.0)),
    "left_ankle": ("left_knee", Vec3(0.0, -0.40, 0.0)),
    "left_foot": ("left_ankle", Vec3(0.0, -0.05, 0.13)),
    "right_hip": ("pelvis", Vec3(-0.09, -0.05, 0.0)),
    "right_knee": ("right_hip", Vec3(0.0, -0.42, 0.0)),
    "right_ankle": ("right_knee", Vec3(0.0, -0.40, 0.0)),
    "right_foot": ("right_ankle", Vec3(0.0, -0.05, 0.13)),
}

KINECT_JOINTS: tuple[str, ...] = (
    "pelvis",
    "spine_naval",
    "spine_chest",
    "neck",
    "head",
    "nose",
    "eye_left",
    "ear_left",
    "eye_right",
    "ear_right",
    "clavicle_left",
    "shoulder_left",
    "elbow_left",
    "wrist_left",
    "hand_left",
    "handtip_left",
    "thumb_left",
    "clavicle_right",
    "shoulder_right",
    "elbow_right",
    "wrist_right",
    "hand_right",
    "handtip_right",
    "thumb_right",
    "hip_left",
    "knee_left",
    "ankle_left",
    "foot_left",
    "hip_right",
    "knee_right",
    "ankle_right",
    "foot_right",
)

_KINECT_TREE: dict[str, tuple[str | None, Vec3]] = {
    "pelvis": (None, Vec3(0.0, 0.0, 0.0)),
    "spine_naval": ("pelvis", Vec3(0.0, 0.14, 0.0)),
    "spine_chest": ("spine_naval", Vec3(0.0, 0.16, 0.0)),
    "neck": ("spine_chest", Vec3(0.0, 0.18, 0.0)),
    "head": ("neck", Vec3(0.0, 0.12, 0.0)),
    "nose": ("head", Vec3(0.0, 0.04, 0.10)),
    "eye_left": ("head", Vec3(0.03, 0.05, 0.08)),
    "ear_left": ("head", Vec3(0.07, 0.03, 0.0)),
    "eye_right": ("head", Vec3(-0.03, 0.05, 0.08)),
    "ear_right": ("head", Vec3(-0.07, 0.03, 0.0)),
    "clavicle_left": ("spine_chest", Vec3(0.06, 0.10, 0.0)),
    "shoulder_left": ("clavicle_left", Vec3(0.12, 0.02, 0.0)),
    "elbow_left": ("shoulder_left", Vec3(0.28, 0.0, 0.0)),
    "wrist_left": ("elbow_left", Vec3(0.25, 0.0, 0.0)),
    "hand_left": ("wrist_left", Vec3(0.08, 0.0, 0.0)),
    "handtip_left": ("hand_left", Vec3(0.08, 0.0, 0.0)),
    "thumb_left": ("hand_left", Vec3(0.03, 0.0, 0.04)),
    "clavicle_right": ("spine_chest", Vec3(-0.06, 0.10, 0.0)),
    "shoulder_right": ("clavicle_right", Vec3(-0.12, 0.02, 0.0)),
    "elbow_right": ("shoulder_right", Vec3(-0.28, 0.0, 0.0)),
    "wrist_right": ("elbow_right", Vec3(-0.25, 0.0, 0.0)),
    "hand_right": ("wrist_right", Vec3(-0.08, 0.0, 0.0)),
    "handtip_right": ("hand_right", Vec3(-0.08, 0.0, 0.0)),
    "thumb_right": ("hand_right", Vec3(-0.03, 0.0, 0.04)),
    "hip_left": ("pelvis", Vec3(0.09, -0.05, 0.0)),
    "knee_left": ("hip_left", Vec3(0.0, -0.42, 0.0)),
    "ankle_left": ("knee_left", Vec3(0.0, -0.40, 0.0)),
    "foot_left": ("ankle_left", Vec3(0.0, -0.05, 0.13)),
    "hip_right": ("pelvis", Vec3(-0.09, -0.05, 0.0)),
    "knee_right": ("hip_right", Vec3(0.0, -0.42, 0.0)),
    "ankle_right": ("knee_right", Vec3(0.0, -0.40, 0.0)),
    "foot_right": ("ankle_right", Vec3(0.0, -0.05, 0.13)),
}


def _build(names: tuple[str, ...], tree: dict[str, tuple[str | None, Vec3]]) -> Skeleton:
    index = {n: i for i, n in enumerate(names)}
    joints = []
    for name in names:
        parent_name, offset = tree[name]
        parent = None if parent_name is None else index[parent_name]
        joints.append(Joint(name, parent, offset))
    return Skeleton(joints=joints)


def canonical_skeleton() -> Skeleton:
    """The 20-joint comparison skeleton with nominal rest offsets."""
    return _build(CANONICAL_JOINTS, _CANONICAL_TREE)


def kinect32_skeleton() -> Skeleton:
    """The 32-joint depth-camera skeleton with nominal rest offsets."""
    return _build(KINECT_JOINTS, _KINECT_TREE)


def builtin_skeleton(skeleton_id: str) -> Skeleton:
    """Look up a shipped skeleton by id (canonical20 or kinect32)."""
    if skeleton_id == CANONICAL_SKELETON_ID:
        return canonical_skeleton()
    if skeleton_id == KINECT_SKELETON_ID:
        return kinect32_skeleton()
    raise KeyError(f"unknown built-in skeleton {skeleton_id!r}")
