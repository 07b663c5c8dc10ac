"""motionguide: a hardware-free skeletal motion comparison engine.

Compares a user's motion stream against an instructor clip, producing
0-100 pose-match scores, per-limb indicator colors, embodied temporal
navigation, visualization geometry, and automated motion-quality checks.
"""

from .core import (
    MotionClip,
    PoseFrame,
    Joint,
    RigidTransform,
    Skeleton,
    UnitQuat,
    Vec3,
    clip_duration,
    forward_kinematics,
    sample_pose,
    slerp,
)
from .bvh import parse_bvh, serialize_bvh
from .compare import (
    CompareConfig,
    IndicatorColor,
    LIMBS,
    ScoreReport,
    joint_difference,
    limb_indicator,
    pose_score,
    smoothed_score,
)
from .errors import MotionGuideError
from .jointmap import JointMapTable, default_kinect_map, identity_joint_map, load_joint_map
from .navigate import (
    NavConfig,
    NavEvent,
    NavEventKind,
    NavState,
    build_checkpoints,
    nav_step,
    run_navigation,
)
from .quality import QualityConfig, QualityReport, check_clip, summarize
from .retarget import NormalizedPose, normalize, resample, retarget
from .session import (
    FeedbackFrame,
    LogFormat,
    SessionConfig,
    SessionLog,
    SessionMode,
    run_session,
    write_log,
)
from .skeletons import CANONICAL_JOINTS, canonical_skeleton, kinect32_skeleton
from .streams import StreamFrameRecord, parse_joint_stream, serialize_joint_stream
from .viz import (
    AnchorMode,
    FirstPersonAnchor,
    FootprintMarker,
    GazeRay,
    ScenePrimitive,
    TrajectoryPolyline,
    export_scene,
    first_person_anchor,
    footprints,
    head_gaze,
    trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorMode",
    "CANONICAL_JOINTS",
    "CompareConfig",
    "FeedbackFrame",
    "FirstPersonAnchor",
    "FootprintMarker",
    "GazeRay",
    "IndicatorColor",
    "Joint",
    "JointMapTable",
    "LIMBS",
    "LogFormat",
    "MotionClip",
    "MotionGuideError",
    "NavConfig",
    "NavEvent",
    "NavEventKind",
    "NavState",
    "NormalizedPose",
    "PoseFrame",
    "QualityConfig",
    "QualityReport",
    "RigidTransform",
    "ScenePrimitive",
    "ScoreReport",
    "SessionConfig",
    "SessionLog",
    "SessionMode",
    "Skeleton",
    "StreamFrameRecord",
    "TrajectoryPolyline",
    "UnitQuat",
    "Vec3",
    "build_checkpoints",
    "canonical_skeleton",
    "check_clip",
    "clip_duration",
    "default_kinect_map",
    "export_scene",
    "first_person_anchor",
    "footprints",
    "forward_kinematics",
    "head_gaze",
    "identity_joint_map",
    "joint_difference",
    "kinect32_skeleton",
    "limb_indicator",
    "load_joint_map",
    "nav_step",
    "normalize",
    "parse_bvh",
    "parse_joint_stream",
    "pose_score",
    "resample",
    "retarget",
    "run_navigation",
    "run_session",
    "sample_pose",
    "serialize_bvh",
    "serialize_joint_stream",
    "slerp",
    "smoothed_score",
    "summarize",
    "trajectory",
    "write_log",
]
