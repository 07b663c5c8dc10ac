"""Embodied temporal navigation.

The instructor clip is divided into checkpoints spaced `step_seconds`
apart. Playback holds at the current checkpoint until the user's
(optionally smoothed) score against the frozen checkpoint pose stays at
or above the threshold for `hold_frames` consecutive ticks; the playhead
then jumps one checkpoint forward. The hold requirement debounces
single-frame tracker spikes.

Raise the threshold when accuracy matters; shrink the step to study a
short passage in detail, widen it to skim a long clip.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, replace
from typing import Deque, Mapping, Sequence

from .compare import CompareConfig, ScoreReport, pose_score, smoothed_score
from .core import MotionClip, clip_duration
from .errors import DomainError
from .jointmap import JointMapTable
from .retarget import NormalizedPose, normalized_pose_at

FINE_STEP_SECONDS = 0.5
COARSE_STEP_SECONDS = 2.0
HIGH_ACCURACY_THRESHOLD = 85.0


@dataclass
class NavConfig:
    threshold: float = 70.0
    step_seconds: float = COARSE_STEP_SECONDS
    hold_frames: int = 5
    use_smoothed: bool = True

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 100.0:
            raise DomainError(f"threshold {self.threshold} outside [0, 100]")
        if not self.step_seconds > 0:
            raise DomainError(f"step_seconds must be positive, got {self.step_seconds}")
        if not (isinstance(self.hold_frames, int) and self.hold_frames >= 1):
            raise DomainError("hold_frames must be an integer >= 1")

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "step_seconds": self.step_seconds,
            "hold_frames": self.hold_frames,
            "use_smoothed": self.use_smoothed,
        }

    @staticmethod
    def from_dict(doc: Mapping) -> "NavConfig":
        cfg = NavConfig()
        return NavConfig(
            threshold=float(doc.get("threshold", cfg.threshold)),
            step_seconds=float(doc.get("step_seconds", cfg.step_seconds)),
            hold_frames=int(doc.get("hold_frames", cfg.hold_frames)),
            use_smoothed=bool(doc.get("use_smoothed", cfg.use_smoothed)),
        )


class NavEventKind(enum.Enum):
    ADVANCED = "advanced"
    COMPLETED = "completed"


@dataclass(frozen=True)
class NavEvent:
    kind: NavEventKind
    at_tick: int
    from_checkpoint: int
    to_checkpoint: int


@dataclass(frozen=True)
class NavState:
    checkpoint_index: int = 0
    playhead_seconds: float = 0.0
    consecutive_hits: int = 0
    completed: bool = False


def initial_state(checkpoints: Sequence[float]) -> NavState:
    if not checkpoints:
        raise DomainError("checkpoint list is empty")
    return NavState(completed=len(checkpoints) == 1)


def build_checkpoints(clip: MotionClip, cfg: NavConfig) -> list[float]:
    """Checkpoint times {0, step, 2*step, ...} ending exactly at clip end."""
    duration = clip_duration(clip)
    if duration == 0.0:
        return [0.0]
    if cfg.step_seconds > duration:
        raise DomainError(
            f"step_seconds {cfg.step_seconds} exceeds clip duration {duration:.4f}"
        )
    times = [k * cfg.step_seconds for k in range(int(math.floor(duration / cfg.step_seconds)) + 1)]
    if duration - times[-1] > 1e-9:
        times.append(duration)
    else:
        times[-1] = duration
    return times


def nav_step(
    state: NavState,
    user_pose: NormalizedPose,
    instructor_clip: MotionClip,
    checkpoints: Sequence[float],
    cfg: NavConfig,
    compare_cfg: CompareConfig | None = None,
    *,
    instructor_map: JointMapTable | None = None,
    instructor_pose: NormalizedPose | None = None,
    score_history: Deque[ScoreReport] | None = None,
    at_tick: int = 0,
) -> tuple[NavState, list[NavEvent], ScoreReport]:
    """Advance the state machine by one tick.

    Scores the user against the frozen checkpoint pose; a completed state
    is still scored (for display) but never changes or emits events. The
    report is returned so callers can log it without rescoring, and a
    precomputed `instructor_pose` (the current checkpoint's normalized
    pose) skips resampling it.
    """
    compare_cfg = compare_cfg or CompareConfig()
    if instructor_pose is None:
        instructor_pose = normalized_pose_at(
            instructor_clip, checkpoints[state.checkpoint_index], instructor_map
        )
    report = pose_score(user_pose, instructor_pose, compare_cfg)
    if score_history is not None:
        score_history.append(report)
        effective = smoothed_score(score_history, compare_cfg) if cfg.use_smoothed else report.total
    else:
        effective = report.total

    if state.completed:
        return state, [], report

    if effective >= cfg.threshold:
        hits = state.consecutive_hits + 1
    else:
        hits = 0

    if hits < cfg.hold_frames:
        return replace(state, consecutive_hits=hits), [], report

    nxt = state.checkpoint_index + 1
    duration = clip_duration(instructor_clip)
    new_state = NavState(
        checkpoint_index=nxt,
        playhead_seconds=min(checkpoints[nxt], duration),
        consecutive_hits=0,
        completed=nxt == len(checkpoints) - 1,
    )
    events = [NavEvent(NavEventKind.ADVANCED, at_tick, state.checkpoint_index, nxt)]
    if new_state.completed:
        events.append(NavEvent(NavEventKind.COMPLETED, at_tick, state.checkpoint_index, nxt))
    return new_state, events, report


def run_navigation(
    instructor_clip: MotionClip,
    user_clip: MotionClip,
    nav_cfg: NavConfig | None = None,
    compare_cfg: CompareConfig | None = None,
    *,
    instructor_map: JointMapTable | None = None,
    user_map: JointMapTable | None = None,
) -> tuple[NavState, list[NavEvent]]:
    """Fold nav_step over the user clip's frames; deterministic."""
    from .core import forward_kinematics
    from .jointmap import identity_joint_map
    from .retarget import normalize, retarget

    nav_cfg = nav_cfg or NavConfig()
    compare_cfg = compare_cfg or CompareConfig()
    if user_clip.fps != instructor_clip.fps:
        raise DomainError(
            f"clip rates differ ({user_clip.fps} vs {instructor_clip.fps}); resample first"
        )
    checkpoints = build_checkpoints(instructor_clip, nav_cfg)
    state = initial_state(checkpoints)
    history: Deque[ScoreReport] = deque(maxlen=compare_cfg.smoothing_window)
    if user_map is None:
        user_map = identity_joint_map(user_clip.skeleton.names)

    events: list[NavEvent] = []
    for tick, frame in enumerate(user_clip.frames):
        user_pose = normalize(retarget(forward_kinematics(user_clip.skeleton, frame), user_map))
        state, new_events, _report = nav_step(
            state,
            user_pose,
            instructor_clip,
            checkpoints,
            nav_cfg,
            compare_cfg,
            instructor_map=instructor_map,
            score_history=history,
            at_tick=tick,
        )
        events.extend(new_events)
        if state.completed:
            break
    return state, events
