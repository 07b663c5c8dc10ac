"""Deterministic offline session simulator.

Replays a user performance against an instructor clip and logs one
feedback frame per tick: score report, smoothed score, limb indicator
colors, and (in navigation mode) the navigation state and events.

`SessionEngine` is the single per-tick pipeline. The offline simulator
folds it over a user clip's frames; the streaming server feeds it live
records. Both paths therefore produce field-for-field identical feedback
for the same data, which is the server's core correctness property.

Follow-along mode compares user tick t against instructor tick t with no
temporal warping and ends at the shorter clip. Navigation mode applies
the checkpoint state machine from `navigate`.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Mapping

from .compare import (
    CompareConfig,
    IndicatorColor,
    ScoreReport,
    all_indicators,
    pose_score,
    smoothed_score,
)
from .core import MotionClip, WorldPose, forward_kinematics
from .errors import DomainError, MotionGuideError, SessionError
from .jointmap import JointMapTable, identity_joint_map
from .jsonfmt import dumps, fmt_float
from .navigate import (
    NavConfig,
    NavEvent,
    NavEventKind,
    NavState,
    build_checkpoints,
    initial_state,
    nav_step,
)
from .retarget import NormalizedPose, normalize, normalized_pose_at, resample, retarget

DEFAULT_TARGET_FPS = 30.0

CSV_HEADER = "tick,t,total,left_arm,right_arm,left_leg,right_leg,checkpoint"


class SessionMode(enum.Enum):
    FOLLOW_ALONG = "follow_along"
    NAVIGATION = "navigation"


@dataclass
class VizToggles:
    trajectory: bool = False
    footprints: bool = False
    gaze: bool = False
    indicators: bool = True
    score: bool = True

    def to_dict(self) -> dict:
        return {
            "trajectory": self.trajectory,
            "footprints": self.footprints,
            "gaze": self.gaze,
            "indicators": self.indicators,
            "score": self.score,
        }

    @staticmethod
    def from_dict(doc: Mapping) -> "VizToggles":
        base = VizToggles()
        return VizToggles(
            trajectory=bool(doc.get("trajectory", base.trajectory)),
            footprints=bool(doc.get("footprints", base.footprints)),
            gaze=bool(doc.get("gaze", base.gaze)),
            indicators=bool(doc.get("indicators", base.indicators)),
            score=bool(doc.get("score", base.score)),
        )


@dataclass
class SessionConfig:
    mode: SessionMode = SessionMode.FOLLOW_ALONG
    compare: CompareConfig = field(default_factory=CompareConfig)
    nav: NavConfig = field(default_factory=NavConfig)
    viz: VizToggles = field(default_factory=VizToggles)
    target_fps: float = DEFAULT_TARGET_FPS

    def __post_init__(self):
        if not self.target_fps > 0:
            raise DomainError(f"target_fps must be positive, got {self.target_fps}")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "target_fps": self.target_fps,
            "compare": self.compare.to_dict(),
            "nav": self.nav.to_dict(),
            "viz": self.viz.to_dict(),
        }

    @staticmethod
    def from_dict(doc: Mapping) -> "SessionConfig":
        mode_raw = doc.get("mode", SessionMode.FOLLOW_ALONG.value)
        try:
            mode = SessionMode(mode_raw)
        except ValueError:
            raise DomainError(f"unknown session mode {mode_raw!r}") from None
        return SessionConfig(
            mode=mode,
            compare=CompareConfig.from_dict(doc.get("compare", {})),
            nav=NavConfig.from_dict(doc.get("nav", {})),
            viz=VizToggles.from_dict(doc.get("viz", {})),
            target_fps=float(doc.get("target_fps", DEFAULT_TARGET_FPS)),
        )


@dataclass
class FeedbackFrame:
    """One tick of session output."""

    tick: int
    t: float
    score: ScoreReport
    smoothed: float
    indicators: dict[str, IndicatorColor]
    nav: NavState | None = None
    events: list[NavEvent] = field(default_factory=list)


@dataclass
class SessionSummary:
    mean_score: float
    min_score: float
    max_score: float
    completed: bool
    completion_tick: int | None


@dataclass
class SessionLog:
    config: SessionConfig
    frames: list[FeedbackFrame]
    summary: SessionSummary


def summarize_frames(frames: list[FeedbackFrame]) -> SessionSummary:
    """Derive the summary purely from logged frames."""
    if not frames:
        raise DomainError("cannot summarize an empty session")
    totals = [f.score.total for f in frames]
    completion_tick = None
    for f in frames:
        if any(e.kind is NavEventKind.COMPLETED for e in f.events):
            completion_tick = f.tick
            break
    completed = frames[-1].nav.completed if frames[-1].nav is not None else False
    return SessionSummary(
        mean_score=sum(totals) / len(totals),
        min_score=min(totals),
        max_score=max(totals),
        completed=completed,
        completion_tick=completion_tick,
    )


class SessionEngine:
    """Per-tick feedback pipeline shared by the simulator and the server."""

    def __init__(
        self,
        instructor_clip: MotionClip,
        cfg: SessionConfig,
        *,
        user_map: JointMapTable | None = None,
        instructor_map: JointMapTable | None = None,
    ):
        self.cfg = cfg
        self.instructor = resample(instructor_clip, cfg.target_fps)
        self.user_map = user_map
        self.instructor_map = instructor_map
        self.frames: list[FeedbackFrame] = []
        self._history: Deque[ScoreReport] = deque(maxlen=cfg.compare.smoothing_window)
        if cfg.mode is SessionMode.NAVIGATION:
            self.checkpoints = build_checkpoints(self.instructor, cfg.nav)
            self.nav_state = initial_state(self.checkpoints)
            self._checkpoint_poses: dict[int, NormalizedPose] = {}
        else:
            self.checkpoints = []
            self.nav_state = None

    @property
    def follow_length(self) -> int:
        return len(self.instructor.frames)

    def _instructor_pose_at_tick(self, tick: int) -> NormalizedPose:
        frame = self.instructor.frames[tick]
        world = forward_kinematics(self.instructor.skeleton, frame)
        table = self.instructor_map or identity_joint_map(self.instructor.skeleton.names)
        return normalize(retarget(world, table))

    def _checkpoint_pose(self, index: int) -> NormalizedPose:
        pose = self._checkpoint_poses.get(index)
        if pose is None:
            pose = normalized_pose_at(
                self.instructor, self.checkpoints[index], self.instructor_map
            )
            self._checkpoint_poses[index] = pose
        return pose

    def tick(self, user_world: WorldPose) -> FeedbackFrame | None:
        """Process one user pose; None when a follow-along session is over."""
        tick = len(self.frames)
        table = self.user_map or identity_joint_map([n for n, _p, _r in user_world])
        user_pose = normalize(retarget(user_world, table))

        if self.cfg.mode is SessionMode.FOLLOW_ALONG:
            if tick >= self.follow_length:
                return None
            instructor_pose = self._instructor_pose_at_tick(tick)
            report = pose_score(user_pose, instructor_pose, self.cfg.compare)
            self._history.append(report)
            nav_snapshot = None
            events: list[NavEvent] = []
        else:
            instructor_pose = self._checkpoint_pose(self.nav_state.checkpoint_index)
            self.nav_state, events, report = nav_step(
                self.nav_state,
                user_pose,
                self.instructor,
                self.checkpoints,
                self.cfg.nav,
                self.cfg.compare,
                instructor_map=self.instructor_map,
                instructor_pose=instructor_pose,
                score_history=self._history,
                at_tick=tick,
            )
            nav_snapshot = self.nav_state

        frame = FeedbackFrame(
            tick=tick,
            t=tick / self.cfg.target_fps,
            score=report,
            smoothed=smoothed_score(self._history, self.cfg.compare),
            indicators=(
                all_indicators(user_pose, instructor_pose, self.cfg.compare)
                if self.cfg.viz.indicators
                else {}
            ),
            nav=nav_snapshot,
            events=events,
        )
        self.frames.append(frame)
        return frame

    def finish(self) -> SessionLog:
        return SessionLog(
            config=self.cfg, frames=self.frames, summary=summarize_frames(self.frames)
        )


def run_session(
    instructor_clip: MotionClip,
    user_clip: MotionClip,
    table: JointMapTable | None,
    cfg: SessionConfig | None = None,
    *,
    instructor_map: JointMapTable | None = None,
) -> SessionLog:
    """Replay a user clip against an instructor clip; deterministic."""
    cfg = cfg or SessionConfig()
    engine = SessionEngine(
        instructor_clip, cfg, user_map=table, instructor_map=instructor_map
    )
    user = resample(user_clip, cfg.target_fps)
    for tick, frame in enumerate(user.frames):
        try:
            world = forward_kinematics(user.skeleton, frame)
            fb = engine.tick(world)
        except MotionGuideError as exc:
            raise SessionError(f"tick {tick}: {exc}") from exc
        if fb is None:
            break
    return engine.finish()


class LogFormat(enum.Enum):
    JSONL = "jsonl"
    CSV = "csv"


def _event_to_dict(e: NavEvent) -> dict:
    return {
        "kind": e.kind.value,
        "at_tick": e.at_tick,
        "from_checkpoint": e.from_checkpoint,
        "to_checkpoint": e.to_checkpoint,
    }


def _nav_to_dict(s: NavState | None) -> dict | None:
    if s is None:
        return None
    return {
        "checkpoint_index": s.checkpoint_index,
        "playhead_seconds": s.playhead_seconds,
        "consecutive_hits": s.consecutive_hits,
        "completed": s.completed,
    }


def frame_to_dict(f: FeedbackFrame) -> dict:
    return {
        "tick": f.tick,
        "t": f.t,
        "total": f.score.total,
        "display_total": f.score.display_total,
        "per_joint": dict(f.score.per_joint),
        "smoothed": f.smoothed,
        "indicators": {limb: color.value for limb, color in f.indicators.items()},
        "nav": _nav_to_dict(f.nav),
        "events": [_event_to_dict(e) for e in f.events],
    }


def write_log(log: SessionLog, fmt: LogFormat = LogFormat.JSONL) -> str:
    """Serialize a session log; identical logs yield identical bytes."""
    if fmt is LogFormat.JSONL:
        lines = [dumps(frame_to_dict(f)) for f in log.frames]
        lines.append(
            dumps(
                {
                    "summary": {
                        "mean_score": log.summary.mean_score,
                        "min_score": log.summary.min_score,
                        "max_score": log.summary.max_score,
                        "completed": log.summary.completed,
                        "completion_tick": log.summary.completion_tick,
                        "config": log.config.to_dict(),
                    }
                }
            )
        )
        return "\n".join(lines) + "\n"

    lines = [CSV_HEADER]
    for f in log.frames:
        colors = {limb: color.value for limb, color in f.indicators.items()}
        checkpoint = "" if f.nav is None else str(f.nav.checkpoint_index)
        lines.append(
            ",".join(
                [
                    str(f.tick),
                    fmt_float(f.t),
                    fmt_float(f.score.total),
                    colors.get("left_arm", ""),
                    colors.get("right_arm", ""),
                    colors.get("left_leg", ""),
                    colors.get("right_leg", ""),
                    checkpoint,
                ]
            )
        )
    return "\n".join(lines) + "\n"
