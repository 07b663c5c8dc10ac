"""JSON-lines joint streams: the user-capture file format and wire payload.

One UTF-8 JSON object per line:

    {"t": <seconds>, "joints": [{"name": "...", "pos": [x, y, z],
                                 "rot": [w, x, y, z], "conf": 0.0-1.0}]}

`pos` is a world-space joint position in meters, `rot` a world-space
orientation. `conf` is optional and defaults to 1.0. Timestamps must be
non-negative and strictly increasing across a stream.

Records convert to pose frames on a given skeleton by taking the root
joint's position and turning world rotations into local ones; joints a
record omits inherit their previous value (rest pose before first seen).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .core import MotionClip, PoseFrame, Skeleton, UnitQuat, Vec3, slerp
from .errors import ParseError

DEFAULT_STREAM_FPS = 30.0


@dataclass
class StreamJoint:
    name: str
    position: Vec3
    rotation: UnitQuat
    confidence: float = 1.0


@dataclass
class StreamFrameRecord:
    """One captured frame: timestamp plus world-space joint states."""

    t: float
    joints: list[StreamJoint]
    line: int | None = field(default=None, compare=False)

    def __post_init__(self):
        names = [j.name for j in self.joints]
        if len(names) != len(set(names)):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ParseError(f"duplicate joint names in record: {dup}", self.line)
        if not (math.isfinite(self.t) and self.t >= 0.0):
            raise ParseError(f"timestamp must be non-negative, got {self.t}", self.line)


def parse_stream_record(obj: dict, line: int | None = None) -> StreamFrameRecord:
    """Build a record from a decoded JSON object, validating the schema."""
    try:
        t = float(obj["t"])
        joints = []
        for j in obj["joints"]:
            pos = j["pos"]
            rot = j["rot"]
            conf = float(j.get("conf", 1.0))
            if not 0.0 <= conf <= 1.0:
                raise ParseError(f"confidence {conf} outside [0, 1]", line)
            joints.append(
                StreamJoint(
                    name=str(j["name"]),
                    position=Vec3(float(pos[0]), float(pos[1]), float(pos[2])),
                    rotation=UnitQuat(
                        float(rot[0]), float(rot[1]), float(rot[2]), float(rot[3])
                    ),
                    confidence=conf,
                )
            )
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"bad stream record: {exc}", line) from None
    return StreamFrameRecord(t=t, joints=joints, line=line)


def parse_stream_records(text: str) -> list[StreamFrameRecord]:
    """Parse a JSONL stream; blank lines skipped, line numbers preserved."""
    records: list[StreamFrameRecord] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc.msg}", lineno) from None
        rec = parse_stream_record(obj, lineno)
        if records and rec.t <= records[-1].t:
            raise ParseError(
                f"timestamp {rec.t} not increasing (previous {records[-1].t})", lineno
            )
        records.append(rec)
    if not records:
        raise ParseError("stream contains no records", 1)
    return records


class RecordConverter:
    """Stateful record-to-frame conversion with per-joint carry-forward.

    The same converter drives both offline stream parsing and the live
    server path, so a recorded stream replays to identical frames.
    """

    def __init__(self, skeleton: Skeleton):
        self.skeleton = skeleton
        self._index = {j.name: i for i, j in enumerate(skeleton.joints)}
        self._world_rot: list[UnitQuat] = [UnitQuat.identity()] * len(skeleton.joints)
        self._root_pos: Vec3 = skeleton.joints[0].offset

    def convert(self, record: StreamFrameRecord) -> PoseFrame:
        for j in record.joints:
            idx = self._index.get(j.name)
            if idx is None:
                raise ParseError(
                    f"unknown joint {j.name!r} (not in skeleton)", record.line
                )
            self._world_rot[idx] = j.rotation
            if idx == 0:
                self._root_pos = j.position
        locals_: list[UnitQuat] = []
        for i, joint in enumerate(self.skeleton.joints):
            if joint.parent is None:
                locals_.append(self._world_rot[i])
            else:
                locals_.append(
                    (self._world_rot[joint.parent].conjugate() * self._world_rot[i]).normalized()
                )
        return PoseFrame(root_position=self._root_pos, joint_rotations=locals_)


def parse_joint_stream(
    text: str, skeleton: Skeleton, target_fps: float = DEFAULT_STREAM_FPS
) -> MotionClip:
    """Parse a JSONL stream and resample it onto a uniform frame grid.

    Output frame count is floor(duration * target_fps) + 1; positions
    interpolate linearly and rotations by slerp between records.
    """
    if target_fps <= 0:
        raise ParseError(f"target fps must be positive, got {target_fps}", 1)
    records = parse_stream_records(text)
    converter = RecordConverter(skeleton)
    frames = [converter.convert(r) for r in records]
    times = [r.t for r in records]

    if len(frames) == 1:
        return MotionClip(skeleton=skeleton, frames=frames, fps=target_fps)

    t0 = times[0]
    duration = times[-1] - t0
    count = int(math.floor(duration * target_fps)) + 1
    out: list[PoseFrame] = []
    seg = 0
    for k in range(count):
        tg = t0 + k / target_fps
        while seg < len(times) - 2 and times[seg + 1] < tg:
            seg += 1
        ta, tb = times[seg], times[seg + 1]
        if tg <= ta:
            out.append(frames[seg])
            continue
        if tg >= tb:
            out.append(frames[seg + 1])
            continue
        u = (tg - ta) / (tb - ta)
        a, b = frames[seg], frames[seg + 1]
        out.append(
            PoseFrame(
                root_position=a.root_position.lerp(b.root_position, u),
                joint_rotations=[
                    slerp(qa, qb, u)
                    for qa, qb in zip(a.joint_rotations, b.joint_rotations)
                ],
            )
        )
    return MotionClip(skeleton=skeleton, frames=out, fps=target_fps)


def serialize_joint_stream(clip: MotionClip) -> str:
    """Write a clip as a JSONL stream of world-space joint records.

    Floats keep full precision (shortest repr) so a stream generated from
    a clip replays to bit-identical frames.
    """
    from .core import forward_kinematics

    lines = []
    for k, frame in enumerate(clip.frames):
        world = forward_kinematics(clip.skeleton, frame)
        lines.append(
            json.dumps(
                {
                    "t": k / clip.fps,
                    "joints": [
                        {
                            "name": name,
                            "pos": [p.x, p.y, p.z],
                            "rot": [q.w, q.x, q.y, q.z],
                        }
                        for name, p, q in world
                    ],
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + "\n"
