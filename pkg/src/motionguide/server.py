"""Streaming feedback server: newline-delimited JSON over a plain socket.

Wire protocol v1, one UTF-8 JSON object per line, "\\n"-terminated:

client -> server
    {"type": "hello", "protocol_version": 1, "instructor_clip_id": "...",
     "config": {... session config ...},
     "stream_skeleton": "canonical20",        # optional
     "joint_map": {... joint-map table ...}}  # optional
    {"type": "frame", "t": 0.0, "joints": [{"name": ..., "pos": [...],
                                            "rot": [...], "conf": ...}]}
    {"type": "bye"}

server -> client
    {"type": "ready", "session_id": "..."}
    {"type": "feedback", "frame": {... feedback frame ...}}
    {"type": "error", "code": "unknown_clip" | "bad_message" | "version",
     "detail": "..."}

Each frame is answered with exactly one feedback line before the next is
read, so a session is a strictly serial pipeline; concurrent sessions are
fully independent. One incoming frame is one feedback tick: clients
should send at the session's target fps, in which case replaying the same
records through the offline simulator reproduces the feedback sequence
field-for-field.

Clips are served from a registry directory of BVH files addressed by file
stem, so clients never name filesystem paths. On bye or disconnect the
session log is written to the log directory as <session_id>.jsonl.
"""

from __future__ import annotations

import enum
import itertools
import json
import socketserver
import sys
import threading
from pathlib import Path

from .bvh import parse_bvh
from .core import MotionClip, Skeleton, forward_kinematics
from .errors import MotionGuideError
from .jointmap import JointMapTable, load_joint_map
from .jsonfmt import dumps
from .session import SessionConfig, SessionEngine, frame_to_dict, write_log
from .skeletons import builtin_skeleton, CANONICAL_SKELETON_ID
from .streams import RecordConverter, parse_stream_record

PROTOCOL_VERSION = 1


class ErrorCode(enum.Enum):
    UNKNOWN_CLIP = "unknown_clip"
    BAD_MESSAGE = "bad_message"
    VERSION = "version"


def load_registry(directory: str | Path) -> dict[str, MotionClip]:
    """Parse every *.bvh in a directory; clip id is the file stem."""
    registry: dict[str, MotionClip] = {}
    for path in sorted(Path(directory).glob("*.bvh")):
        registry[path.stem] = parse_bvh(path.read_text("utf-8"))
    return registry


def _error_line(code: ErrorCode, detail: str) -> str:
    return dumps({"type": "error", "code": code.value, "detail": detail})


class WireSession:
    """Per-connection protocol state machine, transport-agnostic."""

    def __init__(
        self,
        registry: dict[str, MotionClip],
        session_id: str,
        logs_dir: Path | None = None,
    ):
        self.registry = registry
        self.session_id = session_id
        self.logs_dir = logs_dir
        self.engine: SessionEngine | None = None
        self.converter: RecordConverter | None = None
        self._last_t: float | None = None
        self.closed = False

    def handle_line(self, line: str) -> tuple[str | None, bool]:
        """Process one client line; returns (reply or None, close?)."""
        line = line.strip()
        if not line:
            return None, False
        try:
            msg = json.loads(line)
            if not isinstance(msg, dict):
                raise ValueError("message is not an object")
            msg_type = msg.get("type")
        except (json.JSONDecodeError, ValueError) as exc:
            return _error_line(ErrorCode.BAD_MESSAGE, f"malformed message: {exc}"), True

        if msg_type == "hello":
            return self._handle_hello(msg)
        if msg_type == "frame":
            return self._handle_frame(msg)
        if msg_type == "bye":
            self.finalize()
            return None, True
        return _error_line(ErrorCode.BAD_MESSAGE, f"unknown message type {msg_type!r}"), True

    def _handle_hello(self, msg: dict) -> tuple[str, bool]:
        if self.engine is not None:
            return _error_line(ErrorCode.BAD_MESSAGE, "duplicate hello"), True
        version = msg.get("protocol_version")
        if version != PROTOCOL_VERSION:
            return (
                _error_line(ErrorCode.VERSION, f"unsupported protocol version {version!r}"),
                True,
            )
        clip_id = msg.get("instructor_clip_id")
        clip = self.registry.get(clip_id)
        if clip is None:
            return _error_line(ErrorCode.UNKNOWN_CLIP, f"no clip {clip_id!r} in registry"), True
        try:
            cfg = SessionConfig.from_dict(msg.get("config", {}))
            skeleton = self._stream_skeleton(msg)
            user_map = self._joint_map(msg)
            self.engine = SessionEngine(clip, cfg, user_map=user_map)
            self.converter = RecordConverter(skeleton)
        except (MotionGuideError, KeyError, ValueError, TypeError) as exc:
            return _error_line(ErrorCode.BAD_MESSAGE, f"bad hello: {exc}"), True
        return dumps({"type": "ready", "session_id": self.session_id}), False

    @staticmethod
    def _stream_skeleton(msg: dict) -> Skeleton:
        return builtin_skeleton(str(msg.get("stream_skeleton", CANONICAL_SKELETON_ID)))

    @staticmethod
    def _joint_map(msg: dict) -> JointMapTable | None:
        doc = msg.get("joint_map")
        if doc is None:
            return None
        return load_joint_map(json.dumps(doc))

    def _handle_frame(self, msg: dict) -> tuple[str, bool]:
        if self.engine is None or self.converter is None:
            return _error_line(ErrorCode.BAD_MESSAGE, "frame before hello"), True
        try:
            record = parse_stream_record(msg)
            if self._last_t is not None and record.t <= self._last_t:
                raise MotionGuideError(
                    f"timestamp {record.t} not increasing (previous {self._last_t})"
                )
            self._last_t = record.t
            pose_frame = self.converter.convert(record)
            world = forward_kinematics(self.converter.skeleton, pose_frame)
            feedback = self.engine.tick(world)
        except MotionGuideError as exc:
            self.finalize()
            return _error_line(ErrorCode.BAD_MESSAGE, str(exc)), True
        if feedback is None:
            self.finalize()
            return _error_line(ErrorCode.BAD_MESSAGE, "instructor clip finished"), True
        return dumps({"type": "feedback", "frame": frame_to_dict(feedback)}), False

    def finalize(self) -> None:
        """Write the session log once; safe to call repeatedly."""
        if self.closed:
            return
        self.closed = True
        if self.engine is None or not self.engine.frames or self.logs_dir is None:
            return
        log = self.engine.finish()
        self.logs_dir.mkdir(parents=True, exist_ok=True)
        path = self.logs_dir / f"{self.session_id}.jsonl"
        path.write_text(write_log(log), encoding="utf-8")


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        server: MotionServer = self.server  # type: ignore[assignment]
        if not server.try_acquire_slot():
            self.wfile.write(
                (_error_line(ErrorCode.BAD_MESSAGE, "session limit reached") + "\n").encode()
            )
            return
        session = WireSession(server.registry, server.next_session_id(), server.logs_dir)
        try:
            while True:
                raw = self.rfile.readline()
                if not raw:
                    break
                try:
                    line = raw.decode("utf-8")
                except UnicodeDecodeError:
                    self.wfile.write(
                        (_error_line(ErrorCode.BAD_MESSAGE, "not utf-8") + "\n").encode()
                    )
                    break
                reply, close = session.handle_line(line)
                if reply is not None:
                    self.wfile.write((reply + "\n").encode("utf-8"))
                    self.wfile.flush()
                if close:
                    break
        finally:
            session.finalize()
            server.release_slot()


class MotionServer(socketserver.ThreadingTCPServer):
    """Threaded line-protocol server; per-connection state is private."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        registry: dict[str, MotionClip],
        *,
        max_sessions: int = 64,
        logs_dir: str | Path | None = None,
    ):
        super().__init__(address, _Handler)
        self.registry = registry
        self.logs_dir = Path(logs_dir) if logs_dir is not None else None
        self._max_sessions = max_sessions
        self._active = 0
        self._counter = itertools.count(1)
        self._lock = threading.Lock()

    @property
    def port(self) -> int:
        return self.server_address[1]

    def next_session_id(self) -> str:
        with self._lock:
            return f"session-{next(self._counter):04d}"

    def try_acquire_slot(self) -> bool:
        with self._lock:
            if self._active >= self._max_sessions:
                return False
            self._active += 1
            return True

    def release_slot(self) -> None:
        with self._lock:
            self._active -= 1


def serve_stdio(
    registry: dict[str, MotionClip],
    logs_dir: str | Path | None = None,
    *,
    stdin=None,
    stdout=None,
) -> int:
    """Run one session over stdin/stdout (testing and piping)."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    session = WireSession(
        registry, "session-0001", Path(logs_dir) if logs_dir is not None else None
    )
    try:
        for line in stdin:
            reply, close = session.handle_line(line)
            if reply is not None:
                stdout.write(reply + "\n")
                stdout.flush()
            if close:
                break
    finally:
        session.finalize()
    return 0
