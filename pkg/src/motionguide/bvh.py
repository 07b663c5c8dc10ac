"""BVH motion-capture text format: parsing and serialization.

Supported subset: a HIERARCHY section of ROOT/JOINT/End Site blocks with
OFFSET and CHANNELS lines (3 rotation channels, or 3 position + 3 rotation
channels, in any {X,Y,Z} order), followed by a MOTION section with
"Frames:", "Frame Time:" and whitespace-separated value lines.

Rotation channel values are degrees and compose as intrinsic rotations in
the declared channel order. Translation values are multiplied by the input
scale (default 0.01: centimeter files become meters). Position channels on
non-root joints are consumed but dropped: a pose frame stores only the
root position plus local rotations.

Serialization always emits a fixed channel layout (root: XYZ position +
ZXY rotation; other joints: ZXY rotation) and fixed-point numbers, so
identical clips serialize to identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import MotionClip, PoseFrame, Skeleton, Joint, UnitQuat, Vec3
from .core import euler_to_quat, quat_to_euler_zxy
from .errors import ParseError

DEFAULT_SCALE = 0.01

_POSITION_CHANNELS = {"Xposition", "Yposition", "Zposition"}
_ROTATION_CHANNELS = {"Xrotation", "Yrotation", "Zrotation"}


@dataclass
class _JointDecl:
    name: str
    parent: int | None
    offset: Vec3
    channels: list[str]


class _Cursor:
    """Line cursor that skips blanks and tracks 1-based line numbers."""

    def __init__(self, text: str):
        self._lines = text.splitlines()
        self._pos = 0
        self.lineno = 0

    def next(self) -> str | None:
        while self._pos < len(self._lines):
            raw = self._lines[self._pos]
            self._pos += 1
            stripped = raw.strip()
            if stripped:
                self.lineno = self._pos
                return stripped
        self.lineno = len(self._lines) + 1
        return None

    def expect(self, what: str) -> str:
        line = self.next()
        if line is None:
            raise ParseError(f"unexpected end of file, expected {what}", self.lineno)
        return line


def _floats(parts: list[str], n: int, lineno: int, what: str) -> list[float]:
    if len(parts) != n:
        raise ParseError(f"{what}: expected {n} values, got {len(parts)}", lineno)
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}", lineno) from None


def _parse_offset(cur: _Cursor, scale: float) -> Vec3:
    line = cur.expect("OFFSET")
    parts = line.split()
    if parts[0] != "OFFSET":
        raise ParseError(f"expected OFFSET, got {parts[0]!r}", cur.lineno)
    x, y, z = _floats(parts[1:], 3, cur.lineno, "OFFSET")
    return Vec3(x * scale, y * scale, z * scale)


def _parse_channels(cur: _Cursor) -> list[str]:
    line = cur.expect("CHANNELS")
    parts = line.split()
    if parts[0] != "CHANNELS":
        raise ParseError(f"expected CHANNELS, got {parts[0]!r}", cur.lineno)
    try:
        count = int(parts[1])
    except (IndexError, ValueError):
        raise ParseError("CHANNELS needs a count", cur.lineno) from None
    names = parts[2:]
    if count not in (3, 6) or len(names) != count:
        raise ParseError(f"CHANNELS must declare 3 or 6 names, got {count}", cur.lineno)
    rot = [c for c in names if c in _ROTATION_CHANNELS]
    pos = [c for c in names if c in _POSITION_CHANNELS]
    if len(rot) + len(pos) != count:
        bad = [c for c in names if c not in _ROTATION_CHANNELS | _POSITION_CHANNELS]
        raise ParseError(f"unknown channel {bad[0]!r}", cur.lineno)
    if len(rot) != 3 or len(set(rot)) != 3:
        raise ParseError("CHANNELS needs exactly 3 distinct rotation axes", cur.lineno)
    if count == 6 and len(set(pos)) != 3:
        raise ParseError("CHANNELS needs 3 distinct position axes", cur.lineno)
    return names


def _parse_hierarchy(cur: _Cursor, scale: float) -> tuple[list[_JointDecl], dict[int, Vec3]]:
    line = cur.expect("HIERARCHY")
    if line != "HIERARCHY":
        raise ParseError(f"expected HIERARCHY, got {line!r}", cur.lineno)
    line = cur.expect("ROOT")
    if not line.startswith("ROOT"):
        raise ParseError(f"expected ROOT, got {line!r}", cur.lineno)

    joints: list[_JointDecl] = []
    end_sites: dict[int, Vec3] = {}
    names_seen: set[str] = set()
    stack: list[int] = []

    def open_joint(decl_line: str, parent: int | None) -> None:
        parts = decl_line.split()
        if len(parts) < 2:
            raise ParseError("joint declaration needs a name", cur.lineno)
        name = "_".join(parts[1:])
        if name in names_seen:
            raise ParseError(f"duplicate joint name {name!r}", cur.lineno)
        names_seen.add(name)
        brace = cur.expect("{")
        if brace != "{":
            raise ParseError(f"expected '{{', got {brace!r}", cur.lineno)
        offset = _parse_offset(cur, scale)
        if parent is not None and offset.norm() <= 0.0:
            raise ParseError(f"joint {name!r} has zero-length offset", cur.lineno)
        channels = _parse_channels(cur)
        joints.append(_JointDecl(name, parent, offset, channels))
        stack.append(len(joints) - 1)

    open_joint(line, None)
    while stack:
        line = cur.expect("'}' or child joint")
        if line.startswith("JOINT"):
            open_joint(line, stack[-1])
        elif line == "End Site" or line.startswith("End"):
            brace = cur.expect("{")
            if brace != "{":
                raise ParseError(f"expected '{{', got {brace!r}", cur.lineno)
            end_sites[stack[-1]] = _parse_offset(cur, scale)
            closing = cur.expect("}")
            if closing != "}":
                raise ParseError(f"expected '}}', got {closing!r}", cur.lineno)
        elif line == "}":
            stack.pop()
        elif line == "ROOT" or line.startswith("ROOT"):
            raise ParseError("multiple ROOT blocks", cur.lineno)
        else:
            raise ParseError(f"unexpected token {line!r} in hierarchy", cur.lineno)
    return joints, end_sites


def parse_bvh(text: str, *, scale: float = DEFAULT_SCALE) -> MotionClip:
    """Parse BVH text into a motion clip; errors carry 1-based line numbers."""
    cur = _Cursor(text)
    decls, end_sites = _parse_hierarchy(cur, scale)

    line = cur.next()
    if line is None or line != "MOTION":
        raise ParseError("missing MOTION section", cur.lineno)

    line = cur.expect("Frames:")
    if not line.startswith("Frames:"):
        raise ParseError(f"expected 'Frames:', got {line!r}", cur.lineno)
    try:
        frame_count = int(line.split(":", 1)[1])
    except ValueError:
        raise ParseError("Frames: needs an integer", cur.lineno) from None
    if frame_count < 1:
        raise ParseError(f"Frames: must be >= 1, got {frame_count}", cur.lineno)

    line = cur.expect("Frame Time:")
    if not line.startswith("Frame Time:"):
        raise ParseError(f"expected 'Frame Time:', got {line!r}", cur.lineno)
    try:
        frame_time = float(line.split(":", 1)[1])
    except ValueError:
        raise ParseError("Frame Time: needs a number", cur.lineno) from None
    if not (math.isfinite(frame_time) and frame_time > 0):
        raise ParseError(f"Frame Time must be positive, got {frame_time}", cur.lineno)

    values_per_frame = sum(len(d.channels) for d in decls)
    frames: list[PoseFrame] = []
    for k in range(frame_count):
        line = cur.next()
        if line is None:
            raise ParseError(
                f"file truncated: frame {k + 1} of {frame_count} missing", cur.lineno
            )
        values = _floats(line.split(), values_per_frame, cur.lineno, f"frame {k + 1}")
        frames.append(_assemble_frame(decls, values, scale))
    trailing = cur.next()
    if trailing is not None:
        raise ParseError(f"unexpected data after last frame: {trailing!r}", cur.lineno)

    skeleton = Skeleton(
        joints=[Joint(d.name, d.parent, d.offset) for d in decls],
        end_sites=end_sites,
    )
    return MotionClip(skeleton=skeleton, frames=frames, fps=1.0 / frame_time)


def _assemble_frame(decls: list[_JointDecl], values: list[float], scale: float) -> PoseFrame:
    pos = 0
    root_position = decls[0].offset
    rotations: list[UnitQuat] = []
    for d in decls:
        trans = {"X": 0.0, "Y": 0.0, "Z": 0.0}
        rot_order = ""
        rot_values: list[float] = []
        for ch in d.channels:
            v = values[pos]
            pos += 1
            if ch in _POSITION_CHANNELS:
                trans[ch[0]] = v
            else:
                rot_order += ch[0]
                rot_values.append(v)
        if d.parent is None and len(d.channels) == 6:
            root_position = d.offset + Vec3(trans["X"] * scale, trans["Y"] * scale, trans["Z"] * scale)
        rotations.append(euler_to_quat(rot_order, tuple(rot_values)))
    return PoseFrame(root_position=root_position, joint_rotations=rotations)


def _fmt(v: float) -> str:
    out = f"{v:.6f}"
    return "0.000000" if out == "-0.000000" else out


def serialize_bvh(clip: MotionClip, *, scale: float = DEFAULT_SCALE) -> str:
    """Serialize a clip to BVH text that parse_bvh round-trips within 1e-5."""
    skel = clip.skeleton
    children: dict[int, list[int]] = {i: [] for i in range(len(skel.joints))}
    for i, j in enumerate(skel.joints):
        if j.parent is not None:
            children[j.parent].append(i)

    inv = 1.0 / scale
    out: list[str] = ["HIERARCHY"]

    def emit(i: int, depth: int) -> None:
        j = skel.joints[i]
        pad = "  " * depth
        kind = "ROOT" if j.parent is None else "JOINT"
        out.append(f"{pad}{kind} {j.name}")
        out.append(f"{pad}{{")
        o = j.offset
        out.append(f"{pad}  OFFSET {_fmt(o.x * inv)} {_fmt(o.y * inv)} {_fmt(o.z * inv)}")
        if j.parent is None:
            out.append(
                f"{pad}  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation"
            )
        else:
            out.append(f"{pad}  CHANNELS 3 Zrotation Xrotation Yrotation")
        if i in skel.end_sites:
            e = skel.end_sites[i]
            out.append(f"{pad}  End Site")
            out.append(f"{pad}  {{")
            out.append(f"{pad}    OFFSET {_fmt(e.x * inv)} {_fmt(e.y * inv)} {_fmt(e.z * inv)}")
            out.append(f"{pad}  }}")
        for c in children[i]:
            emit(c, depth + 1)
        out.append(f"{pad}}}")

    emit(0, 0)
    out.append("MOTION")
    out.append(f"Frames: {len(clip.frames)}")
    out.append(f"Frame Time: {1.0 / clip.fps:.7f}")
    root_offset = skel.joints[0].offset
    for frame in clip.frames:
        vals: list[str] = []
        p = (frame.root_position - root_offset) * inv
        vals += [_fmt(p.x), _fmt(p.y), _fmt(p.z)]
        for q in frame.joint_rotations:
            z, x, y = quat_to_euler_zxy(q)
            vals += [_fmt(z), _fmt(x), _fmt(y)]
        out.append(" ".join(vals))
    return "\n".join(out) + "\n"
