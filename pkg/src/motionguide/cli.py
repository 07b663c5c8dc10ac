"""Command-line interface.

Subcommands: score, simulate, viz, quality, checkpoints, serve, convert.
Bad flags exit 2 (argparse usage text); processing errors print a message
to stderr and exit 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bvh import DEFAULT_SCALE, parse_bvh, serialize_bvh
from .compare import CompareConfig
from .core import MotionClip
from .errors import MotionGuideError
from .jointmap import JointMapTable, default_kinect_map, load_joint_map
from .jsonfmt import dumps
from .navigate import NavConfig, build_checkpoints
from .quality import QualityConfig, check_clip, summarize
from .retarget import resample
from .server import MotionServer, load_registry, serve_stdio
from .session import (
    LogFormat,
    SessionConfig,
    SessionMode,
    run_session,
    write_log,
)
from .skeletons import builtin_skeleton
from .streams import parse_joint_stream, serialize_joint_stream
from .viz import (
    export_scene,
    footprints,
    ground_disc_primitive,
    head_gaze,
    polyline_primitive,
    ray_primitive,
    trajectory,
)

REGISTRY_ENV = "MOTIONGUIDE_REGISTRY"


def _load_skeleton(spec: str):
    if spec.endswith(".bvh"):
        return parse_bvh(Path(spec).read_text("utf-8")).skeleton
    return builtin_skeleton(spec)


def _load_clip(path: str, *, skeleton: str = "canonical20", fps: float = 30.0,
               scale: float = DEFAULT_SCALE) -> MotionClip:
    text = Path(path).read_text("utf-8")
    if path.endswith((".jsonl", ".ndjson")):
        return parse_joint_stream(text, _load_skeleton(skeleton), fps)
    return parse_bvh(text, scale=scale)


def _load_map(path: str | None) -> JointMapTable | None:
    if path is None:
        return None
    if path == "kinect32":
        return default_kinect_map()
    return load_joint_map(Path(path).read_text("utf-8"))


def _session_config(args) -> SessionConfig:
    if getattr(args, "config", None):
        return SessionConfig.from_dict(json.loads(Path(args.config).read_text("utf-8")))
    cfg = SessionConfig(target_fps=args.fps)
    if getattr(args, "mode", None):
        cfg.mode = SessionMode(args.mode)
    return cfg


def _add_session_io_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instructor", required=True, help="instructor clip (.bvh)")
    p.add_argument("--user", required=True, help="user clip (.bvh or .jsonl stream)")
    p.add_argument("--map", help="user joint-map JSON, or 'kinect32' for the shipped map")
    p.add_argument("--instructor-map", help="instructor joint-map JSON (default: names already canonical)")
    p.add_argument("--user-skeleton", default="canonical20",
                   help="skeleton for .jsonl user streams: canonical20, kinect32, or a .bvh file")
    p.add_argument("--fps", type=float, default=30.0, help="session tick rate")
    p.add_argument("--config", help="full session config JSON (overrides --fps/--mode)")


def _cmd_score(args) -> int:
    instructor = _load_clip(args.instructor)
    user = _load_clip(args.user, skeleton=args.user_skeleton, fps=args.fps)
    cfg = _session_config(args)
    cfg.mode = SessionMode.FOLLOW_ALONG
    log = run_session(instructor, user, _load_map(args.map), cfg,
                      instructor_map=_load_map(args.instructor_map))
    doc = {
        "ticks": [
            {
                "tick": f.tick,
                "t": f.t,
                "total": f.score.total,
                "display_total": f.score.display_total,
                "per_joint": dict(f.score.per_joint),
            }
            for f in log.frames
        ],
        "mean_score": log.summary.mean_score,
        "min_score": log.summary.min_score,
        "max_score": log.summary.max_score,
    }
    text = dumps(doc) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_simulate(args) -> int:
    instructor = _load_clip(args.instructor)
    user = _load_clip(args.user, skeleton=args.user_skeleton, fps=args.fps)
    cfg = _session_config(args)
    log = run_session(instructor, user, _load_map(args.map), cfg,
                      instructor_map=_load_map(args.instructor_map))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_suffix(".jsonl").write_text(write_log(log, LogFormat.JSONL), encoding="utf-8")
    out.with_suffix(".csv").write_text(write_log(log, LogFormat.CSV), encoding="utf-8")
    s = log.summary
    sys.stdout.write(
        f"ticks={len(log.frames)} mean={s.mean_score:.2f} min={s.min_score:.2f} "
        f"max={s.max_score:.2f} completed={str(s.completed).lower()}\n"
    )
    return 0


def _cmd_viz(args) -> int:
    clip = _load_clip(args.infile, scale=args.scale)
    t = args.t if args.t is not None else 0.0
    if args.feature == "trajectory":
        traj = trajectory(clip, args.joint, t, args.window)
        prims = [polyline_primitive(traj, t)]
    elif args.feature == "footprints":
        markers = footprints(clip, t, args.interval, args.fade,
                             left_joint=args.left_foot, right_joint=args.right_foot)
        prims = [ground_disc_primitive(m, t) for m in markers]
    else:
        from .core import forward_kinematics, sample_pose

        world = forward_kinematics(clip.skeleton, sample_pose(clip, t))
        prims = [ray_primitive(head_gaze(world, args.length, args.head_joint), t)]
    sys.stdout.write(export_scene(prims) + "\n")
    return 0


def _cmd_quality(args) -> int:
    clip = _load_clip(args.clip, scale=args.scale)
    cfg = QualityConfig(
        bone_length_tolerance=args.bone_tolerance,
        max_joint_speed=args.max_speed,
        max_root_jump=args.max_root_jump,
        ground_penetration=args.ground_penetration,
        limb_proximity_min=args.limb_proximity,
    )
    sys.stdout.write(summarize(check_clip(clip, cfg)))
    return 0


def _cmd_checkpoints(args) -> int:
    clip = _load_clip(args.infile, scale=args.scale)
    cfg = NavConfig(threshold=args.threshold, step_seconds=args.step,
                    hold_frames=args.hold_frames)
    times = build_checkpoints(clip, cfg)
    sys.stdout.write(dumps({"step_seconds": cfg.step_seconds, "checkpoints": times}) + "\n")
    return 0


def _cmd_convert(args) -> int:
    src, dst = args.infile, args.out
    if src.endswith((".jsonl", ".ndjson")) and dst.endswith(".bvh"):
        clip = parse_joint_stream(Path(src).read_text("utf-8"),
                                  _load_skeleton(args.skeleton), args.fps)
        Path(dst).write_text(serialize_bvh(clip, scale=args.scale), encoding="utf-8")
    elif src.endswith(".bvh") and dst.endswith((".jsonl", ".ndjson")):
        clip = parse_bvh(Path(src).read_text("utf-8"), scale=args.scale)
        if args.fps != clip.fps:
            clip = resample(clip, args.fps)
        Path(dst).write_text(serialize_joint_stream(clip), encoding="utf-8")
    else:
        raise MotionGuideError(
            "convert needs a .jsonl->.bvh or .bvh->.jsonl input/output pair"
        )
    return 0


def _cmd_serve(args) -> int:
    registry_dir = args.registry or os.environ.get(REGISTRY_ENV)
    if not registry_dir:
        raise MotionGuideError(f"no clip registry: pass --registry or set {REGISTRY_ENV}")
    registry = load_registry(registry_dir)
    if args.stdio:
        return serve_stdio(registry, args.logs)
    host, _, port = args.listen.rpartition(":")
    server = MotionServer(
        (host or "127.0.0.1", int(port)),
        registry,
        max_sessions=args.max_sessions,
        logs_dir=args.logs,
    )
    sys.stderr.write(f"serving {len(registry)} clip(s) on {server.server_address}\n")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motionguide",
        description="Skeletal motion comparison: scoring, navigation, viz geometry, quality checks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score a user performance against an instructor clip")
    _add_session_io_args(p)
    p.add_argument("--out", help="write the score timeline JSON here (default stdout)")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("simulate", help="run a full session and write JSONL+CSV logs")
    _add_session_io_args(p)
    p.add_argument("--mode", choices=[m.value for m in SessionMode],
                   default=SessionMode.FOLLOW_ALONG.value)
    p.add_argument("--out", required=True, help="output basename (writes .jsonl and .csv)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("viz", help="emit scene-geometry JSON for one feature")
    p.add_argument("--in", dest="infile", required=True, help="clip (.bvh)")
    p.add_argument("--feature", required=True, choices=["trajectory", "footprints", "gaze"])
    p.add_argument("--joint", default="left_wrist", help="trajectory joint")
    p.add_argument("--t", type=float, default=None, help="time of interest (seconds)")
    p.add_argument("--window", type=float, default=1.5, help="trajectory window (seconds)")
    p.add_argument("--interval", type=float, default=2.0, help="footprint birth interval")
    p.add_argument("--fade", type=float, default=4.0, help="footprint fade duration")
    p.add_argument("--left-foot", default="left_foot")
    p.add_argument("--right-foot", default="right_foot")
    p.add_argument("--length", type=float, default=2.0, help="gaze ray length (meters)")
    p.add_argument("--head-joint", default="head")
    p.add_argument("--scale", type=float, default=DEFAULT_SCALE, help="BVH translation unit scale")
    p.set_defaults(func=_cmd_viz)

    p = sub.add_parser("quality", help="run plausibility checks over a clip")
    p.add_argument("clip", help="clip file (.bvh or .jsonl)")
    p.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    p.add_argument("--bone-tolerance", type=float, default=0.02)
    p.add_argument("--max-speed", type=float, default=12.0)
    p.add_argument("--max-root-jump", type=float, default=0.5)
    p.add_argument("--ground-penetration", type=float, default=0.05)
    p.add_argument("--limb-proximity", type=float, default=0.03)
    p.set_defaults(func=_cmd_quality)

    p = sub.add_parser("checkpoints", help="list navigation checkpoint times for a clip")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--step", type=float, default=2.0, help="seconds between checkpoints")
    p.add_argument("--threshold", type=float, default=70.0)
    p.add_argument("--hold-frames", type=int, default=5)
    p.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    p.set_defaults(func=_cmd_checkpoints)

    p = sub.add_parser("convert", help="convert between joint-stream JSONL and BVH")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--skeleton", default="canonical20",
                   help="skeleton for JSONL input: canonical20, kinect32, or a .bvh file")
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("serve", help="start the streaming feedback server")
    p.add_argument("--listen", default="127.0.0.1:7707", help="host:port to bind")
    p.add_argument("--registry", help=f"clip directory (or ${REGISTRY_ENV})")
    p.add_argument("--max-sessions", type=int, default=64)
    p.add_argument("--logs", help="directory for session logs")
    p.add_argument("--stdio", action="store_true", help="single session over stdin/stdout")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MotionGuideError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: no such file: {exc.filename}\n")
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
