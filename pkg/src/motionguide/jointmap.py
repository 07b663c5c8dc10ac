"""Joint-map tables: renaming one skeleton's joints onto another's.

File format (JSON):

    {"source": "kinect32", "target": "canonical20",
     "pairs": [["srcName", "dstName"], ...],
     "required": ["dstName", ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import MapValidationError

DEFAULT_KINECT_MAP_RESOURCE = "kinect32_to_canonical20.json"


@dataclass
class JointMapTable:
    """Validated source-to-target joint renaming."""

    source_skeleton_id: str
    target_skeleton_id: str
    pairs: list[tuple[str, str]]
    required: list[str] = field(default_factory=list)

    def __post_init__(self):
        sources = [s for s, _ in self.pairs]
        targets = [t for _, t in self.pairs]
        dup_src = sorted({s for s in sources if sources.count(s) > 1})
        dup_dst = sorted({t for t in targets if targets.count(t) > 1})
        if dup_src or dup_dst:
            raise MapValidationError(
                f"duplicate mappings: sources {dup_src}, targets {dup_dst}"
            )
        missing = sorted(set(self.required) - set(targets))
        if missing:
            raise MapValidationError(f"required targets not mapped: {missing}")

    def source_for(self, target: str) -> str | None:
        for s, t in self.pairs:
            if t == target:
                return s
        return None


def load_joint_map(text: str) -> JointMapTable:
    """Parse and validate a joint-map JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapValidationError(f"joint map is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MapValidationError("joint map must be a JSON object")
    try:
        pairs = [(str(a), str(b)) for a, b in doc["pairs"]]
    except (KeyError, TypeError, ValueError):
        raise MapValidationError("joint map needs a 'pairs' list of [src, dst] pairs") from None
    required = [str(r) for r in doc.get("required", [])]
    return JointMapTable(
        source_skeleton_id=str(doc.get("source", "")),
        target_skeleton_id=str(doc.get("target", "")),
        pairs=pairs,
        required=required,
    )


def identity_joint_map(names, skeleton_id: str = "canonical20", required=None) -> JointMapTable:
    """Map every name to itself; used when a pose is already canonical."""
    names = list(names)
    return JointMapTable(
        source_skeleton_id=skeleton_id,
        target_skeleton_id=skeleton_id,
        pairs=[(n, n) for n in names],
        required=list(required) if required is not None else [],
    )


def default_kinect_map() -> JointMapTable:
    """The shipped 32-joint to canonical-20 mapping."""
    text = resources.files("motionguide.data").joinpath(DEFAULT_KINECT_MAP_RESOURCE).read_text("utf-8")
    return load_joint_map(text)
