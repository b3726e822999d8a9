"""Skeletons, named body parts, forward kinematics, and skin-patch placement.

Both actors (robot and human) are articulated capsule bodies built from the
same joint layout. All joint rest rotations are identity, so segment-local
axes coincide with actor-local axes: +Z faces the interlocutor at the default
stance, +Y is up, limbs hang along -Y.

Skeleton and patch definitions round-trip through a versioned JSON config
(see ``body_config_to_dict`` / ``body_config_from_dict``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .geometry import (
    Capsule,
    Transform,
    _matrix_to_quat,
    compose,
    normalize,
    quat_identity,
    quat_rotate,
)

BODY_CONFIG_SCHEMA_VERSION = 1


class Actor(str, Enum):
    ROBOT = "robot"
    HUMAN = "human"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    CENTER = "center"


class SegmentKind(str, Enum):
    HEAD = "head"
    CHEST = "chest"
    SHOULDER = "shoulder"
    UPPER_ARM = "upper_arm"
    FOREARM = "forearm"
    PALM = "palm"
    MIDDLE_FINGERTIP = "middle_fingertip"


_CENTER_ONLY = {SegmentKind.HEAD, SegmentKind.CHEST}

# stable small-int labels for label buffers; 0 is reserved for background
_ACTORS = list(Actor)
_SIDES = list(Side)
_SEGMENTS = list(SegmentKind)


@dataclass(frozen=True, order=True)
class BodyPartId:
    actor: Actor
    side: Side
    segment: SegmentKind

    def __post_init__(self):
        if self.segment in _CENTER_ONLY and self.side is not Side.CENTER:
            raise ValueError(f"{self.segment.value} must have side=center")
        if self.segment not in _CENTER_ONLY and self.side is Side.CENTER:
            raise ValueError(f"{self.segment.value} must be left or right")

    def label(self) -> int:
        return 1 + (_ACTORS.index(self.actor) * len(_SIDES)
                    + _SIDES.index(self.side)) * len(_SEGMENTS) + _SEGMENTS.index(self.segment)

    @staticmethod
    def from_label(label: int) -> "BodyPartId":
        if label < 1:
            raise ValueError("label 0 is background")
        i = label - 1
        seg = _SEGMENTS[i % len(_SEGMENTS)]
        i //= len(_SEGMENTS)
        side = _SIDES[i % len(_SIDES)]
        actor = _ACTORS[i // len(_SIDES)]
        return BodyPartId(actor, side, seg)

    def short(self) -> str:
        side = {"left": "l", "right": "r", "center": ""}[self.side.value]
        return f"{self.actor.value}.{side}{'_' if side else ''}{self.segment.value}"

    @staticmethod
    def parse(text: str) -> "BodyPartId":
        actor_s, rest = text.split(".", 1)
        if rest.startswith("l_"):
            side, seg = Side.LEFT, rest[2:]
        elif rest.startswith("r_"):
            side, seg = Side.RIGHT, rest[2:]
        else:
            side, seg = Side.CENTER, rest
        return BodyPartId(Actor(actor_s), side, SegmentKind(seg))


BACKGROUND_LABEL = 0


@dataclass(frozen=True)
class Joint:
    name: str
    parent: Optional[int]  # index into the joint list, topologically before
    rest: Transform


@dataclass(frozen=True)
class BodySegment:
    """A capsule attached to a joint, carrying a part label.

    ``anchor_dir`` is the unit direction (joint-local, perpendicular to the
    capsule axis) toward the canonical touch surface: +Z faces the
    interlocutor at the default stance.
    """

    joint: int
    capsule: Capsule
    part: BodyPartId
    anchor_dir: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        object.__setattr__(self, "anchor_dir", normalize(np.asarray(self.anchor_dir, dtype=np.float64)))


@dataclass(frozen=True)
class Skeleton:
    joints: tuple
    segments: tuple

    def __post_init__(self):
        for i, j in enumerate(self.joints):
            if j.parent is not None and j.parent >= i:
                raise ValueError(f"joint {j.name} has parent index {j.parent} >= {i}")
        parts = [s.part for s in self.segments]
        if len(set(parts)) != len(parts):
            raise ValueError("duplicate body part in skeleton segments")

    def joint_index(self, name: str) -> int:
        for i, j in enumerate(self.joints):
            if j.name == name:
                return i
        raise KeyError(name)

    def segment_for(self, part: BodyPartId) -> BodySegment:
        for s in self.segments:
            if s.part == part:
                return s
        raise KeyError(part)

    @property
    def parts(self) -> list:
        return [s.part for s in self.segments]


@dataclass(frozen=True)
class Pose:
    root: Transform
    local_rotations: np.ndarray  # (n_joints, 4) unit quaternions

    def __post_init__(self):
        q = np.asarray(self.local_rotations, dtype=np.float64)
        if q.ndim != 2 or q.shape[1] != 4:
            raise ValueError("local_rotations must be (n, 4)")
        norms = np.linalg.norm(q, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-6):
            raise ValueError("pose quaternions must be unit")
        object.__setattr__(self, "local_rotations", q / norms[:, None])

    def with_rotation(self, index: int, q: np.ndarray) -> "Pose":
        rots = self.local_rotations.copy()
        rots[index] = q
        return Pose(self.root, rots)

    def with_root(self, root: Transform) -> "Pose":
        return Pose(root, self.local_rotations)


def identity_pose(skeleton: Skeleton, root: Optional[Transform] = None) -> Pose:
    n = len(skeleton.joints)
    q = np.tile(quat_identity(), (n, 1))
    return Pose(root if root is not None else Transform.identity(), q)


@dataclass(frozen=True)
class FKResult:
    skeleton: Skeleton
    joint_world: tuple  # Transform per joint
    segment_world: dict  # BodyPartId -> world Capsule

    def capsule(self, part: BodyPartId) -> Capsule:
        return self.segment_world[part]

    def joint_transform_for(self, part: BodyPartId) -> Transform:
        return self.joint_world[self.skeleton.segment_for(part).joint]

    def scene(self) -> list:
        return [(c, p) for p, c in self.segment_world.items()]


def forward_kinematics(skeleton: Skeleton, pose: Pose) -> FKResult:
    """World transform per joint and world capsule per segment."""
    n = len(skeleton.joints)
    if pose.local_rotations.shape[0] != n:
        raise ValueError(f"pose has {pose.local_rotations.shape[0]} joints, skeleton has {n}")
    world = []
    for i, joint in enumerate(skeleton.joints):
        parent_world = pose.root if joint.parent is None else world[joint.parent]
        local = compose(joint.rest, Transform.from_rotation(pose.local_rotations[i]))
        world.append(compose(parent_world, local))
    segs = {}
    for seg in skeleton.segments:
        segs[seg.part] = seg.capsule.transformed(world[seg.joint])
    return FKResult(skeleton=skeleton, joint_world=tuple(world), segment_world=segs)


def part_anchor(part: BodyPartId, fk: FKResult) -> np.ndarray:
    """Canonical touch-target point: segment midpoint pushed out to the surface."""
    seg = fk.skeleton.segment_for(part)
    jw = fk.joint_world[seg.joint]
    cap = fk.segment_world[part]
    outward = jw.apply_vector(seg.anchor_dir)
    return cap.center + cap.radius * outward


def part_anchor_normal(part: BodyPartId, fk: FKResult) -> np.ndarray:
    seg = fk.skeleton.segment_for(part)
    return fk.joint_world[seg.joint].apply_vector(seg.anchor_dir)


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CalibrationMeasurements:
    upper_arm_length: float
    forearm_length: float
    palm_length: float
    shoulder_width: float
    stature: float

    def __post_init__(self):
        for name in ("upper_arm_length", "forearm_length", "palm_length",
                     "shoulder_width", "stature"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def _scaled_transform(t: Transform, ratio: float) -> Transform:
    return Transform(rotation=t.rotation, translation=t.translation * ratio)


def _scaled_capsule(c: Capsule, ratio: float, radius_ratio: float = 1.0) -> Capsule:
    return Capsule(c.endpoint_a * ratio, c.endpoint_b * ratio, c.radius * radius_ratio)


def skeleton_measurements(skeleton: Skeleton) -> CalibrationMeasurements:
    """Current limb lengths and stature implied by the skeleton."""
    def offset_len(name):
        return float(np.linalg.norm(skeleton.joints[skeleton.joint_index(name)].rest.translation))

    r_sh = skeleton.joints[skeleton.joint_index("r_shoulder")].rest.translation
    l_sh = skeleton.joints[skeleton.joint_index("l_shoulder")].rest.translation
    fk = forward_kinematics(skeleton, identity_pose(skeleton))
    head = fk.segment_world[BodyPartId(_part_actor(skeleton), Side.CENTER, SegmentKind.HEAD)]
    stature = float(head.center[1] + head.radius)
    return CalibrationMeasurements(
        upper_arm_length=offset_len("r_elbow"),
        forearm_length=offset_len("r_wrist"),
        palm_length=offset_len("r_fingertip"),
        shoulder_width=float(np.linalg.norm(r_sh - l_sh)),
        stature=stature,
    )


def _part_actor(skeleton: Skeleton) -> Actor:
    return skeleton.segments[0].part.actor


def calibrate(skeleton: Skeleton, measurements: CalibrationMeasurements) -> Skeleton:
    """Rescale limb and trunk dimensions to match the measurements.

    Part labels and joint topology are preserved. Limb capsule radii are kept
    as-is; only lengths and offsets change.
    """
    current = skeleton_measurements(skeleton)
    arm_ratios = {
        "elbow": measurements.upper_arm_length / current.upper_arm_length,
        "wrist": measurements.forearm_length / current.forearm_length,
        "fingertip": measurements.palm_length / current.palm_length,
    }
    # which joint's rest offset and which segment's capsule scale together
    seg_scale = {
        SegmentKind.UPPER_ARM: arm_ratios["elbow"],
        SegmentKind.FOREARM: arm_ratios["wrist"],
        SegmentKind.PALM: arm_ratios["fingertip"],
    }
    shoulder_ratio = measurements.shoulder_width / current.shoulder_width
    stature_ratio = measurements.stature / current.stature

    joints = []
    for j in skeleton.joints:
        rest = j.rest
        base = j.name.split("_", 1)[-1]
        if base in arm_ratios:
            rest = _scaled_transform(rest, arm_ratios[base])
        elif base == "shoulder":
            rest = _scaled_transform(rest, shoulder_ratio)
        elif j.name in ("root", "chest", "head"):
            rest = _scaled_transform(rest, stature_ratio)
        joints.append(Joint(j.name, j.parent, rest))

    segments = []
    for s in skeleton.segments:
        cap = s.capsule
        kind = s.part.segment
        if kind in seg_scale:
            cap = _scaled_capsule(cap, seg_scale[kind])
        elif kind in (SegmentKind.HEAD, SegmentKind.CHEST):
            cap = _scaled_capsule(cap, stature_ratio, radius_ratio=stature_ratio)
        segments.append(replace(s, capsule=cap))
    return Skeleton(joints=tuple(joints), segments=tuple(segments))


# ---------------------------------------------------------------------------
# Skin patches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SkinPatch:
    """A displayable rectangular region wrapped on a robot segment.

    ``center_uv_anchor`` gives the surface point of the patch center as
    (axial fraction along the capsule segment, azimuth angle around the axis
    measured from the segment's anchor direction). The patch frame has
    +z = outward normal, +y = capsule axis direction, +x completing the
    right-handed frame.
    """

    id: str
    host: BodyPartId
    center_uv_anchor: tuple  # (axial fraction in [0,1], azimuth rad)
    extent: tuple  # (width m, height m)
    resolution: tuple  # (width px, height px)
    wrap_angle: float
    u_axis: np.ndarray = field(default=None)
    v_axis: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.host.actor is not Actor.ROBOT:
            raise ValueError("only robot segments host skin patches")
        if self.extent[0] <= 0 or self.extent[1] <= 0:
            raise ValueError("patch extent must be positive")
        if self.resolution[0] <= 0 or self.resolution[1] <= 0:
            raise ValueError("patch resolution must be positive")
        if not (0.0 <= self.wrap_angle <= np.pi):
            raise ValueError("wrap_angle must be in [0, pi]")
        # u/v axes are derived from the anchor parameters unless given
        if self.u_axis is None or self.v_axis is None:
            u, v, _ = _patch_axes_placeholder()
            object.__setattr__(self, "u_axis", u)
            object.__setattr__(self, "v_axis", v)
        else:
            object.__setattr__(self, "u_axis", normalize(np.asarray(self.u_axis, dtype=np.float64)))
            object.__setattr__(self, "v_axis", normalize(np.asarray(self.v_axis, dtype=np.float64)))


def _patch_axes_placeholder():
    # placeholder axes; patch_frame recomputes the real frame per segment
    return np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])


def _segment_local_frame(seg: BodySegment, azimuth: float):
    """(u, v, n) unit axes of a surface point at `azimuth` in joint-local space."""
    cap = seg.capsule
    ab = cap.endpoint_b - cap.endpoint_a
    if np.linalg.norm(ab) < 1e-12:
        axis = np.array([0.0, 1.0, 0.0])
    else:
        axis = normalize(ab)
    n0 = seg.anchor_dir - axis * float(np.dot(seg.anchor_dir, axis))
    n0 = normalize(n0) if np.linalg.norm(n0) > 1e-9 else normalize(np.cross(axis, [1.0, 0, 0]))
    t0 = np.cross(axis, n0)
    n = np.cos(azimuth) * n0 + np.sin(azimuth) * t0
    v = axis
    u = np.cross(v, n)
    return u, v, n


def patch_frame(patch: SkinPatch, fk: FKResult) -> Transform:
    """World transform of the patch center: x=u, y=v, z=outward normal."""
    seg = fk.skeleton.segment_for(patch.host)
    jw = fk.joint_world[seg.joint]
    frac, azimuth = patch.center_uv_anchor
    u, v, n = _segment_local_frame(seg, azimuth)
    cap = seg.capsule
    center_local = cap.endpoint_a + frac * (cap.endpoint_b - cap.endpoint_a) + cap.radius * n
    rot_local = _matrix_to_quat(np.column_stack([u, v, n]))
    return compose(jw, Transform(rotation=rot_local, translation=center_local))


# ---------------------------------------------------------------------------
# Default bodies
# ---------------------------------------------------------------------------

DEFAULT_HUMAN_STATURE = 1.75
DEFAULT_ROBOT_STATURE = 1.60
DEFAULT_UPPER_ARM = 0.30
DEFAULT_FOREARM = 0.27
DEFAULT_PALM = 0.09
DEFAULT_SHOULDER_WIDTH = 0.40
DEFAULT_INTERLOCUTOR_DISTANCE = 1.2

_RADII = {
    SegmentKind.HEAD: 0.10,
    SegmentKind.CHEST: 0.13,
    SegmentKind.SHOULDER: 0.06,
    SegmentKind.UPPER_ARM: 0.05,
    SegmentKind.FOREARM: 0.045,
    SegmentKind.PALM: 0.04,
    SegmentKind.MIDDLE_FINGERTIP: 0.010,
}

_FINGERTIP_LEN = 0.025


def build_humanoid(actor: Actor,
                   stature: float,
                   upper_arm: float = DEFAULT_UPPER_ARM,
                   forearm: float = DEFAULT_FOREARM,
                   palm: float = DEFAULT_PALM,
                   shoulder_width: float = DEFAULT_SHOULDER_WIDTH) -> Skeleton:
    """Symmetric humanoid: trunk up from a pelvis root, arms hanging along -Y.

    Actor-local +Z is the facing direction; the right arm is on local -X.
    """
    hip = 0.52 * stature
    shoulder_line = 0.815 * stature
    trunk = shoulder_line - hip
    scale = stature / DEFAULT_HUMAN_STATURE

    def T(x, y, z):
        return Transform.from_translation([x, y, z])

    joints = [
        Joint("root", None, T(0, hip, 0)),
        Joint("chest", 0, T(0, trunk, 0)),
        Joint("head", 1, T(0, 0.10 * scale, 0)),
    ]
    half_w = shoulder_width / 2
    for side, sx in ((Side.LEFT, +1.0), (Side.RIGHT, -1.0)):
        p = "l" if side is Side.LEFT else "r"
        base = len(joints)
        joints += [
            Joint(f"{p}_shoulder", 1, T(sx * half_w, 0, 0)),
            Joint(f"{p}_elbow", base, T(0, -upper_arm, 0)),
            Joint(f"{p}_wrist", base + 1, T(0, -forearm, 0)),
            Joint(f"{p}_fingertip", base + 2, T(0, -palm, 0)),
        ]

    def cap_down(length, kind):
        return Capsule([0, 0, 0], [0, -length, 0], _RADII[kind] * (scale if kind in
                       (SegmentKind.HEAD, SegmentKind.CHEST) else 1.0))

    segments = [
        BodySegment(joint=1, part=BodyPartId(actor, Side.CENTER, SegmentKind.CHEST),
                    capsule=Capsule([0, -trunk * 0.9, 0], [0, 0, 0], _RADII[SegmentKind.CHEST] * scale)),
        BodySegment(joint=2, part=BodyPartId(actor, Side.CENTER, SegmentKind.HEAD),
                    capsule=Capsule([0, 0.09 * scale, 0], [0, 0.09 * scale, 0],
                                    _RADII[SegmentKind.HEAD] * scale)),
    ]
    for side, sx in ((Side.LEFT, +1.0), (Side.RIGHT, -1.0)):
        p = "l" if side is Side.LEFT else "r"
        sh_i = next(i for i, j in enumerate(joints) if j.name == f"{p}_shoulder")
        segments += [
            # deltoid shell rides on the chest so it does not spin with the arm
            BodySegment(joint=1, part=BodyPartId(actor, side, SegmentKind.SHOULDER),
                        capsule=Capsule([sx * (half_w - 0.05), 0, 0], [sx * (half_w + 0.05), 0, 0],
                                        _RADII[SegmentKind.SHOULDER])),
            BodySegment(joint=sh_i, part=BodyPartId(actor, side, SegmentKind.UPPER_ARM),
                        capsule=cap_down(upper_arm, SegmentKind.UPPER_ARM)),
            BodySegment(joint=sh_i + 1, part=BodyPartId(actor, side, SegmentKind.FOREARM),
                        capsule=cap_down(forearm, SegmentKind.FOREARM)),
            BodySegment(joint=sh_i + 2, part=BodyPartId(actor, side, SegmentKind.PALM),
                        capsule=cap_down(palm, SegmentKind.PALM)),
            BodySegment(joint=sh_i + 3, part=BodyPartId(actor, side, SegmentKind.MIDDLE_FINGERTIP),
                        capsule=cap_down(_FINGERTIP_LEN, SegmentKind.MIDDLE_FINGERTIP)),
        ]
    return Skeleton(joints=tuple(joints), segments=tuple(segments))


def default_robot() -> Skeleton:
    return build_humanoid(Actor.ROBOT, DEFAULT_ROBOT_STATURE)


def default_human() -> Skeleton:
    return build_humanoid(Actor.HUMAN, DEFAULT_HUMAN_STATURE)


def default_robot_pose() -> Pose:
    """Robot at the world origin, facing +Z."""
    return identity_pose(default_robot())


def default_human_pose(skeleton: Optional[Skeleton] = None,
                       distance: float = DEFAULT_INTERLOCUTOR_DISTANCE) -> Pose:
    """Human standing `distance` in front of the robot, facing it."""
    from .geometry import quat_from_axis_angle
    skeleton = skeleton or default_human()
    root = Transform(rotation=quat_from_axis_angle([0, 1, 0], np.pi),
                     translation=[0, 0, distance])
    return identity_pose(skeleton, root)


def ready_human_pose(skeleton: Optional[Skeleton] = None,
                     distance: float = DEFAULT_INTERLOCUTOR_DISTANCE,
                     elbow_flex: float = np.deg2rad(52),
                     arm_spread: float = 0.30) -> Pose:
    """Human facing the robot, forearms raised and arms opened slightly.

    The conversational stance used for interaction trials; it keeps palm and
    forearm touch targets inside the robot's reach envelope while leaving a
    clear approach corridor to every arm region.
    """
    from .geometry import quat_from_axis_angle
    skeleton = skeleton or default_human()
    pose = default_human_pose(skeleton, distance)
    flex = quat_from_axis_angle([1, 0, 0], -elbow_flex)
    for prefix, sign in (("l", +1.0), ("r", -1.0)):
        spread = quat_from_axis_angle([0, 0, 1], sign * arm_spread)
        pose = pose.with_rotation(skeleton.joint_index(f"{prefix}_shoulder"), spread)
        pose = pose.with_rotation(skeleton.joint_index(f"{prefix}_elbow"), flex)
    return pose


_PATCH_SPECS = {
    # (extent_w, extent_h, res_w, res_h)
    SegmentKind.SHOULDER: (0.08, 0.09, 256, 256),
    SegmentKind.UPPER_ARM: (0.08, 0.22, 256, 256),
    SegmentKind.FOREARM: (0.07, 0.20, 256, 256),
    SegmentKind.PALM: (0.06, 0.08, 256, 256),
    SegmentKind.MIDDLE_FINGERTIP: (0.015, 0.02, 64, 64),
}


def make_patch(host: BodyPartId, axial_fraction: float = 0.5, azimuth: float = 0.0) -> SkinPatch:
    ew, eh, rw, rh = _PATCH_SPECS[host.segment]
    radius = _RADII[host.segment]
    wrap = min(ew / radius, 0.9 * np.pi)
    return SkinPatch(
        id=host.short().replace("robot.", ""),
        host=host,
        center_uv_anchor=(axial_fraction, azimuth),
        extent=(ew, eh),
        resolution=(rw, rh),
        wrap_angle=wrap,
    )


def default_patches() -> list:
    """Display inventory: both arms for study regions, plus right shoulder
    and right middle fingertip for free exploration."""
    parts = []
    for side in (Side.LEFT, Side.RIGHT):
        for seg in (SegmentKind.PALM, SegmentKind.FOREARM, SegmentKind.UPPER_ARM):
            parts.append(BodyPartId(Actor.ROBOT, side, seg))
    parts.append(BodyPartId(Actor.ROBOT, Side.RIGHT, SegmentKind.SHOULDER))
    parts.append(BodyPartId(Actor.ROBOT, Side.RIGHT, SegmentKind.MIDDLE_FINGERTIP))
    return [make_patch(p) for p in parts]


# ---------------------------------------------------------------------------
# Config serialization (schema v1)
# ---------------------------------------------------------------------------

def _transform_to_dict(t: Transform) -> dict:
    return {"rotation": list(map(float, t.rotation)), "translation": list(map(float, t.translation))}


def _transform_from_dict(d: dict) -> Transform:
    return Transform(rotation=np.array(d["rotation"]), translation=np.array(d["translation"]))


def skeleton_to_dict(skeleton: Skeleton) -> dict:
    return {
        "joints": [
            {"name": j.name, "parent": j.parent, "rest": _transform_to_dict(j.rest)}
            for j in skeleton.joints
        ],
        "segments": [
            {
                "joint": s.joint,
                "part": s.part.short(),
                "capsule": {
                    "a": list(map(float, s.capsule.endpoint_a)),
                    "b": list(map(float, s.capsule.endpoint_b)),
                    "radius": s.capsule.radius,
                },
                "anchor_dir": list(map(float, s.anchor_dir)),
            }
            for s in skeleton.segments
        ],
    }


def skeleton_from_dict(d: dict) -> Skeleton:
    joints = tuple(
        Joint(j["name"], j["parent"], _transform_from_dict(j["rest"])) for j in d["joints"]
    )
    segments = tuple(
        BodySegment(
            joint=s["joint"],
            part=BodyPartId.parse(s["part"]),
            capsule=Capsule(np.array(s["capsule"]["a"]), np.array(s["capsule"]["b"]),
                            s["capsule"]["radius"]),
            anchor_dir=np.array(s["anchor_dir"]),
        )
        for s in d["segments"]
    )
    return Skeleton(joints=joints, segments=segments)


def patch_to_dict(p: SkinPatch) -> dict:
    return {
        "id": p.id,
        "host": p.host.short(),
        "center_uv_anchor": list(p.center_uv_anchor),
        "extent": list(p.extent),
        "resolution": list(p.resolution),
        "wrap_angle": p.wrap_angle,
    }


def patch_from_dict(d: dict) -> SkinPatch:
    return SkinPatch(
        id=d["id"],
        host=BodyPartId.parse(d["host"]),
        center_uv_anchor=tuple(d["center_uv_anchor"]),
        extent=tuple(d["extent"]),
        resolution=tuple(d["resolution"]),
        wrap_angle=d["wrap_angle"],
    )


def body_config_to_dict(robot: Skeleton, human: Skeleton, patches: Sequence[SkinPatch]) -> dict:
    return {
        "schema_version": BODY_CONFIG_SCHEMA_VERSION,
        "robot": skeleton_to_dict(robot),
        "human": skeleton_to_dict(human),
        "patches": [patch_to_dict(p) for p in patches],
    }


def body_config_from_dict(d: dict):
    version = d.get("schema_version")
    if version != BODY_CONFIG_SCHEMA_VERSION:
        raise ValueError(f"unsupported body config schema_version {version}")
    return (
        skeleton_from_dict(d["robot"]),
        skeleton_from_dict(d["human"]),
        [patch_from_dict(p) for p in d["patches"]],
    )


def load_body_config(path) -> tuple:
    with open(Path(path), "r", encoding="utf-8") as f:
        return body_config_from_dict(json.load(f))


def save_body_config(path, robot: Skeleton, human: Skeleton, patches: Sequence[SkinPatch]):
    with open(Path(path), "w", encoding="utf-8") as f:
        json.dump(body_config_to_dict(robot, human, patches), f, indent=2)
