"""Virtual mirror camera: frames the targeted human part from a skin patch.

The camera sits at the patch center and aims at the target's anchor point.
It is a look-at camera rather than a physically correct planar reflection:
the displayed reflection stays centered on the target, while two optional
spatial cues approximate real-mirror behavior:

* depth: with a fixed field of view the apparent target height h satisfies
  h * d = const (calibrated so the target fills ``reference_fill`` of the
  frame at ``reference_distance``); with depth off, zoom is adjusted every
  frame so h stays constant regardless of distance.
* dynamic offset: the reflection is transiently displaced along the patch
  plane following lateral target motion (gain ``follow_gain``) and
  re-centers with time constant ``recenter_tau``; realized as a
  principal-point shift.

Distances for the size law are measured to the target capsule's center; the
camera up vector follows the target's axis so the limb appears upright.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .body import BodyPartId, FKResult, SkinPatch, part_anchor, patch_frame
from .geometry import Transform, look_rotation, normalize, ray_capsule_intersect_batch

DEFAULT_REFERENCE_DISTANCE = 0.6
DEFAULT_REFERENCE_FILL = 0.6
DEFAULT_RECENTER_TAU = 0.8
DEFAULT_FOLLOW_GAIN = 0.5
OFFSET_MAX_EXTENT_FRACTION = 0.3


@dataclass(frozen=True)
class MirrorView:
    camera_pose: Transform
    fov_y: float
    principal_shift: tuple
    zoom: float

    def __post_init__(self):
        if not (0.0 < self.fov_y < np.pi):
            raise ValueError("fov must be in (0, pi)")
        if self.zoom <= 0:
            raise ValueError("zoom must be positive")


@dataclass(frozen=True)
class MirrorState:
    patch: SkinPatch
    target: BodyPartId
    reference_distance: float = DEFAULT_REFERENCE_DISTANCE
    reference_fill: float = DEFAULT_REFERENCE_FILL
    depth_enabled: bool = True
    offset_enabled: bool = True
    offset: np.ndarray = field(default_factory=lambda: np.zeros(2))
    recenter_tau: float = DEFAULT_RECENTER_TAU
    follow_gain: float = DEFAULT_FOLLOW_GAIN
    offset_max: float = 0.0  # 0 -> derived from patch extent
    prev_anchor: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.reference_distance <= 0:
            raise ValueError("reference_distance must be positive")
        if not (0.0 < self.reference_fill <= 1.0):
            raise ValueError("reference_fill must be in (0, 1]")
        if self.recenter_tau <= 0:
            raise ValueError("recenter_tau must be positive")
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=np.float64))
        if self.offset_max == 0.0:
            object.__setattr__(
                self, "offset_max",
                OFFSET_MAX_EXTENT_FRACTION * min(self.patch.extent))
        if np.linalg.norm(self.offset) > self.offset_max + 1e-12:
            raise ValueError("offset exceeds offset_max")

    @property
    def patch_id(self) -> str:
        return self.patch.id


@dataclass(frozen=True)
class MirrorUpdate:
    state: MirrorState
    view: MirrorView
    target_behind: bool
    self_occluded: bool

    def __iter__(self):  # allows `state, view = update_mirror(...)`
        return iter((self.state, self.view))


def _target_geometry(state: MirrorState, fk_human: FKResult, fk_robot: FKResult):
    frame = patch_frame(state.patch, fk_robot)
    anchor = part_anchor(state.target, fk_human)
    cap = fk_human.capsule(state.target)
    return frame, anchor, cap


def apparent_half_slope(half_len: float, radius: float, dist: float) -> float:
    """Tangent of the half-angle subtended by a capsule seen side-on.

    Exact silhouette extent of the cap sphere at axial offset half_len,
    including the projective bulge that a flat-object estimate misses.
    """
    if dist <= radius:
        raise ValueError("viewpoint inside the capsule")
    num = dist * half_len + radius * np.sqrt(dist * dist + half_len * half_len - radius * radius)
    return num / (dist * dist - radius * radius)


def calibrated_fov(axis_length: float, radius: float, reference_distance: float,
                   reference_fill: float) -> float:
    """Vertical fov making the capsule silhouette fill `reference_fill` of the
    frame at `reference_distance` (side-on view)."""
    tan_half = apparent_half_slope(axis_length / 2.0, radius, reference_distance) / reference_fill
    return 2.0 * np.arctan(tan_half)


def mirror_view(state: MirrorState, fk_human: FKResult, fk_robot: FKResult) -> MirrorView:
    """Camera for the current state; pure, does not advance offset dynamics."""
    frame, anchor, cap = _target_geometry(state, fk_human, fk_robot)
    origin = frame.translation
    to_anchor = anchor - origin
    dist = float(np.linalg.norm(to_anchor))
    forward = to_anchor / dist if dist > 1e-9 else frame.apply_vector([0, 0, 1])

    axis = cap.endpoint_b - cap.endpoint_a
    if np.linalg.norm(axis) > 1e-9:
        axis_up = axis - forward * float(np.dot(axis, forward))
        up = normalize(axis_up) if np.linalg.norm(axis_up) > 1e-6 else frame.apply_vector([0, 1, 0])
    else:
        up = frame.apply_vector([0, 1, 0])

    fov_y = calibrated_fov(cap.axis_length, cap.radius,
                           state.reference_distance, state.reference_fill)

    d_center = float(np.linalg.norm(cap.center - origin))
    zoom = 1.0 if state.depth_enabled else d_center / state.reference_distance

    ew, eh = state.patch.extent
    shift = (-2.0 * float(state.offset[0]) / ew, -2.0 * float(state.offset[1]) / eh)

    pose = Transform(rotation=look_rotation(forward, up), translation=origin)
    return MirrorView(camera_pose=pose, fov_y=fov_y, principal_shift=shift, zoom=zoom)


def update_mirror(state: MirrorState, fk_human: FKResult, fk_robot: FKResult,
                  dt: float) -> MirrorUpdate:
    """Advance offset dynamics by dt and produce the camera for this tick."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    frame, anchor, cap = _target_geometry(state, fk_human, fk_robot)
    origin = frame.translation
    u = frame.apply_vector([1, 0, 0])
    v = frame.apply_vector([0, 1, 0])
    n = frame.apply_vector([0, 0, 1])

    offset = state.offset.copy()
    if state.offset_enabled:
        if state.prev_anchor is not None:
            vel = (anchor - state.prev_anchor) / dt
            v_lat = np.array([float(vel @ u), float(vel @ v)])
        else:
            v_lat = np.zeros(2)
        offset = offset + dt * (state.follow_gain * v_lat - offset / state.recenter_tau)
        norm = np.linalg.norm(offset)
        if norm > state.offset_max:
            offset = offset * (state.offset_max / norm)
    else:
        offset = np.zeros(2)

    new_state = replace(state, offset=offset, prev_anchor=anchor.copy())

    to_anchor = anchor - origin
    target_behind = float(to_anchor @ n) <= 0.0
    self_occluded = _line_occluded_by_robot(origin, anchor, fk_robot, exclude=state.patch.host)

    view = mirror_view(new_state, fk_human, fk_robot)
    return MirrorUpdate(state=new_state, view=view,
                        target_behind=target_behind, self_occluded=self_occluded)


def _line_occluded_by_robot(origin: np.ndarray, target: np.ndarray,
                            fk_robot: FKResult, exclude: BodyPartId) -> bool:
    to_target = target - origin
    dist = float(np.linalg.norm(to_target))
    if dist < 1e-9:
        return False
    direction = to_target / dist
    for part, cap in fk_robot.segment_world.items():
        if part == exclude:
            continue
        t = float(ray_capsule_intersect_batch(origin[None, :], direction[None, :], cap)[0])
        if t < dist:
            return True
    return False


def apparent_height(view: MirrorView, fk_human, target: BodyPartId,
                    resolution) -> tuple:
    """Vertical silhouette extent of `target` in pixels, with out-of-frame flag.

    ``fk_human`` may be an FKResult or a raw list of (Capsule, BodyPartId).
    Returns (height_px, out_of_frame).
    """
    from .render import render_view, silhouette_mask

    scene = fk_human.scene() if hasattr(fk_human, "scene") else list(fk_human)
    _, labels = render_view(scene, view, resolution)
    mask = silhouette_mask(labels, {target})
    rows = np.flatnonzero(mask.bits.any(axis=1))
    if rows.size == 0:
        return 0, True
    return int(rows[-1] - rows[0] + 1), False
