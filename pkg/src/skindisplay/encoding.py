"""The six-dimension encoding pipeline turning scene state into patch images.

Dimensions: target, environment, spatial, actor, border, attention. Exactly
one variant per dimension applies per frame, in the fixed stage order of
``render_patch``. The stage order is part of the contract:

1. spatial (mirror camera: depth / dynamic offset, camera-motion zoom),
2. ray-cast render of the human body,
3. environment stage on non-target pixels,
4. target stage,
5. actor stage,
6. border stage,
7. attention cue overlay.

``render_patch`` is pure given its inputs; mirror and attention states are
advanced by the caller on the simulation tick.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from .body import (
    Actor,
    BodyPartId,
    FKResult,
    SegmentKind,
    Side,
    SkinPatch,
    Skeleton,
)
from .mirror import MirrorState, MirrorView, mirror_view
from .render import (
    BACKDROP_COLOR,
    ROBOT_SKIN_COLOR,
    BitMask,
    Framebuffer,
    GaussianBlur,
    Grayscale,
    LabelBuffer,
    Vignette,
    apply_filter,
    composite,
    draw_outline,
    render_view,
    silhouette_mask,
)

ENCODING_SCHEMA_VERSION = 1

OUTLINE_GREEN = (0, 220, 0, 255)
ATTENTION_BLUE = (0, 110, 255, 255)
ATTENTION_SPEED = 1.5  # m/s, the "fast" cue
ATTENTION_BAND_WIDTH = 0.05  # m of skin the cue band covers
ATTENTION_HOLD = 0.5  # s the cue lingers after arrival


# ---------------------------------------------------------------------------
# Dimension variants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectMirror:
    pass


@dataclass(frozen=True)
class Outline:
    color: tuple = OUTLINE_GREEN
    width: int = 3

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("outline width must be >= 1")


@dataclass(frozen=True)
class Silhouette:
    color: tuple = OUTLINE_GREEN


@dataclass(frozen=True)
class TextureColor:
    pass


@dataclass(frozen=True)
class Symbol:
    glyph: str = ""  # defaults to the glyph of the intent's human part


TargetEncoding = Union[DirectMirror, Outline, Silhouette, TextureColor, Symbol]


@dataclass(frozen=True)
class FullEnvironment:
    pass


@dataclass(frozen=True)
class GrayscaleEnvironment:
    pass


@dataclass(frozen=True)
class VignetteEnvironment:
    r0: float = 0.35
    r1: float = 0.95


@dataclass(frozen=True)
class BlurEnvironment:
    sigma: float = 2.5


@dataclass(frozen=True)
class NoEnvironment:
    fill: tuple = tuple(int(c) for c in BACKDROP_COLOR)


EnvironmentEncoding = Union[FullEnvironment, GrayscaleEnvironment,
                            VignetteEnvironment, BlurEnvironment, NoEnvironment]


@dataclass(frozen=True)
class SpatialCues:
    depth: bool = True
    offset: bool = True


@dataclass(frozen=True)
class Portrait:
    corner: str = "top_right"
    size: float = 0.25


@dataclass(frozen=True)
class SurfaceDeformation:
    mode: str = "poke"  # poke | grasp

    def __post_init__(self):
        if self.mode not in ("poke", "grasp"):
            raise ValueError("deformation mode must be poke or grasp")


@dataclass(frozen=True)
class ComplementaryShape:
    pass


@dataclass(frozen=True)
class CameraMotion:
    mode: str = "zoom_in"  # zoom_in == robot approaches, zoom_out == human invited
    ramp_seconds: float = 1.5
    magnitude: float = 0.5

    def __post_init__(self):
        if self.mode not in ("zoom_in", "zoom_out"):
            raise ValueError("camera motion mode must be zoom_in or zoom_out")


ActorEncoding = Union[Portrait, SurfaceDeformation, ComplementaryShape, CameraMotion]


@dataclass(frozen=True)
class ThinBorder:
    pass


@dataclass(frozen=True)
class ThickBorder:
    width: int = 10

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("border width must be >= 1")


@dataclass(frozen=True)
class SeamlessBorder:
    feather: int = 12

    def __post_init__(self):
        if self.feather < 1:
            raise ValueError("feather must be >= 1")


BorderEncoding = Union[ThinBorder, ThickBorder, SeamlessBorder]


@dataclass(frozen=True)
class NoGuidance:
    pass


@dataclass(frozen=True)
class VisualGuidance:
    color: tuple = ATTENTION_BLUE
    speed: float = ATTENTION_SPEED

    def __post_init__(self):
        if self.speed <= 0:
            raise ValueError("guidance speed must be positive")


AttentionEncoding = Union[NoGuidance, VisualGuidance]


@dataclass(frozen=True)
class EncodingConfig:
    target: TargetEncoding = field(default_factory=DirectMirror)
    environment: EnvironmentEncoding = field(default_factory=FullEnvironment)
    spatial: SpatialCues = field(default_factory=SpatialCues)
    actor: ActorEncoding = field(default_factory=Portrait)
    border: BorderEncoding = field(default_factory=ThinBorder)
    attention: AttentionEncoding = field(default_factory=NoGuidance)


def preset_final(patch: SkinPatch) -> EncodingConfig:
    """The deployed configuration: outlined live mirror on a clean fill,
    headshot portraits, thin border, fast blue guidance; depth and offset
    cues everywhere except the fingertip's tiny display."""
    tiny = patch.host.segment is SegmentKind.MIDDLE_FINGERTIP
    return EncodingConfig(
        target=Outline(color=OUTLINE_GREEN, width=3),
        environment=NoEnvironment(),
        spatial=SpatialCues(depth=not tiny, offset=not tiny),
        actor=Portrait(),
        border=ThinBorder(),
        attention=VisualGuidance(color=ATTENTION_BLUE, speed=ATTENTION_SPEED),
    )


# ---------------------------------------------------------------------------
# Touch intent
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TouchIntent:
    """Who initiates, with which robot part, toward which human part.

    initiator=robot: robot_part is the reaching hand, human_part the target.
    initiator=human: robot_part is the offered region, human_part the
    human's initiating hand.
    """

    initiator: Actor
    robot_part: BodyPartId
    human_part: BodyPartId

    def __post_init__(self):
        if self.robot_part.actor is not Actor.ROBOT:
            raise ValueError("robot_part must belong to the robot")
        if self.human_part.actor is not Actor.HUMAN:
            raise ValueError("human_part must belong to the human")
        if self.initiator is Actor.ROBOT and self.robot_part.segment is not SegmentKind.PALM:
            raise ValueError("robot-initiated touch uses a robot palm")
        if self.initiator is Actor.HUMAN and self.human_part.segment is not SegmentKind.PALM:
            raise ValueError("human-initiated touch uses a human palm")


@dataclass(frozen=True)
class SceneState:
    fk_robot: FKResult
    fk_human: FKResult


@dataclass(frozen=True)
class Clock:
    t: float
    dt: float


@dataclass(frozen=True)
class PatchRender:
    frame: Framebuffer
    labels: Optional[LabelBuffer]
    occluded: bool  # line of sight from patch to target crosses the robot
    target_behind: bool


# ---------------------------------------------------------------------------
# Procedural assets: headshots and symbol glyphs
# ---------------------------------------------------------------------------

def _blank(size: int, color) -> np.ndarray:
    px = np.zeros((size, size, 4), dtype=np.uint8)
    px[:, :] = color
    return px


def robot_headshot(size: int = 64) -> Framebuffer:
    """Flat schematic robot head: angular face, glowing eyes, antenna."""
    px = _blank(size, (30, 34, 44, 255))
    ys, xs = np.mgrid[0:size, 0:size]
    s = size / 64.0
    head = (np.abs(xs - 32 * s) < 22 * s) & (ys > 14 * s) & (ys < 56 * s)
    px[head] = (110, 122, 140, 255)
    for ex in (22, 42):
        eye = (np.abs(xs - ex * s) < 6 * s) & (np.abs(ys - 32 * s) < 4 * s)
        px[eye] = (70, 230, 255, 255)
    mouth = (np.abs(xs - 32 * s) < 12 * s) & (np.abs(ys - 46 * s) < 2 * s)
    px[mouth] = (40, 44, 54, 255)
    antenna = (np.abs(xs - 32 * s) < 1.5 * s) & (ys > 4 * s) & (ys <= 14 * s)
    px[antenna] = (110, 122, 140, 255)
    tip = (xs - 32 * s) ** 2 + (ys - 5 * s) ** 2 < (3 * s) ** 2
    px[tip] = (255, 80, 80, 255)
    return Framebuffer(px)


def human_headshot(size: int = 64) -> Framebuffer:
    """Flat schematic human head: oval face, hair, eyes, mouth."""
    px = _blank(size, (214, 205, 188, 255))
    ys, xs = np.mgrid[0:size, 0:size]
    s = size / 64.0
    face = ((xs - 32 * s) / (18 * s)) ** 2 + ((ys - 36 * s) / (22 * s)) ** 2 < 1
    px[face] = (233, 196, 158, 255)
    hair = (((xs - 32 * s) / (20 * s)) ** 2 + ((ys - 24 * s) / (16 * s)) ** 2 < 1) & (ys < 26 * s)
    px[hair] = (72, 48, 30, 255)
    for ex in (24, 40):
        eye = (xs - ex * s) ** 2 + (ys - 36 * s) ** 2 < (2.5 * s) ** 2
        px[eye] = (40, 30, 25, 255)
    mouth = (np.abs(xs - 32 * s) < 7 * s) & (np.abs(ys - 48 * s) < 1.8 * s)
    px[mouth] = (170, 90, 80, 255)
    return Framebuffer(px)


def headshot_for(actor: Actor, size: int = 64) -> Framebuffer:
    return robot_headshot(size) if actor is Actor.ROBOT else human_headshot(size)


def glyph_name(part: BodyPartId) -> str:
    return f"{part.side.value}_{part.segment.value}"


def glyph_mask(name: str, size: int) -> BitMask:
    """Icon atlas for the symbol target encoding.

    One fixed icon per human body part: palm = disc, forearm = tall bar,
    upper arm = triangle, shoulder = diamond, fingertip = small square.
    A corner notch marks the side (left notch = left part).
    """
    side, _, segment = name.partition("_")
    ys, xs = np.mgrid[0:size, 0:size]
    c = size / 2.0
    r = size * 0.32
    if segment == "palm":
        m = (xs - c) ** 2 + (ys - c) ** 2 < r * r
    elif segment == "forearm":
        m = (np.abs(xs - c) < size * 0.12) & (np.abs(ys - c) < size * 0.36)
    elif segment == "upper_arm":
        m = (ys - (c - r) >= 0) & (ys - (c - r) <= 2 * r) & \
            (np.abs(xs - c) <= (ys - (c - r)) * 0.5)
    elif segment == "shoulder":
        m = (np.abs(xs - c) + np.abs(ys - c)) < r
    elif segment == "middle_fingertip":
        m = (np.abs(xs - c) < size * 0.10) & (np.abs(ys - c) < size * 0.10)
    else:  # head/chest fall back to a ring
        d2 = (xs - c) ** 2 + (ys - c) ** 2
        m = (d2 < r * r) & (d2 > (r * 0.6) ** 2)
    notch = size * 0.12
    if side == "left":
        m = m | ((xs < notch) & (ys < notch))
    elif side == "right":
        m = m | ((xs >= size - notch) & (ys < notch))
    return BitMask(m)


# ---------------------------------------------------------------------------
# Attention cue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathLeg:
    part: Optional[BodyPartId]  # None for the chest->shoulder link
    length: float


@dataclass(frozen=True)
class AttentionCueState:
    legs: tuple
    position: float = 0.0
    active: bool = True
    time_since_arrival: float = 0.0

    @property
    def path_length(self) -> float:
        return float(sum(leg.length for leg in self.legs))

    def arrival_time(self, speed: float) -> float:
        return self.path_length / speed

    def current_leg(self):
        """(leg, meters into that leg) at the current position."""
        remaining = self.position
        for leg in self.legs:
            if remaining <= leg.length or leg is self.legs[-1]:
                return leg, min(remaining, leg.length)
            remaining -= leg.length
        return self.legs[-1], self.legs[-1].length


_ARM_CHAIN_ORDER = (SegmentKind.SHOULDER, SegmentKind.UPPER_ARM,
                    SegmentKind.FOREARM, SegmentKind.PALM,
                    SegmentKind.MIDDLE_FINGERTIP)


def build_attention_path(fk_robot: FKResult, host: BodyPartId) -> AttentionCueState:
    """Cue path from the chest center along the arm chain to the host part."""
    skeleton = fk_robot.skeleton
    chest_part = next(p for p in fk_robot.segment_world if p.segment is SegmentKind.CHEST)
    chest_center = fk_robot.capsule(chest_part).center
    prefix = "l" if host.side is Side.LEFT else "r"
    shoulder_joint = fk_robot.joint_world[skeleton.joint_index(f"{prefix}_shoulder")]
    legs = [PathLeg(None, float(np.linalg.norm(shoulder_joint.translation - chest_center)))]
    if host.segment is SegmentKind.SHOULDER:
        cap = fk_robot.capsule(host)
        legs.append(PathLeg(host, cap.axis_length / 2.0))
        return AttentionCueState(legs=tuple(legs))
    for seg_kind in _ARM_CHAIN_ORDER[1:]:
        part = BodyPartId(Actor.ROBOT, host.side, seg_kind)
        cap = fk_robot.capsule(part)
        if seg_kind is host.segment:
            legs.append(PathLeg(part, cap.axis_length / 2.0))  # stop at the patch
            break
        legs.append(PathLeg(part, cap.axis_length))
    return AttentionCueState(legs=tuple(legs))


def attention_step(state: AttentionCueState, fk_robot: FKResult, patch: SkinPatch,
                   speed: float, dt: float) -> AttentionCueState:
    """Advance the cue by speed*dt; deactivate after arrival plus a hold."""
    if not state.active:
        return state
    total = state.path_length
    position = state.position + speed * dt
    if position >= total:
        position = total
        since = state.time_since_arrival + dt
        return replace(state, position=position, time_since_arrival=since,
                       active=since <= ATTENTION_HOLD)
    return replace(state, position=position)


# ---------------------------------------------------------------------------
# Pipeline stages
# ---------------------------------------------------------------------------

def idle_patch_frame(patch: SkinPatch) -> Framebuffer:
    return Framebuffer.filled(patch.resolution[0], patch.resolution[1], ROBOT_SKIN_COLOR)


def _environment_stage(fb: Framebuffer, labels: LabelBuffer, target: BodyPartId,
                       env: EnvironmentEncoding) -> Framebuffer:
    region = BitMask(labels.labels != target.label())
    if isinstance(env, FullEnvironment):
        return fb
    if isinstance(env, GrayscaleEnvironment):
        return apply_filter(fb, Grayscale(), region)
    if isinstance(env, VignetteEnvironment):
        return apply_filter(fb, Vignette(env.r0, env.r1), region)
    if isinstance(env, BlurEnvironment):
        return apply_filter(fb, GaussianBlur(env.sigma), region)
    if isinstance(env, NoEnvironment):
        out = fb.copy()
        out.pixels[region.bits] = np.asarray(env.fill, dtype=np.uint8)
        return out
    raise ValueError(f"unknown environment encoding {env!r}")


def _target_stage(fb: Framebuffer, labels: LabelBuffer, intent: TouchIntent,
                  target_enc: TargetEncoding) -> Framebuffer:
    target = intent.human_part
    if isinstance(target_enc, DirectMirror):
        return fb
    if isinstance(target_enc, Outline):
        mask = silhouette_mask(labels, {target})
        return draw_outline(fb, mask, target_enc.width, target_enc.color)
    if isinstance(target_enc, Silhouette):
        out = fb.copy()
        mask = silhouette_mask(labels, {target})
        out.pixels[mask.bits] = np.asarray(target_enc.color, dtype=np.uint8)
        return out
    if isinstance(target_enc, TextureColor):
        mask = silhouette_mask(labels, {target})
        out = fb.copy()
        if mask.count > 0:
            mean = fb.pixels[mask.bits, :3].astype(np.float64).mean(axis=0)
            color = np.concatenate([np.round(mean), [255]]).astype(np.uint8)
        else:
            from .render import part_base_color
            color = np.concatenate([np.round(part_base_color(target)), [255]]).astype(np.uint8)
        out.pixels[:, :] = color
        return out
    if isinstance(target_enc, Symbol):
        name = target_enc.glyph or glyph_name(target)
        out = Framebuffer.filled(fb.width, fb.height, BACKDROP_COLOR)
        size = int(min(fb.width, fb.height) * 0.7)
        mask = glyph_mask(name, size)
        y0 = (fb.height - size) // 2
        x0 = (fb.width - size) // 2
        sub = out.pixels[y0:y0 + size, x0:x0 + size]
        sub[mask.bits] = (30, 30, 30, 255)
        return out
    raise ValueError(f"unknown target encoding {target_enc!r}")


_template_cache: dict = {}


def silhouette_template(patch: SkinPatch, target: BodyPartId,
                        fk_robot: FKResult, fk_human: FKResult) -> BitMask:
    """Reference silhouette of `target` as seen from `patch` (cached)."""
    key = (patch.id, target.label())
    if key not in _template_cache:
        state = MirrorState(patch=patch, target=target)
        view = mirror_view(state, fk_human, fk_robot)
        _, labels = render_view(fk_human.scene(), view, patch.resolution)
        _template_cache[key] = silhouette_mask(labels, {target})
    return _template_cache[key]


def _actor_stage(fb: Framebuffer, intent: TouchIntent, actor_enc: ActorEncoding,
                 patch: SkinPatch, scene: SceneState) -> Framebuffer:
    if isinstance(actor_enc, Portrait):
        shot = headshot_for(intent.initiator)
        return composite(fb, shot, actor_enc.corner, actor_enc.size)
    if isinstance(actor_enc, SurfaceDeformation):
        return _deformation_decal(fb, actor_enc.mode)
    if isinstance(actor_enc, ComplementaryShape):
        template = silhouette_template(patch, intent.human_part,
                                       scene.fk_robot, scene.fk_human)
        out = fb.copy()
        outside = ~template.bits
        out.pixels[outside] = ROBOT_SKIN_COLOR
        out.pixels[outside, 3] = 0
        return out
    if isinstance(actor_enc, CameraMotion):
        return fb  # realized as a zoom ramp at the camera stage
    raise ValueError(f"unknown actor encoding {actor_enc!r}")


def _deformation_decal(fb: Framebuffer, mode: str) -> Framebuffer:
    """Shaded indentation: center dimple affords poking, side notches grasping."""
    out = fb.copy()
    h, w = fb.height, fb.width
    ys, xs = np.mgrid[0:h, 0:w]
    img = out.pixels[:, :, :3].astype(np.float64)
    if mode == "poke":
        r = 0.22 * min(w, h)
        d = np.sqrt((xs - w / 2) ** 2 + (ys - h / 2) ** 2) / r
        shade = np.clip(1.0 - d, 0.0, 1.0) ** 1.5
        img *= (1.0 - 0.55 * shade)[:, :, None]
        rim = np.clip(1.0 - np.abs(d - 1.1) / 0.15, 0.0, 1.0)
        img = np.minimum(255.0, img + 35.0 * rim[:, :, None])
    else:  # grasp: notches squeezing in from both sides
        for cx in (0, w - 1):
            d = np.sqrt((xs - cx) ** 2 + (ys - h / 2) ** 2) / (0.30 * h)
            shade = np.clip(1.0 - d, 0.0, 1.0) ** 1.5
            img *= (1.0 - 0.55 * shade)[:, :, None]
    out.pixels[:, :, :3] = np.clip(np.round(img), 0, 255).astype(np.uint8)
    return out


def camera_motion_zoom(actor_enc: ActorEncoding, t: float) -> float:
    if not isinstance(actor_enc, CameraMotion):
        return 1.0
    ramp = min(max(t, 0.0) / actor_enc.ramp_seconds, 1.0)
    factor = 1.0 + actor_enc.magnitude * ramp
    return factor if actor_enc.mode == "zoom_in" else 1.0 / factor


def _border_stage(fb: Framebuffer, border: BorderEncoding) -> Framebuffer:
    out = fb.copy()
    h, w = fb.height, fb.width
    if isinstance(border, ThinBorder):
        width = 1
        color = (32, 32, 32, 255)
    elif isinstance(border, ThickBorder):
        width = min(border.width, min(h, w) // 2)
        color = (18, 18, 18, 255)
    elif isinstance(border, SeamlessBorder):
        ys, xs = np.mgrid[0:h, 0:w]
        edge_dist = np.minimum(np.minimum(xs, w - 1 - xs), np.minimum(ys, h - 1 - ys))
        t = np.clip(1.0 - edge_dist / border.feather, 0.0, 1.0)[:, :, None]
        skin = ROBOT_SKIN_COLOR[:3].astype(np.float64)
        rgb = out.pixels[:, :, :3].astype(np.float64)
        out.pixels[:, :, :3] = np.clip(
            np.round((1 - t) * rgb + t * skin[None, None, :]), 0, 255).astype(np.uint8)
        return out
    else:
        raise ValueError(f"unknown border encoding {border!r}")
    out.pixels[:width, :] = color
    out.pixels[-width:, :] = color
    out.pixels[:, :width] = color
    out.pixels[:, -width:] = color
    return out


def _attention_overlay(fb: Framebuffer, patch: SkinPatch, fk_robot: FKResult,
                       cue: AttentionCueState, color) -> Framebuffer:
    """Blue band where the cue currently crosses this patch's host segment."""
    if not cue.active:
        return fb
    leg, into = cue.current_leg()
    if leg.part != patch.host:
        return fb
    seg_cap = fk_robot.capsule(patch.host)
    seg_len = max(seg_cap.axis_length, 1e-6)
    frac_center, _ = patch.center_uv_anchor
    extent_h = patch.extent[1]
    # axial meters of the patch's top edge (proximal side) along the segment
    patch_top_m = frac_center * seg_len - extent_h / 2.0
    row_frac = (into - patch_top_m) / extent_h
    band_half = (ATTENTION_BAND_WIDTH / 2.0) / extent_h
    lo = int(np.floor((row_frac - band_half) * (fb.height - 1)))
    hi = int(np.ceil((row_frac + band_half) * (fb.height - 1)))
    if hi < 0 or lo >= fb.height:
        return fb
    out = fb.copy()
    out.pixels[max(0, lo):min(fb.height, hi + 1), :] = np.asarray(color, dtype=np.uint8)
    return out


# ---------------------------------------------------------------------------
# The pipeline
# ---------------------------------------------------------------------------

def render_patch(scene: SceneState, patch: SkinPatch, intent: Optional[TouchIntent],
                 config: EncodingConfig, clock: Clock,
                 mirror_state: Optional[MirrorState] = None,
                 attention: Optional[AttentionCueState] = None) -> PatchRender:
    """Render one patch frame through the staged encoding pipeline.

    Idle patches (no intent, or the intent lives on another patch) show the
    robot skin tone, plus the attention cue band while it crosses them.
    """
    active = intent is not None and patch.host == intent.robot_part
    if not active:
        fb = idle_patch_frame(patch)
        if attention is not None and isinstance(config.attention, VisualGuidance):
            fb = _attention_overlay(fb, patch, scene.fk_robot, attention,
                                    config.attention.color)
        return PatchRender(frame=fb, labels=None, occluded=False, target_behind=False)

    if mirror_state is None:
        mirror_state = MirrorState(patch=patch, target=intent.human_part,
                                   depth_enabled=config.spatial.depth,
                                   offset_enabled=config.spatial.offset)

    view = mirror_view(mirror_state, scene.fk_human, scene.fk_robot)
    zoom_mod = camera_motion_zoom(config.actor, clock.t)
    if zoom_mod != 1.0:
        view = MirrorView(camera_pose=view.camera_pose, fov_y=view.fov_y,
                          principal_shift=view.principal_shift,
                          zoom=view.zoom * zoom_mod)

    fb, labels = render_view(scene.fk_human.scene(), view, patch.resolution)
    fb = _environment_stage(fb, labels, intent.human_part, config.environment)
    fb = _target_stage(fb, labels, intent, config.target)
    fb = _actor_stage(fb, intent, config.actor, patch, scene)
    fb = _border_stage(fb, config.border)
    if attention is not None and isinstance(config.attention, VisualGuidance):
        fb = _attention_overlay(fb, patch, scene.fk_robot, attention,
                                config.attention.color)

    from .mirror import _line_occluded_by_robot
    from .body import part_anchor, patch_frame
    frame = patch_frame(patch, scene.fk_robot)
    anchor = part_anchor(intent.human_part, scene.fk_human)
    to_target = anchor - frame.translation
    normal = frame.apply_vector([0, 0, 1])
    behind = float(to_target @ normal) <= 0.0
    occluded = _line_occluded_by_robot(frame.translation, anchor, scene.fk_robot,
                                       exclude=patch.host)
    return PatchRender(frame=fb, labels=labels, occluded=occluded, target_behind=behind)


# ---------------------------------------------------------------------------
# Config serialization (schema v1)
# ---------------------------------------------------------------------------

_VARIANTS = {
    "direct_mirror": DirectMirror, "outline": Outline, "silhouette": Silhouette,
    "texture_color": TextureColor, "symbol": Symbol,
    "full": FullEnvironment, "grayscale": GrayscaleEnvironment,
    "vignette": VignetteEnvironment, "blur": BlurEnvironment,
    "no_environment": NoEnvironment,
    "portrait": Portrait, "surface_deformation": SurfaceDeformation,
    "complementary_shape": ComplementaryShape, "camera_motion": CameraMotion,
    "thin": ThinBorder, "thick": ThickBorder, "seamless": SeamlessBorder,
    "no_guidance": NoGuidance, "visual_guidance": VisualGuidance,
}
_VARIANT_NAMES = {cls: name for name, cls in _VARIANTS.items()}


def _variant_to_dict(v) -> dict:
    d = {"kind": _VARIANT_NAMES[type(v)]}
    for f in v.__dataclass_fields__:
        value = getattr(v, f)
        d[f] = list(value) if isinstance(value, tuple) else value
    return d


def _variant_from_dict(d: dict):
    cls = _VARIANTS[d["kind"]]
    kwargs = {}
    for f, spec in cls.__dataclass_fields__.items():
        if f in d:
            value = d[f]
            kwargs[f] = tuple(value) if isinstance(value, list) else value
    return cls(**kwargs)


def encoding_to_dict(config: EncodingConfig) -> dict:
    return {
        "schema_version": ENCODING_SCHEMA_VERSION,
        "target": _variant_to_dict(config.target),
        "environment": _variant_to_dict(config.environment),
        "spatial": {"depth": config.spatial.depth, "offset": config.spatial.offset},
        "actor": _variant_to_dict(config.actor),
        "border": _variant_to_dict(config.border),
        "attention": _variant_to_dict(config.attention),
    }


def encoding_from_dict(d: dict) -> EncodingConfig:
    version = d.get("schema_version", ENCODING_SCHEMA_VERSION)
    if version != ENCODING_SCHEMA_VERSION:
        raise ValueError(f"unsupported encoding schema_version {version}")
    return EncodingConfig(
        target=_variant_from_dict(d["target"]),
        environment=_variant_from_dict(d["environment"]),
        spatial=SpatialCues(depth=bool(d["spatial"]["depth"]),
                            offset=bool(d["spatial"]["offset"])),
        actor=_variant_from_dict(d["actor"]),
        border=_variant_from_dict(d["border"]),
        attention=_variant_from_dict(d["attention"]),
    )
