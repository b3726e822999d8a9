"""Deterministic ray-cast rasterizer and the 2D filter/overlay primitives.

One primary ray per pixel against a capsule scene, flat Lambert shading with
a single fixed directional light, per-part base colors, and a label buffer
recording the nearest-hit part per pixel. All operations are pure functions
of their inputs; identical inputs produce bit-identical buffers (float64
math throughout; cross-platform agreement is within 1 ULP of the float ops,
which the uint8 quantization absorbs in practice).

The camera convention: ``camera_pose`` maps camera space to world space; the
camera looks along its local +Z with +Y up in the image and +X right.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from PIL import Image
from scipy import ndimage

from .body import BACKGROUND_LABEL, Actor, BodyPartId, SegmentKind, Side
from .geometry import Transform, quat_to_matrix, smoothstep

BACKDROP_COLOR = np.array([128, 128, 128, 255], dtype=np.uint8)
ROBOT_SKIN_COLOR = np.array([96, 104, 112, 255], dtype=np.uint8)

_LIGHT_DIR = np.array([0.3, 0.6, -0.74])
_LIGHT_DIR = _LIGHT_DIR / np.linalg.norm(_LIGHT_DIR)
_AMBIENT = 0.35

# base colors per (actor, segment); human limbs are nearby skin tones on
# purpose so color alone barely separates adjacent regions
_BASE_COLORS = {
    (Actor.HUMAN, SegmentKind.HEAD): (231, 198, 166),
    (Actor.HUMAN, SegmentKind.CHEST): (92, 112, 152),
    (Actor.HUMAN, SegmentKind.SHOULDER): (110, 128, 164),
    (Actor.HUMAN, SegmentKind.UPPER_ARM): (219, 183, 149),
    (Actor.HUMAN, SegmentKind.FOREARM): (227, 191, 154),
    (Actor.HUMAN, SegmentKind.PALM): (236, 199, 161),
    (Actor.HUMAN, SegmentKind.MIDDLE_FINGERTIP): (238, 201, 164),
    (Actor.ROBOT, SegmentKind.HEAD): (120, 130, 146),
    (Actor.ROBOT, SegmentKind.CHEST): (84, 94, 110),
    (Actor.ROBOT, SegmentKind.SHOULDER): (104, 114, 130),
    (Actor.ROBOT, SegmentKind.UPPER_ARM): (112, 120, 134),
    (Actor.ROBOT, SegmentKind.FOREARM): (118, 126, 140),
    (Actor.ROBOT, SegmentKind.PALM): (124, 132, 146),
    (Actor.ROBOT, SegmentKind.MIDDLE_FINGERTIP): (128, 136, 150),
}


def part_base_color(part: BodyPartId) -> np.ndarray:
    return np.array(_BASE_COLORS[(part.actor, part.segment)], dtype=np.float64)


@dataclass
class Framebuffer:
    """RGBA8 image, row-major, shape (height, width, 4)."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels)
        if p.ndim != 3 or p.shape[2] != 4 or p.dtype != np.uint8:
            raise ValueError("framebuffer must be (h, w, 4) uint8")
        self.pixels = p

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def copy(self) -> "Framebuffer":
        return Framebuffer(self.pixels.copy())

    @staticmethod
    def filled(width: int, height: int, color) -> "Framebuffer":
        px = np.empty((height, width, 4), dtype=np.uint8)
        px[:, :] = np.asarray(color, dtype=np.uint8)
        return Framebuffer(px)

    def to_png_bytes(self) -> bytes:
        buf = io.BytesIO()
        Image.fromarray(self.pixels, "RGBA").save(buf, format="PNG")
        return buf.getvalue()

    def save_png(self, path):
        Image.fromarray(self.pixels, "RGBA").save(path, format="PNG")

    @staticmethod
    def from_png_bytes(data: bytes) -> "Framebuffer":
        img = Image.open(io.BytesIO(data)).convert("RGBA")
        return Framebuffer(np.asarray(img, dtype=np.uint8).copy())

    @staticmethod
    def load_png(path) -> "Framebuffer":
        img = Image.open(path).convert("RGBA")
        return Framebuffer(np.asarray(img, dtype=np.uint8).copy())


@dataclass
class LabelBuffer:
    """Per-pixel part labels; 0 is background (see BodyPartId.label)."""

    labels: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.labels)
        if a.ndim != 2:
            raise ValueError("label buffer must be 2-D")
        self.labels = a.astype(np.int32, copy=False)

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]


@dataclass
class BitMask:
    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits).astype(bool, copy=False)

    @property
    def count(self) -> int:
        return int(self.bits.sum())


def camera_rays(view, width: int, height: int):
    """World-space origins/directions of the per-pixel primary rays."""
    tan_half = np.tan(view.fov_y / 2.0) / view.zoom
    aspect = width / height
    xs = (np.arange(width) + 0.5) / width * 2.0 - 1.0
    ys = 1.0 - (np.arange(height) + 0.5) / height * 2.0
    sx, sy = view.principal_shift
    gx, gy = np.meshgrid(xs, ys)
    cam = np.stack([
        (gx + sx) * tan_half * aspect,
        (gy + sy) * tan_half,
        np.ones_like(gx),
    ], axis=-1).reshape(-1, 3)
    cam /= np.linalg.norm(cam, axis=1, keepdims=True)
    rot = quat_to_matrix(view.camera_pose.rotation)
    dirs = cam @ rot.T
    origin = view.camera_pose.translation
    return origin, dirs


def render_view(scene: Sequence[tuple], view, resolution) -> tuple:
    """Ray-cast `scene` ((Capsule, BodyPartId) pairs) through `view`.

    Returns (Framebuffer, LabelBuffer).
    """
    from .geometry import ray_capsule_intersect_batch

    width, height = int(resolution[0]), int(resolution[1])
    if width <= 0 or height <= 0:
        raise ValueError("resolution must be positive")
    origin, dirs = camera_rays(view, width, height)
    n = dirs.shape[0]
    origins = np.broadcast_to(origin, (n, 3))

    best_t = np.full(n, np.inf)
    best_label = np.zeros(n, dtype=np.int32)
    hit_capsule_idx = np.full(n, -1, dtype=np.int32)
    capsules = [c for c, _ in scene]
    for i, (capsule, part) in enumerate(scene):
        t = ray_capsule_intersect_batch(origins, dirs, capsule)
        closer = t < best_t
        best_t = np.where(closer, t, best_t)
        best_label = np.where(closer, np.int32(part.label()), best_label)
        hit_capsule_idx = np.where(closer, np.int32(i), hit_capsule_idx)

    rgba = np.empty((n, 4), dtype=np.float64)
    rgba[:, :] = BACKDROP_COLOR.astype(np.float64)
    hit = hit_capsule_idx >= 0
    if hit.any():
        points = origins[hit] + best_t[hit, None] * dirs[hit]
        normals = np.zeros_like(points)
        idx_hit = hit_capsule_idx[hit]
        for i, capsule in enumerate(capsules):
            sel = idx_hit == i
            if not sel.any():
                continue
            a, b = capsule.endpoint_a, capsule.endpoint_b
            ab = b - a
            ab2 = float(ab @ ab)
            p = points[sel]
            if ab2 < 1e-18:
                nrm = p - a
            else:
                tt = np.clip((p - a) @ ab / ab2, 0.0, 1.0)
                nrm = p - (a[None, :] + tt[:, None] * ab[None, :])
            nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
            normals[sel] = nrm
        lambert = _AMBIENT + (1.0 - _AMBIENT) * np.maximum(0.0, normals @ _LIGHT_DIR)
        colors = np.zeros((hit.sum(), 3))
        labels_hit = best_label[hit]
        for part_label in np.unique(labels_hit):
            base = part_base_color(BodyPartId.from_label(int(part_label)))
            colors[labels_hit == part_label] = base
        rgba[hit, :3] = colors * lambert[:, None]
        rgba[hit, 3] = 255.0

    px = np.clip(np.round(rgba), 0, 255).astype(np.uint8).reshape(height, width, 4)
    labels = best_label.reshape(height, width)
    return Framebuffer(px), LabelBuffer(labels)


def silhouette_mask(labels: LabelBuffer, parts) -> BitMask:
    """Bit set iff the pixel's label belongs to `parts` (BodyPartId set)."""
    wanted = {p.label() for p in parts}
    if not wanted:
        return BitMask(np.zeros_like(labels.labels, dtype=bool))
    bits = np.isin(labels.labels, sorted(wanted))
    return BitMask(bits)


def mask_boundary(mask: BitMask) -> np.ndarray:
    """Mask pixels with an 8-neighbor outside the mask (frame edge counts)."""
    m = mask.bits
    eroded = ndimage.binary_erosion(m, structure=np.ones((3, 3), dtype=bool),
                                    border_value=0)
    return m & ~eroded


def draw_outline(fb: Framebuffer, mask: BitMask, width_px: int, color) -> Framebuffer:
    """Color the band within `width_px` (Chebyshev) outside-or-on the mask
    boundary; strict interior pixels are untouched."""
    if width_px < 1:
        raise ValueError("outline width must be >= 1")
    out = fb.copy()
    boundary = mask_boundary(mask)
    if not boundary.any():
        return out
    # Chebyshev distance to the nearest boundary pixel
    dist = ndimage.distance_transform_cdt(~boundary, metric="chessboard")
    band = (dist < width_px) & (~mask.bits | boundary)
    out.pixels[band] = np.asarray(color, dtype=np.uint8)
    return out


@dataclass(frozen=True)
class Grayscale:
    pass


@dataclass(frozen=True)
class GaussianBlur:
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("blur sigma must be positive")


@dataclass(frozen=True)
class Vignette:
    r0: float
    r1: float

    def __post_init__(self):
        if not (0.0 <= self.r0 < self.r1):
            raise ValueError("vignette needs 0 <= r0 < r1")


FilterKind = Union[Grayscale, GaussianBlur, Vignette]

_LUMA = np.array([0.2126, 0.7152, 0.0722])  # Rec.709


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = int(np.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def apply_filter(fb: Framebuffer, filt: FilterKind,
                 region_mask: Optional[BitMask] = None) -> Framebuffer:
    """Apply a filter where region_mask is set (everywhere when None)."""
    mask = region_mask.bits if region_mask is not None else np.ones(
        (fb.height, fb.width), dtype=bool)
    src = fb.pixels.astype(np.float64)
    out = fb.copy()

    if isinstance(filt, Grayscale):
        luma = src[:, :, :3] @ _LUMA
        vals = np.clip(np.round(luma), 0, 255).astype(np.uint8)
        for c in range(3):
            out.pixels[:, :, c][mask] = vals[mask]
    elif isinstance(filt, GaussianBlur):
        k = _gaussian_kernel(filt.sigma)
        blurred = src.copy()
        for axis in (0, 1):
            blurred = ndimage.convolve1d(blurred, k, axis=axis, mode="nearest")
        vals = np.clip(np.round(blurred), 0, 255).astype(np.uint8)
        out.pixels[mask] = vals[mask]
    elif isinstance(filt, Vignette):
        h, w = fb.height, fb.width
        ys, xs = np.mgrid[0:h, 0:w]
        cx, cy = (w - 1) / 2.0, (h - 1) / 2.0
        half_diag = np.sqrt(cx * cx + cy * cy)
        r = np.sqrt((xs - cx) ** 2 + (ys - cy) ** 2) / half_diag
        t = smoothstep(filt.r0, filt.r1, r)[:, :, None]
        backdrop = BACKDROP_COLOR.astype(np.float64)
        mixed = (1.0 - t) * src + t * backdrop[None, None, :]
        vals = np.clip(np.round(mixed), 0, 255).astype(np.uint8)
        out.pixels[mask] = vals[mask]
    else:
        raise ValueError(f"unknown filter {filt!r}")
    return out


_CORNERS = ("top_left", "top_right", "bottom_left", "bottom_right")


def scale_nearest(pixels: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    h, w = pixels.shape[:2]
    xi = np.minimum((np.arange(new_w) + 0.5) * w / new_w, w - 1).astype(int)
    yi = np.minimum((np.arange(new_h) + 0.5) * h / new_h, h - 1).astype(int)
    return pixels[yi][:, xi]


def composite(fb: Framebuffer, overlay: Framebuffer, corner: str = "top_right",
              size: float = 0.25) -> Framebuffer:
    """Alpha-over `overlay` scaled to `size` of the frame height at `corner`."""
    if corner not in _CORNERS:
        raise ValueError(f"corner must be one of {_CORNERS}")
    target_h = int(round(size * fb.height))
    target_w = int(round(target_h * overlay.width / overlay.height))
    if target_h < 1 or target_w < 1 or target_h > fb.height or target_w > fb.width:
        raise ValueError("overlay does not fit in the frame after scaling")
    scaled = scale_nearest(overlay.pixels, target_w, target_h)

    y0 = 0 if corner.startswith("top") else fb.height - target_h
    x0 = 0 if corner.endswith("left") else fb.width - target_w

    out = fb.copy()
    dst = out.pixels[y0:y0 + target_h, x0:x0 + target_w].astype(np.float64)
    srg = scaled.astype(np.float64)
    alpha = srg[:, :, 3:4] / 255.0
    dst[:, :, :3] = srg[:, :, :3] * alpha + dst[:, :, :3] * (1.0 - alpha)
    dst[:, :, 3] = np.maximum(dst[:, :, 3], srg[:, :, 3])
    out.pixels[y0:y0 + target_h, x0:x0 + target_w] = np.clip(
        np.round(dst), 0, 255).astype(np.uint8)
    return out
