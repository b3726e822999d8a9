import numpy as np
import pytest

from skindisplay.body import Actor, BodyPartId, SegmentKind, Side
from skindisplay.geometry import Capsule, Transform
from skindisplay.render import (
    BACKDROP_COLOR,
    BitMask,
    Framebuffer,
    GaussianBlur,
    Grayscale,
    LabelBuffer,
    Vignette,
    apply_filter,
    composite,
    draw_outline,
    mask_boundary,
    render_view,
    silhouette_mask,
)

H_FOREARM = BodyPartId(Actor.HUMAN, Side.RIGHT, SegmentKind.FOREARM)
H_PALM = BodyPartId(Actor.HUMAN, Side.RIGHT, SegmentKind.PALM)


class View:
    """Minimal camera for render tests (duck-typed like MirrorView)."""

    def __init__(self, fov_y=np.pi / 3, zoom=1.0, shift=(0.0, 0.0), pose=None):
        self.camera_pose = pose or Transform.identity()
        self.fov_y = fov_y
        self.principal_shift = shift
        self.zoom = zoom


class TestRenderView:
    def test_empty_scene_backdrop(self):
        fb, labels = render_view([], View(), (32, 24))
        assert (fb.pixels == BACKDROP_COLOR).all()
        assert (labels.labels == 0).all()

    def test_projected_area_matches_analytic(self):
        L, r, d = 0.4, 0.05, 0.8
        cap = Capsule([0, -L / 2, d], [0, L / 2, d], r)
        res = 256
        view = View()
        fb, labels = render_view([(cap, H_FOREARM)], view, (res, res))
        count = int((labels.labels == H_FOREARM.label()).sum())
        f_px = (res / 2) / np.tan(view.fov_y / 2)
        expected = (2 * r * L + np.pi * r * r) * (f_px / d) ** 2
        assert count == pytest.approx(expected, rel=0.05)

    def test_deterministic(self):
        cap = Capsule([0, -0.2, 0.7], [0.1, 0.2, 0.8], 0.06)
        view = View()
        fb1, l1 = render_view([(cap, H_PALM)], view, (64, 64))
        fb2, l2 = render_view([(cap, H_PALM)], view, (64, 64))
        assert (fb1.pixels == fb2.pixels).all()
        assert (l1.labels == l2.labels).all()

    def test_labels_match_scene_parts(self):
        near = Capsule([0, 0, 0.5], [0, 0.1, 0.5], 0.05)
        far = Capsule([0, 0, 1.5], [0, 0.1, 1.5], 0.3)
        fb, labels = render_view([(far, H_FOREARM), (near, H_PALM)], View(), (64, 64))
        present = set(np.unique(labels.labels)) - {0}
        assert H_PALM.label() in present
        # center pixel sees the near capsule
        assert labels.labels[32, 32] == H_PALM.label()

    def test_zoom_scales_apparent_size(self):
        cap = Capsule([0, -0.1, 0.8], [0, 0.1, 0.8], 0.04)
        _, l1 = render_view([(cap, H_PALM)], View(zoom=1.0), (128, 128))
        _, l2 = render_view([(cap, H_PALM)], View(zoom=2.0), (128, 128))
        rows1 = np.flatnonzero((l1.labels > 0).any(axis=1))
        rows2 = np.flatnonzero((l2.labels > 0).any(axis=1))
        h1 = rows1[-1] - rows1[0] + 1
        h2 = rows2[-1] - rows2[0] + 1
        assert h2 == pytest.approx(2 * h1, abs=3)

    def test_principal_shift_moves_content(self):
        cap = Capsule([0, -0.1, 0.8], [0, 0.1, 0.8], 0.04)
        _, l0 = render_view([(cap, H_PALM)], View(shift=(0.0, 0.0)), (128, 128))
        _, ls = render_view([(cap, H_PALM)], View(shift=(0.5, 0.0)), (128, 128))
        c0 = np.flatnonzero((l0.labels > 0).any(axis=0)).mean()
        cs = np.flatnonzero((ls.labels > 0).any(axis=0)).mean()
        assert cs < c0  # positive x-shift steers the frustum right, content moves left


class TestSilhouetteMask:
    def _render(self):
        cap = Capsule([0, -0.2, 0.8], [0, 0.2, 0.8], 0.06)
        return render_view([(cap, H_FOREARM)], View(), (64, 64))

    def test_all_parts_equals_nonbackground(self):
        _, labels = self._render()
        mask = silhouette_mask(labels, {H_FOREARM})
        assert (mask.bits == (labels.labels != 0)).all()

    def test_empty_parts(self):
        _, labels = self._render()
        assert silhouette_mask(labels, set()).count == 0

    def test_count_matches_recount(self):
        _, labels = self._render()
        mask = silhouette_mask(labels, {H_FOREARM, H_PALM})
        manual = int(np.isin(labels.labels, [H_FOREARM.label(), H_PALM.label()]).sum())
        assert mask.count == manual


def disk_mask(size, cx, cy, radius):
    ys, xs = np.mgrid[0:size, 0:size]
    return BitMask((xs - cx) ** 2 + (ys - cy) ** 2 <= radius ** 2)


class TestDrawOutline:
    def test_empty_mask_unchanged(self):
        fb = Framebuffer.filled(32, 32, (10, 20, 30, 255))
        out = draw_outline(fb, BitMask(np.zeros((32, 32), bool)), 3, (0, 255, 0, 255))
        assert (out.pixels == fb.pixels).all()

    def test_full_frame_mask_colors_edge_band(self):
        # no "outside" exists, so only the boundary itself (the frame edge
        # ring) is colored; everything deeper is interior and untouched
        fb = Framebuffer.filled(32, 32, (10, 20, 30, 255))
        full = BitMask(np.ones((32, 32), bool))
        out = draw_outline(fb, full, 3, (0, 255, 0, 255))
        colored = (out.pixels[:, :, 1] == 255)
        expected = np.zeros((32, 32), bool)
        expected[0, :] = expected[-1, :] = True
        expected[:, 0] = expected[:, -1] = True
        assert (colored == expected).all()

    def test_distance_transform_oracle(self):
        rng = np.random.default_rng(3)
        fb = Framebuffer.filled(48, 48, (50, 50, 50, 255))
        mask = disk_mask(48, 22, 25, 10)
        w = 3
        color = (0, 250, 0, 255)
        out = draw_outline(fb, mask, w, color)
        outline = (out.pixels == np.array(color, np.uint8)).all(axis=2)

        boundary = mask_boundary(mask)
        bys, bxs = np.nonzero(boundary)
        bpts = np.stack([bys, bxs], axis=1)

        # brute-force Chebyshev distances, independent of scipy
        oys, oxs = np.nonzero(outline)
        assert len(oys) > 0
        for y, x in zip(oys, oxs):
            dist = np.max(np.abs(bpts - [y, x]), axis=1).min()
            assert dist <= w + 1
            assert not (mask.bits[y, x] and not boundary[y, x])  # never interior
        for y, x in bpts:
            near = outline[max(0, y - w):y + w + 1, max(0, x - w):x + w + 1]
            assert near.any()

    def test_interior_untouched(self):
        fb = Framebuffer.filled(48, 48, (50, 50, 50, 255))
        mask = disk_mask(48, 24, 24, 12)
        out = draw_outline(fb, mask, 2, (0, 255, 0, 255))
        interior = mask.bits & ~mask_boundary(mask)
        assert (out.pixels[interior] == fb.pixels[interior]).all()


class TestFilters:
    def _noise_fb(self, size=48, seed=0):
        rng = np.random.default_rng(seed)
        px = rng.integers(0, 256, size=(size, size, 4), dtype=np.uint8)
        px[:, :, 3] = 255
        return Framebuffer(px)

    def test_grayscale_idempotent_and_rgb_equal(self):
        fb = self._noise_fb()
        g1 = apply_filter(fb, Grayscale())
        g2 = apply_filter(g1, Grayscale())
        assert (g1.pixels == g2.pixels).all()
        assert (g1.pixels[:, :, 0] == g1.pixels[:, :, 1]).all()
        assert (g1.pixels[:, :, 1] == g1.pixels[:, :, 2]).all()

    def test_grayscale_respects_region(self):
        fb = self._noise_fb()
        region = np.zeros((48, 48), bool)
        region[:24] = True
        out = apply_filter(fb, Grayscale(), BitMask(region))
        assert (out.pixels[24:] == fb.pixels[24:]).all()
        assert (out.pixels[:24, :, 0] == out.pixels[:24, :, 1]).all()

    def test_blur_preserves_interior_mean(self):
        fb = self._noise_fb(64, seed=1)
        sigma = 2.0
        out = apply_filter(fb, GaussianBlur(sigma))
        pad = int(np.ceil(3 * sigma))
        for c in range(3):
            m0 = fb.pixels[pad:-pad, pad:-pad, c].astype(float).mean()
            m1 = out.pixels[pad:-pad, pad:-pad, c].astype(float).mean()
            assert abs(m0 - m1) < 1.0

    def test_vignette_endpoints(self):
        fb = self._noise_fb(49, seed=2)  # odd size: exact center pixel
        out = apply_filter(fb, Vignette(0.2, 1.0))
        assert (out.pixels[24, 24] == fb.pixels[24, 24]).all()
        assert (out.pixels[0, 0] == BACKDROP_COLOR).all()
        assert (out.pixels[48, 48] == BACKDROP_COLOR).all()

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            GaussianBlur(0.0)
        with pytest.raises(ValueError):
            Vignette(0.8, 0.5)


class TestComposite:
    def test_transparent_overlay_noop(self):
        fb = Framebuffer.filled(64, 64, (40, 50, 60, 255))
        overlay = Framebuffer(np.zeros((16, 16, 4), dtype=np.uint8))
        out = composite(fb, overlay, "top_right", 0.25)
        assert (out.pixels == fb.pixels).all()

    def test_opaque_overlay_exact_rect(self):
        fb = Framebuffer.filled(64, 64, (40, 50, 60, 255))
        overlay = Framebuffer.filled(16, 16, (200, 10, 10, 255))
        out = composite(fb, overlay, "top_right", 0.25)
        h = w = 16  # 0.25 * 64
        rect = out.pixels[0:h, 64 - w:64]
        assert (rect == np.array([200, 10, 10, 255], np.uint8)).all()

    def test_outside_rect_bit_identical(self):
        rng = np.random.default_rng(5)
        px = rng.integers(0, 255, (64, 64, 4), dtype=np.uint8)
        px[:, :, 3] = 255
        fb = Framebuffer(px)
        overlay = Framebuffer.filled(10, 10, (1, 2, 3, 128))
        out = composite(fb, overlay, "bottom_left", 0.25)
        h = w = 16
        touched = np.zeros((64, 64), bool)
        touched[64 - h:, 0:w] = True
        assert (out.pixels[~touched] == fb.pixels[~touched]).all()
        diff = (out.pixels != fb.pixels).any(axis=2)
        assert diff[~touched].sum() == 0

    def test_oversize_overlay_rejected(self):
        fb = Framebuffer.filled(32, 32, (0, 0, 0, 255))
        overlay = Framebuffer.filled(16, 16, (1, 1, 1, 255))
        with pytest.raises(ValueError):
            composite(fb, overlay, "top_left", 1.5)


class TestPngRoundtrip:
    def test_png_bytes_roundtrip_and_determinism(self):
        fb = Framebuffer.filled(20, 10, (1, 2, 3, 255))
        fb.pixels[3, 4] = (9, 8, 7, 255)
        data1 = fb.to_png_bytes()
        data2 = fb.to_png_bytes()
        assert data1 == data2
        back = Framebuffer.from_png_bytes(data1)
        assert (back.pixels == fb.pixels).all()
